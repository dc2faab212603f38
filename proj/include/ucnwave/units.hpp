#pragma once

#include <cmath>

// Internal unit system used throughout the library:
//   length in um, time in us, energy in neV.
// Convenient consequences: velocities in um/us are numerically equal to m/s,
// wavenumbers are in 1/um, accelerations in um/us^2 equal 1e6 m/s^2.

namespace ucn {

namespace si {
inline constexpr double neutron_mass_kg = 1.67492749804e-27;  // CODATA 2018
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double neV_J = 1.602176634e-28;
inline constexpr double c_m_s = 299792458.0;
}  // namespace si

// hbar in neV*us (= 0.6582119569...).
inline constexpr double hbar = si::hbar_J_s / (si::neV_J * 1e-6);

// Neutron mass in neV*us^2/um^2. One neV*us^2/um^2 equals neV_J kilograms
// because the us^2/um^2 factors cancel, so the ratio below is exact.
inline constexpr double mass = si::neutron_mass_kg / si::neV_J;

// hbar/(2m) in um^2/us, the free-dispersion coefficient omega(k) = hbar k^2 / 2m.
inline constexpr double half_dispersion = hbar / (2.0 * mass);

// 2m/hbar^2 in 1/(neV um^2): k^2 = two_m_over_hbar2 * E.
inline constexpr double two_m_over_hbar2 = 2.0 * mass / (hbar * hbar);

// Conversion between m/s^2 (user-facing) and um/us^2 (internal).
inline constexpr double accel_to_internal = 1e-6;

double energy_to_velocity(double E_neV);              // sqrt(2E/m), E >= 0
double velocity_to_energy(double v_m_s);              // m v^2 / 2
double velocity_to_wavenumber(double v_m_s);          // m v / hbar, 1/um
double wavenumber_to_velocity(double k_per_um);       // hbar k / m, m/s
double wavenumber_to_energy(double k_per_um);         // hbar^2 k^2 / 2m

}  // namespace ucn
