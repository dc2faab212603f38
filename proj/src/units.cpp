#include "ucnwave/units.hpp"

#include "ucnwave/errors.hpp"

namespace ucn {

double energy_to_velocity(double E_neV) {
    if (E_neV < 0.0) throw validation_error("energy_to_velocity: negative energy");
    return std::sqrt(2.0 * E_neV / mass);
}

double velocity_to_energy(double v_m_s) { return 0.5 * mass * v_m_s * v_m_s; }

double velocity_to_wavenumber(double v_m_s) { return mass * v_m_s / hbar; }

double wavenumber_to_velocity(double k_per_um) { return hbar * k_per_um / mass; }

double wavenumber_to_energy(double k_per_um) {
    return hbar * hbar * k_per_um * k_per_um / (2.0 * mass);
}

}  // namespace ucn
