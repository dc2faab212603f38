#pragma once

#include <complex>
#include <vector>

#include "ucnwave/potential.hpp"

namespace ucn {

/// Plane-wave scattering amplitudes of a structure at rest.
///
/// Conventions (fixed): the incident wave comes from the left,
///   psi_left  = exp(+ik u) + r exp(-ik u),   u = x - x_left_edge,
///   psi_right = t exp(+ik_f u),
/// with both amplitudes referenced to the structure's left edge. A zero-height
/// structure therefore has t = 1 exactly, so the transmission phase measures
/// the excess over free flight and its energy derivative is the Wigner group
/// delay. For the reflection branch this reproduces the closed-form step GDT.
struct ScatteringAmplitudes {
    double E_neV = 0.0;
    std::complex<double> t{0.0, 0.0};
    std::complex<double> r{0.0, 0.0};
    double k_left = 0.0;   // 1/um
    double k_right = 0.0;  // real part; 0 when the exit is classically forbidden
    bool energy_nudged = false;  // E coincided with a layer height and was shifted

    double transmission() const;  // flux ratio (k_right/k_left)|t|^2
    double reflection() const;    // |r|^2
};

/// 2x2 layer-product solution, evanescent layers in real hyperbolic form with
/// magnitude scaling, flux conserving for real potentials.
ScatteringAmplitudes transfer_matrix(const PotentialStructure&, double E_neV);

enum class Branch { transmission, reflection };

/// Group delay tau = hbar * d(arg amplitude)/dE in ns, by central difference
/// of the unwrapped phase with an adaptive step and Richardson extrapolation.
double gdt_ns(const PotentialStructure&, double E_neV, Branch branch);

/// Closed form for total reflection from a semi-infinite step, 0 < E < U:
/// tau = hbar / sqrt(E(U-E)).
double gdt_step_analytic_ns(double E_neV, double U_neV);

/// n = sqrt(1 - U/E); requires E > 0 and E > U.
double refractive_index(double E_neV, double U_neV);

/// Quasi-bound estimates E_n from k_n d = n pi with k the wavenumber inside a
/// well of floor height U_well. Order-of-magnitude locator only.
std::vector<double> quasibound_energies(double d_um, int n_max, double U_well_neV = 0.0);

struct TransmissionRow {
    double E_neV, T, R, tau_ns;
};
std::vector<TransmissionRow> transmission_curve(const PotentialStructure&, double E_lo_neV,
                                                double E_hi_neV, int n_points,
                                                Branch tau_branch = Branch::transmission);

/// Location of the transmission maximum in [lo, hi] by iterative zoom scans.
double transmission_peak_energy(const PotentialStructure&, double E_lo_neV, double E_hi_neV);

struct EnergyWindow {
    double lo_neV = 0.0, hi_neV = 0.0;
    double width() const { return hi_neV - lo_neV; }
};
/// Widest contiguous window with T > threshold (or T < threshold when
/// below = true), edges linearly interpolated at the threshold crossings.
EnergyWindow widest_transmission_window(const PotentialStructure&, double E_lo_neV,
                                        double E_hi_neV, double threshold, int n_scan,
                                        bool below = false);

// ---- Closed-form frequency/energy shift helpers -----------------------------
// These evaluate the literal formulas; guard_ok flags whether the stated
// validity condition holds (a violated guard warns, it does not reject).

struct ShiftResult {
    double value = 0.0;
    bool guard_ok = true;
};

/// Light through an accelerating dielectric plate:
/// d_omega = omega a d (n-1)/c^2, valid for a d/c^2 << 1. SI units (rad/s).
ShiftResult tanaka_light_shift(double omega_rad_s, double a_m_s2, double d_m, double n);

/// Particle energy change through an accelerating refractive sample:
/// dE = m a d (1-n)/n, in neV. Positive a here means the sample accelerating
/// *toward* the incoming particle (this formula's historical sign; the
/// user-facing MotionLaw sign is the opposite, see a_tau_prediction).
ShiftResult kowalski_energy_neV(double a_m_s2, double d_um, double n);
ShiftResult kowalski_dv_m_s(double a_m_s2, double d_um, double n, double v_m_s);

/// Doppler shift at refraction into a medium moving with velocity V:
/// d_omega = (n'-1) k V, rad/us; valid for V << v (with v = hbar k / m).
ShiftResult doppler_boundary(double n_prime, double k_per_um, double V_m_s);

/// Two-boundary accelerating-sample shift d_omega = a d (1-n)/n * k/v,
/// rad/us; equals kowalski_energy/hbar. Valid for a*t_transit << v.
ShiftResult accel_refractive_shift(double a_m_s2, double d_um, double n, double k_per_um,
                                   double v_m_s);

/// Universal first-order law d_omega = k a dt, rad/us.
double universal_shift(double k_per_um, double a_m_s2, double dt_us);

}  // namespace ucn
