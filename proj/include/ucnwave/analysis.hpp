#pragma once

#include <vector>

#include "ucnwave/packet.hpp"
#include "ucnwave/stationary.hpp"

namespace ucn {

enum class MomentumSign { positive, negative };

/// Spatial window plus momentum-sign filter selecting one scattered component.
struct SpectrumRegion {
    double x_lo_um = 0.0;
    double x_hi_um = 0.0;
    MomentumSign sign = MomentumSign::positive;
};

/// Probability density over velocity with summary statistics. v ascends;
/// density integrates (sum density*dv) to weight <= 1.
struct VelocitySpectrum {
    std::vector<double> v_m_s;
    std::vector<double> density;   // per (m/s)
    double dv_m_s = 0.0;
    double weight = 0.0;
    double peak_v_m_s = 0.0;       // parabolic-interpolated maximum
    double mean_v_m_s = 0.0;
    double rms_width_m_s = 0.0;
    // Set when > 1e-4 of the windowed weight sits on the rejected momentum
    // sign — diagnoses incomplete separation.
    bool region_mismatch_warning = false;
};

/// Masks the state to the region (cos^2 taper over 2*dx at the window edges),
/// transforms, and maps |psi~|^2 from k to v = hbar k / m. Throws
/// validation_error when the window holds < 1e-6 probability.
VelocitySpectrum spectrum(const WaveState&, const SpectrumRegion&);

/// Convenience: spectrum of the whole domain, positive momenta.
VelocitySpectrum full_spectrum(const WaveState&);

struct SpectrumShift {
    double d_peak_v_m_s = 0.0;
    double d_mean_v_m_s = 0.0;
    double d_rms_width_m_s = 0.0;  // spectrum smearing
};
SpectrumShift shift(const VelocitySpectrum& result, const VelocitySpectrum& reference);

/// Mean shift with the reference restricted to the result's velocity support
/// (bins where the result density exceeds support_frac of its maximum). This
/// is the fig-5-style "dv" observable: it removes most of the static
/// transmission-filter bias so the packet-reshaping anomaly shows up as a
/// mean-shift effect.
double restricted_mean_shift(const VelocitySpectrum& result, const VelocitySpectrum& reference,
                             double support_frac = 1e-3);

/// First-order shift prediction dv = a * tau with tau the group delay of the
/// structure at rest. Positive a (structure accelerating along the packet's
/// motion) lengthens a positive-delay interaction and raises the exit
/// velocity, so the sign is +a*tau in the user-facing acceleration
/// convention.
double a_tau_prediction_m_s(const PotentialStructure&, double E0_neV, double a_m_s2,
                            Branch branch = Branch::transmission);

/// Packet-spectrum-weighted transmission sum_k T(E_k) w_k of an incident
/// state: the stationary-theory prediction for the transmitted weight through
/// the structure at rest.
double predicted_transmitted_weight(const VelocitySpectrum& incident,
                                    const PotentialStructure&);

}  // namespace ucn
