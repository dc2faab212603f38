#include "ucnwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ucnwave/errors.hpp"
#include "ucnwave/fourier.hpp"
#include "ucnwave/units.hpp"

namespace ucn {

namespace {

// 3-point parabolic interpolation on log density around the maximum bin.
double interpolated_peak(const std::vector<double>& v, const std::vector<double>& d) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d[i] > d[j]) j = i;
    if (j == 0 || j + 1 == d.size()) return v[j];
    const double a = d[j - 1], b = d[j], c = d[j + 1];
    if (a <= 0.0 || b <= 0.0 || c <= 0.0) return v[j];
    const double la = std::log(a), lb = std::log(b), lc = std::log(c);
    const double denom = la - 2.0 * lb + lc;
    if (denom >= 0.0) return v[j];
    const double frac = 0.5 * (la - lc) / denom;
    return v[j] + frac * (v[j + 1] - v[j]);
}

}  // namespace

VelocitySpectrum spectrum(const WaveState& state, const SpectrumRegion& region) {
    const Grid& g = *state.grid;
    const std::size_t n = g.size();
    if (!(region.x_hi_um > region.x_lo_um))
        throw validation_error("spectrum: empty spatial window");

    // Mask with a cos^2 taper over 2*dx at the window edges (skipped where the
    // window ends at a domain edge).
    std::vector<std::complex<double>> masked(n);
    const double taper = 2.0 * g.dx();
    const bool lo_at_edge = region.x_lo_um <= g.x_min() + 0.5 * g.dx();
    const bool hi_at_edge = region.x_hi_um >= g.x_max() - 0.5 * g.dx();
    for (std::size_t j = 0; j < n; ++j) {
        const double x = g.x(j);
        double w = 0.0;
        if (x >= region.x_lo_um && x <= region.x_hi_um) {
            w = 1.0;
            const double s_lo = x - region.x_lo_um;
            const double s_hi = region.x_hi_um - x;
            if (!lo_at_edge && s_lo < taper)
                w *= 0.5 * (1.0 - std::cos(std::numbers::pi * s_lo / taper));
            if (!hi_at_edge && s_hi < taper)
                w *= 0.5 * (1.0 - std::cos(std::numbers::pi * s_hi / taper));
        }
        masked[j] = w * state.psi[j];
    }

    double w_window = 0.0;
    for (const auto& z : masked) w_window += std::norm(z);
    w_window *= g.dx();
    if (w_window < 1e-6)
        throw validation_error("spectrum: window holds < 1e-6 probability (empty component)");

    const auto spec = forward_transform(masked);

    // Spectral weights under the DFT convention: w_m = |psi~_m|^2 dx / n,
    // so sum_m w_m equals the windowed real-space probability (Parseval).
    const double scale = g.dx() / static_cast<double>(n);
    const bool want_positive = region.sign == MomentumSign::positive;

    VelocitySpectrum out;
    out.dv_m_s = wavenumber_to_velocity(g.dk());
    double w_selected = 0.0, w_rejected = 0.0;

    // ascending v: positive branch m = 0..n/2-1 (k = 0..k_max-dk), negative
    // branch m = n/2..n-1 (k = -k_max..-dk).
    const std::size_t half = n / 2;
    const std::size_t m_begin = want_positive ? 0 : half;
    const std::size_t m_end = want_positive ? half : n;
    out.v_m_s.reserve(half);
    out.density.reserve(half);
    for (std::size_t m = 0; m < n; ++m) {
        const double wgt = std::norm(spec[m]) * scale;
        if (m >= m_begin && m < m_end) {
            out.v_m_s.push_back(wavenumber_to_velocity(g.k(m)));
            out.density.push_back(wgt / out.dv_m_s);
            w_selected += wgt;
        } else {
            w_rejected += wgt;
        }
    }

    out.weight = w_selected;
    out.region_mismatch_warning = w_rejected > 1e-4 * (w_selected + w_rejected);

    if (w_selected < 1e-6)
        throw validation_error("spectrum: selected momentum component holds < 1e-6 probability");

    out.peak_v_m_s = interpolated_peak(out.v_m_s, out.density);
    double mean = 0.0;
    for (std::size_t i = 0; i < out.v_m_s.size(); ++i) mean += out.v_m_s[i] * out.density[i];
    mean *= out.dv_m_s / w_selected;
    out.mean_v_m_s = mean;
    double var = 0.0;
    for (std::size_t i = 0; i < out.v_m_s.size(); ++i) {
        const double d = out.v_m_s[i] - mean;
        var += d * d * out.density[i];
    }
    out.rms_width_m_s = std::sqrt(var * out.dv_m_s / w_selected);
    return out;
}

VelocitySpectrum full_spectrum(const WaveState& state) {
    const Grid& g = *state.grid;
    return spectrum(state, {g.x_min(), g.x_max(), MomentumSign::positive});
}

SpectrumShift shift(const VelocitySpectrum& result, const VelocitySpectrum& reference) {
    if (result.v_m_s.empty() || reference.v_m_s.empty())
        throw validation_error("shift: empty spectrum");
    return {result.peak_v_m_s - reference.peak_v_m_s, result.mean_v_m_s - reference.mean_v_m_s,
            result.rms_width_m_s - reference.rms_width_m_s};
}

double restricted_mean_shift(const VelocitySpectrum& result, const VelocitySpectrum& reference,
                             double support_frac) {
    if (result.v_m_s.size() != reference.v_m_s.size() ||
        result.v_m_s.front() != reference.v_m_s.front())
        throw validation_error("restricted_mean_shift: spectra on different velocity lattices");
    const double peak = *std::max_element(result.density.begin(), result.density.end());
    const double cut = support_frac * peak;
    double wr = 0.0, mr = 0.0, wf = 0.0, mf = 0.0;
    for (std::size_t i = 0; i < result.v_m_s.size(); ++i) {
        if (result.density[i] < cut) continue;
        wr += result.density[i];
        mr += result.density[i] * result.v_m_s[i];
        wf += reference.density[i];
        mf += reference.density[i] * reference.v_m_s[i];
    }
    if (wr <= 0.0 || wf <= 0.0)
        throw validation_error("restricted_mean_shift: empty support overlap");
    return mr / wr - mf / wf;
}

double a_tau_prediction_m_s(const PotentialStructure& structure, double E0_neV, double a_m_s2,
                            Branch branch) {
    const double tau_us = gdt_ns(structure, E0_neV, branch) * 1e-3;
    return a_m_s2 * accel_to_internal * tau_us;
}

double predicted_transmitted_weight(const VelocitySpectrum& incident,
                                    const PotentialStructure& structure) {
    double w = 0.0;
    for (std::size_t i = 0; i < incident.v_m_s.size(); ++i) {
        const double wgt = incident.density[i] * incident.dv_m_s;
        if (wgt <= 0.0) continue;
        const double E = velocity_to_energy(incident.v_m_s[i]);
        if (E <= 0.0) continue;
        w += wgt * transfer_matrix(structure, E).transmission();
    }
    return w;
}

}  // namespace ucn
