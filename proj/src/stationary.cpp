#include "ucnwave/stationary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "ucnwave/errors.hpp"
#include "ucnwave/units.hpp"

namespace ucn {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

double ScatteringAmplitudes::transmission() const {
    if (k_right <= 0.0) return 0.0;
    return (k_right / k_left) * std::norm(t);
}

double ScatteringAmplitudes::reflection() const { return std::norm(r); }

namespace {

// Real (psi, psi') transfer matrix across one layer. Evanescent layers take
// the hyperbolic branch, so entries stay real and the decaying/growing pair
// never mixes through complex exponentials.
struct Mat2 {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
};

Mat2 layer_matrix(double E_neV, double U_neV, double d_um) {
    const double q2 = two_m_over_hbar2 * (E_neV - U_neV);
    Mat2 m;
    if (q2 > 0.0) {
        const double q = std::sqrt(q2);
        const double c = std::cos(q * d_um), s = std::sin(q * d_um);
        m = {c, s / q, -q * s, c};
    } else if (q2 < 0.0) {
        const double ka = std::sqrt(-q2);
        const double c = std::cosh(ka * d_um), s = std::sinh(ka * d_um);
        m = {c, s / ka, ka * s, c};
    } else {
        m = {1.0, d_um, 0.0, 1.0};
    }
    return m;
}

// b * a with magnitude scaling; log_scale accumulates the factored-out size
// so thick forbidden stacks cannot overflow.
Mat2 mul_scaled(const Mat2& b, const Mat2& a, double& log_scale) {
    Mat2 r{b.m11 * a.m11 + b.m12 * a.m21, b.m11 * a.m12 + b.m12 * a.m22,
           b.m21 * a.m11 + b.m22 * a.m21, b.m21 * a.m12 + b.m22 * a.m22};
    const double mag = std::max(std::max(std::abs(r.m11), std::abs(r.m12)),
                                std::max(std::abs(r.m21), std::abs(r.m22)));
    if (mag > 1e100) {
        r.m11 /= mag;
        r.m12 /= mag;
        r.m21 /= mag;
        r.m22 /= mag;
        log_scale += std::log(mag);
    }
    return r;
}

}  // namespace

ScatteringAmplitudes transfer_matrix(const PotentialStructure& structure, double E_neV) {
    if (!(E_neV > 0.0)) throw validation_error("transfer_matrix: E must be positive");

    // k_i = 0 degeneracy guard: nudge E off any exact layer height.
    double E = E_neV;
    bool nudged = false;
    for (const auto& l : structure.layers) {
        if (std::abs(E - l.height_neV) <= 1e-12 * std::max(std::abs(E), std::abs(l.height_neV))) {
            E *= 1.0 + 1e-9;
            nudged = true;
            break;
        }
    }

    const std::size_t n_layers = structure.layers.size();
    const std::size_t n_finite = n_layers - (structure.semi_infinite_tail ? 1 : 0);

    Mat2 M;
    double log_scale = 0.0;
    double D = 0.0;
    for (std::size_t l = 0; l < n_finite; ++l) {
        M = mul_scaled(layer_matrix(E, structure.layers[l].height_neV,
                                    structure.layers[l].thickness_um),
                       M, log_scale);
        D += structure.layers[l].thickness_um;
    }

    const double k = std::sqrt(two_m_over_hbar2 * E);
    const double U_exit = structure.semi_infinite_tail ? structure.layers.back().height_neV : 0.0;
    const double kf2 = two_m_over_hbar2 * (E - U_exit);
    const cplx k_f = kf2 >= 0.0 ? cplx{std::sqrt(kf2), 0.0} : cplx{0.0, std::sqrt(-kf2)};

    // Radiation condition psi' = i k_f psi on the right gives, with
    //   P = m21 - i k_f m11,  S = i k m22 + k k_f m12,
    // the pair r = (P+S)/(S-P) and t~ = 2ik/(S-P) (amplitude at the right
    // edge). Computing t through 1+r instead would cancel catastrophically on
    // opaque stacks, where r -> -1 while t is exponentially small.
    const cplx P = M.m21 - I * k_f * M.m11;
    const cplx S = I * k * M.m22 + k * k_f * M.m12;
    const cplx r = (P + S) / (S - P);
    const cplx t_edge = 2.0 * I * k / (S - P) * std::exp(-log_scale);

    ScatteringAmplitudes out;
    out.E_neV = E;
    out.energy_nudged = nudged;
    out.k_left = k;
    out.k_right = kf2 > 0.0 ? std::sqrt(kf2) : 0.0;
    out.r = r;
    // t referenced to the left edge so a zero-height structure gives t = 1
    // exactly; for an evanescent exit reference at the right edge instead
    // (exp(+kappa D) would overflow and the flux is zero regardless).
    out.t = kf2 > 0.0 ? t_edge * std::exp(-I * k_f * D) : t_edge;
    return out;
}

namespace {

double amplitude_phase(const PotentialStructure& s, double E, Branch b) {
    const auto amp = transfer_matrix(s, E);
    const cplx a = b == Branch::transmission ? amp.t : amp.r;
    if (std::abs(a) < 1e-300)
        throw numerical_error("gdt: amplitude vanishes at E = " + std::to_string(E));
    return std::arg(a);
}

// Unwrapped central difference over +-dE and +-dE/2 with Richardson
// extrapolation; empty when adjacent phase gaps approach pi (step too big).
std::optional<double> tau_us_at(const PotentialStructure& s, double E, Branch b, double dE) {
    const std::array<double, 5> es{E - dE, E - 0.5 * dE, E, E + 0.5 * dE, E + dE};
    std::array<double, 5> phi{};
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (!(es[i] > 0.0)) return std::nullopt;
        double p = amplitude_phase(s, es[i], b);
        if (i > 0) {
            const double two_pi = 2.0 * std::numbers::pi;
            double d = p - phi[i - 1];
            d -= two_pi * std::round(d / two_pi);
            if (std::abs(d) > 0.9 * std::numbers::pi) return std::nullopt;
            p = phi[i - 1] + d;
        }
        phi[i] = p;
    }
    const double tau_full = hbar * (phi[4] - phi[0]) / (2.0 * dE);
    const double tau_half = hbar * (phi[3] - phi[1]) / dE;
    return (4.0 * tau_half - tau_full) / 3.0;
}

}  // namespace

double gdt_ns(const PotentialStructure& structure, double E_neV, Branch branch) {
    if (!(E_neV > 0.0)) throw validation_error("gdt: E must be positive");

    // Coarse pass sizes the step off the local delay scale Gamma ~ 2 hbar/tau;
    // a fixed step destroys the delay on narrow resonances.
    double dE = 1e-3 * E_neV;
    std::optional<double> coarse;
    for (int i = 0; i < 40 && !(coarse = tau_us_at(structure, E_neV, branch, dE)); ++i) dE *= 0.5;
    if (!coarse) throw numerical_error("gdt: phase too steep to resolve at E = " +
                                       std::to_string(E_neV));

    if (std::abs(*coarse) > 1e-12) {
        const double gamma_est = 2.0 * hbar / std::abs(*coarse);
        dE = std::max(1e-4 * E_neV, std::min(gamma_est / 50.0, 1e-2 * E_neV));
    }
    std::optional<double> tau;
    for (int i = 0; i < 60 && !(tau = tau_us_at(structure, E_neV, branch, dE)); ++i) dE *= 0.5;
    if (!tau) throw numerical_error("gdt: failed to resolve the phase derivative at E = " +
                                    std::to_string(E_neV));
    return *tau * 1e3;  // us -> ns
}

double gdt_step_analytic_ns(double E_neV, double U_neV) {
    if (!(E_neV > 0.0 && E_neV < U_neV))
        throw validation_error("gdt_step_analytic: requires 0 < E < U");
    return 1e3 * hbar / std::sqrt(E_neV * (U_neV - E_neV));
}

double refractive_index(double E_neV, double U_neV) {
    if (!(E_neV > 0.0)) throw validation_error("refractive_index: E must be positive");
    if (E_neV <= U_neV)
        throw validation_error("refractive_index: imaginary for E <= U");
    return std::sqrt(1.0 - U_neV / E_neV);
}

std::vector<double> quasibound_energies(double d_um, int n_max, double U_well_neV) {
    if (!(d_um > 0.0)) throw validation_error("quasibound_energies: d must be positive");
    if (n_max < 1) throw validation_error("quasibound_energies: n_max must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const double kn = static_cast<double>(n) * std::numbers::pi / d_um;
        out.push_back(U_well_neV + wavenumber_to_energy(kn));
    }
    return out;
}

std::vector<TransmissionRow> transmission_curve(const PotentialStructure& structure,
                                                double E_lo_neV, double E_hi_neV, int n_points,
                                                Branch tau_branch) {
    if (!(E_hi_neV > E_lo_neV) || n_points < 2)
        throw validation_error("transmission_curve: bad energy range");
    std::vector<TransmissionRow> rows;
    rows.reserve(static_cast<std::size_t>(n_points));
    const double dE = (E_hi_neV - E_lo_neV) / static_cast<double>(n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        const double E = E_lo_neV + dE * i;
        const auto amp = transfer_matrix(structure, E);
        double tau = std::numeric_limits<double>::quiet_NaN();
        try {
            tau = gdt_ns(structure, E, tau_branch);
        } catch (const numerical_error&) {
            // vanishing amplitude (deep band gap): leave NaN in the column
        }
        rows.push_back({E, amp.transmission(), amp.reflection(), tau});
    }
    return rows;
}

double transmission_peak_energy(const PotentialStructure& structure, double E_lo_neV,
                                double E_hi_neV) {
    double lo = E_lo_neV, hi = E_hi_neV;
    double best_E = 0.5 * (lo + hi);
    for (int pass = 0; pass < 6; ++pass) {
        const int n = 200;
        const double dE = (hi - lo) / n;
        double best_T = -1.0;
        for (int i = 0; i <= n; ++i) {
            const double E = lo + dE * i;
            const double T = transfer_matrix(structure, E).transmission();
            if (T > best_T) {
                best_T = T;
                best_E = E;
            }
        }
        lo = std::max(E_lo_neV, best_E - 2.0 * dE);
        hi = std::min(E_hi_neV, best_E + 2.0 * dE);
    }
    return best_E;
}

EnergyWindow widest_transmission_window(const PotentialStructure& structure, double E_lo_neV,
                                        double E_hi_neV, double threshold, int n_scan,
                                        bool below) {
    if (n_scan < 8 || !(E_hi_neV > E_lo_neV))
        throw validation_error("widest_transmission_window: bad scan parameters");
    const double dE = (E_hi_neV - E_lo_neV) / (n_scan - 1);
    std::vector<double> T(static_cast<std::size_t>(n_scan));
    for (int i = 0; i < n_scan; ++i)
        T[static_cast<std::size_t>(i)] =
            transfer_matrix(structure, E_lo_neV + dE * i).transmission();

    auto inside = [&](std::size_t i) { return below ? T[i] < threshold : T[i] > threshold; };

    EnergyWindow best{0.0, 0.0};
    std::size_t i = 0;
    while (i < T.size()) {
        if (!inside(i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < T.size() && inside(j + 1)) ++j;
        // interpolate the crossing on each side
        double lo = E_lo_neV + dE * static_cast<double>(i);
        if (i > 0) {
            const double f = (threshold - T[i - 1]) / (T[i] - T[i - 1]);
            lo = E_lo_neV + dE * (static_cast<double>(i - 1) + f);
        }
        double hi = E_lo_neV + dE * static_cast<double>(j);
        if (j + 1 < T.size()) {
            const double f = (threshold - T[j]) / (T[j + 1] - T[j]);
            hi = E_lo_neV + dE * (static_cast<double>(j) + f);
        }
        if (hi - lo > best.width()) best = {lo, hi};
        i = j + 1;
    }
    if (best.width() <= 0.0)
        throw validation_error("widest_transmission_window: no window found");
    return best;
}

ShiftResult tanaka_light_shift(double omega_rad_s, double a_m_s2, double d_m, double n) {
    const double small = std::abs(a_m_s2) * d_m / (si::c_m_s * si::c_m_s);
    return {omega_rad_s * a_m_s2 * d_m * (n - 1.0) / (si::c_m_s * si::c_m_s), small < 1e-2};
}

ShiftResult kowalski_energy_neV(double a_m_s2, double d_um, double n) {
    const double a_int = a_m_s2 * accel_to_internal;
    return {mass * a_int * d_um * (1.0 - n) / n, true};
}

ShiftResult kowalski_dv_m_s(double a_m_s2, double d_um, double n, double v_m_s) {
    const auto dE = kowalski_energy_neV(a_m_s2, d_um, n);
    return {dE.value / (mass * v_m_s), dE.guard_ok};
}

ShiftResult doppler_boundary(double n_prime, double k_per_um, double V_m_s) {
    const double v = wavenumber_to_velocity(k_per_um);
    return {(n_prime - 1.0) * k_per_um * V_m_s, std::abs(V_m_s) < 0.1 * std::abs(v)};
}

ShiftResult accel_refractive_shift(double a_m_s2, double d_um, double n, double k_per_um,
                                   double v_m_s) {
    const double a_int = a_m_s2 * accel_to_internal;
    const double transit = d_um / (n * v_m_s);
    return {a_int * d_um * ((1.0 - n) / n) * (k_per_um / v_m_s),
            std::abs(a_int) * transit < 0.1 * std::abs(v_m_s)};
}

double universal_shift(double k_per_um, double a_m_s2, double dt_us) {
    return k_per_um * a_m_s2 * accel_to_internal * dt_us;
}

}  // namespace ucn
