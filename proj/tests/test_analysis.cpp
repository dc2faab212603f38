#include <doctest.h>

#include <cmath>
#include <memory>

#include "ucnwave/analysis.hpp"
#include "ucnwave/errors.hpp"
#include "ucnwave/packet.hpp"
#include "ucnwave/potential.hpp"
#include "ucnwave/propagator.hpp"
#include "ucnwave/units.hpp"

using namespace ucn;

namespace {

std::shared_ptr<const Grid> grid16k() {
    return std::make_shared<const Grid>(make_grid(-32.0, 32.0, 1u << 13));
}

}  // namespace

TEST_CASE("spectrum: fresh Gaussian peaks at v0 with sub-bin accuracy") {
    auto grid = grid16k();
    const auto spec = PacketSpec::with_delta_x(100.0, -5.0, 1.35);
    const auto state = make_gaussian(spec, grid);
    const auto s = full_spectrum(state);
    CHECK(std::abs(s.peak_v_m_s - spec.v0()) < 0.1 * s.dv_m_s);
    CHECK(s.mean_v_m_s == doctest::Approx(spec.v0()).epsilon(1e-6));
    CHECK(s.weight == doctest::Approx(1.0).epsilon(1e-9));
    // amplitude sigma_k = 1/delta_x means density sigma_v = hbar/(m delta_x sqrt(2))
    const double sigma_v = hbar / (mass * spec.delta_x_um * std::sqrt(2.0));
    CHECK(s.rms_width_m_s == doctest::Approx(sigma_v).epsilon(1e-3));
    CHECK_FALSE(s.region_mismatch_warning);
}

TEST_CASE("spectrum: total reflection from a high step lands at -v0") {
    auto grid = grid16k();
    const auto spec = PacketSpec::with_delta_x(100.0, -6.0, 1.35);
    auto state = make_gaussian(spec, grid);
    const auto structure = step(300.0);

    StepPlan plan;
    plan.theta_us = suggest_theta(structure, spec, 0.0);
    plan.t_max_us = 8.0;
    plan.min_time_us = 6.0 / spec.speed();
    plan.delta_x_um = spec.delta_x_um;
    // at 3 delta_x the trailing Gaussian tail (~1e-5) is still incoming;
    // 4 delta_x brings the unreflected remnant below 1e-6
    plan.separation_multiple = 4.0;
    const auto res = run(std::move(state), structure, MotionLaw{}, plan);

    const auto refl = spectrum(res.state, {grid->x_min(), 0.0, MomentumSign::negative});
    CHECK(refl.weight == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(refl.peak_v_m_s == doctest::Approx(-spec.v0()).epsilon(2e-3));
}

TEST_CASE("spectrum: empty window is an error") {
    auto grid = grid16k();
    const auto state = make_gaussian(PacketSpec::with_delta_x(100.0, -5.0, 1.35), grid);
    CHECK_THROWS_AS(spectrum(state, {20.0, 30.0, MomentumSign::positive}), validation_error);
    // wrong momentum sign on a pure rightward packet
    CHECK_THROWS_AS(spectrum(state, {-30.0, 30.0, MomentumSign::negative}), validation_error);
}

TEST_CASE("shift: identical spectra give zero") {
    auto grid = grid16k();
    const auto state = make_gaussian(PacketSpec::with_delta_x(100.0, -5.0, 1.35), grid);
    const auto s = full_spectrum(state);
    const auto d = shift(s, s);
    CHECK(d.d_peak_v_m_s == 0.0);
    CHECK(d.d_mean_v_m_s == 0.0);
    CHECK(d.d_rms_width_m_s == 0.0);
}

TEST_CASE("peak interpolation is sub-bin across arbitrary packet energies") {
    // k0 generally falls between wavenumber bins; the log-parabola estimator
    // must recover it to a small fraction of a bin anyway.
    auto grid = grid16k();
    for (double E0 : {87.3, 101.7, 113.9}) {
        const auto spec = PacketSpec::with_delta_x(E0, -5.0, 1.35);
        const auto s = full_spectrum(make_gaussian(spec, grid));
        CHECK(std::abs(s.peak_v_m_s - spec.v0()) < 0.1 * s.dv_m_s);
    }
}

TEST_CASE("restricted mean shift ignores out-of-support filter bias") {
    auto grid = grid16k();
    const auto state = make_gaussian(PacketSpec::with_delta_x(100.0, -5.0, 1.35), grid);
    const auto s = full_spectrum(state);
    CHECK(restricted_mean_shift(s, s) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("a tau prediction: zero acceleration, scale anchors") {
    const auto structure = barrier(50.0, 1.0);
    CHECK(a_tau_prediction_m_s(structure, 100.0, 0.0) == 0.0);

    // Above-barrier excess delay ~ (d/v)(1/n - 1) = 0.0947 us/(1e6 m/s^2) scale:
    // at a = 1e6 m/s^2 the prediction is ~0.095 m/s, positive along the motion.
    const double pred = a_tau_prediction_m_s(structure, 100.0, 1e6);
    CHECK(pred == doctest::Approx(0.0947).epsilon(0.05));
    // flipping a flips the prediction exactly
    CHECK(a_tau_prediction_m_s(structure, 100.0, -1e6) == doctest::Approx(-pred).epsilon(1e-12));
}

TEST_CASE("a tau prediction: lattice passband scale") {
    // The prediction uses the excess (Wigner) delay, tens of ns mid-band for
    // the 51-barrier lattice, so at a = 5e5 m/s^2 the product sits at a few
    // hundredths of a m/s on a passband resonance.
    const auto lat = lattice(51, 250.0, 0.005, 0.025);
    const auto win = widest_transmission_window(lat, 150.0, 249.0, 0.5, 2600);
    const double mid = 0.5 * (win.lo_neV + win.hi_neV);
    const double E0 = transmission_peak_energy(lat, mid - 2.0, mid + 2.0);
    const double pred = a_tau_prediction_m_s(lat, E0, 5e5);
    CHECK(std::abs(pred) > 0.01);
    CHECK(std::abs(pred) < 0.15);
}
