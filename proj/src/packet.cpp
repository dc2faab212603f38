#include "ucnwave/packet.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ucnwave/errors.hpp"
#include "ucnwave/units.hpp"

namespace ucn {

double delta_x_to_delta_E(double delta_x_um, double E0_neV) {
    if (delta_x_um <= 0.0) throw validation_error("packet: delta_x must be positive");
    return hbar * energy_to_velocity(E0_neV) / delta_x_um;
}

double delta_E_to_delta_x(double delta_E_neV, double E0_neV) {
    if (delta_E_neV <= 0.0) throw validation_error("packet: delta_E must be positive");
    return hbar * energy_to_velocity(E0_neV) / delta_E_neV;
}

PacketSpec PacketSpec::with_delta_x(double E0_neV, double x0_um, double delta_x_um,
                                    int direction) {
    if (E0_neV <= 0.0) throw validation_error("packet: E0 must be positive");
    if (delta_x_um <= 0.0) throw validation_error("packet: delta_x must be positive");
    PacketSpec s;
    s.E0_neV = E0_neV;
    s.x0_um = x0_um;
    s.delta_x_um = delta_x_um;
    s.direction = direction >= 0 ? +1 : -1;
    return s;
}

PacketSpec PacketSpec::with_delta_E(double E0_neV, double x0_um, double delta_E_neV,
                                    int direction) {
    return with_delta_x(E0_neV, x0_um, delta_E_to_delta_x(delta_E_neV, E0_neV), direction);
}

double PacketSpec::speed() const { return energy_to_velocity(E0_neV); }
double PacketSpec::v0() const { return direction * speed(); }
double PacketSpec::k0() const { return velocity_to_wavenumber(v0()); }
double PacketSpec::delta_E_neV() const { return delta_x_to_delta_E(delta_x_um, E0_neV); }

double WaveState::norm() const {
    double s = 0.0;
    for (const auto& z : psi) s += std::norm(z);
    return s * grid->dx();
}

WaveState make_gaussian(const PacketSpec& spec, std::shared_ptr<const Grid> grid) {
    const Grid& g = *grid;
    const double dx = g.dx();
    const double k0 = spec.k0();

    if (spec.x0_um - g.x_min() < 4.0 * spec.delta_x_um ||
        g.x_max() - spec.x0_um < 4.0 * spec.delta_x_um)
        throw validation_error("make_gaussian: packet clipped by the domain edge (needs 4*delta_x)");
    if (spec.delta_x_um < 8.0 * dx)
        throw validation_error("make_gaussian: under-resolved packet, delta_x < 8*dx");
    if (std::abs(k0) * dx >= std::numbers::pi / 4.0)
        throw validation_error("make_gaussian: k0*dx = " + std::to_string(std::abs(k0) * dx) +
                               " exceeds the pi/4 Nyquist margin");

    WaveState state;
    state.grid = std::move(grid);
    state.psi.resize(g.size());
    state.t_us = 0.0;

    const double inv2s2 = 1.0 / (2.0 * spec.delta_x_um * spec.delta_x_um);
    double nrm = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double u = g.x(j) - spec.x0_um;
        const double env = std::exp(-u * u * inv2s2);
        state.psi[j] = std::polar(env, k0 * u);
        nrm += env * env;
    }
    nrm = 1.0 / std::sqrt(nrm * dx);
    for (auto& z : state.psi) z *= nrm;
    return state;
}

}  // namespace ucn
