#include "ucnwave/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ucnwave/errors.hpp"
#include "ucnwave/units.hpp"

namespace ucn {

double PotentialStructure::total_thickness_um() const {
    double d = 0.0;
    const std::size_t n_finite = layers.size() - (semi_infinite_tail ? 1 : 0);
    for (std::size_t i = 0; i < n_finite; ++i) d += layers[i].thickness_um;
    return d;
}

std::size_t PotentialStructure::boundary_count() const {
    // One boundary before each layer, plus the trailing edge for finite stacks.
    return layers.size() + (semi_infinite_tail ? 0 : 1);
}

double PotentialStructure::boundary_um(std::size_t i) const {
    double pos = 0.0;
    for (std::size_t l = 0; l < i && l < layers.size(); ++l) pos += layers[l].thickness_um;
    return pos;
}

double PotentialStructure::region_height_neV(std::size_t i) const {
    if (i == 0) return 0.0;
    if (i <= layers.size()) return layers[i - 1].height_neV;
    return 0.0;  // right exterior of a finite stack
}

double PotentialStructure::max_abs_height_neV() const {
    double m = 0.0;
    for (const auto& l : layers) m = std::max(m, std::abs(l.height_neV));
    return m;
}

namespace {
void check_thickness(double d, const char* what) {
    if (!(d > 0.0)) throw validation_error(std::string(what) + ": thickness must be positive");
}
}  // namespace

PotentialStructure barrier(double U_neV, double d_um) {
    check_thickness(d_um, "barrier");
    return {{{U_neV, d_um}}, false};
}

PotentialStructure well(double depth_neV, double d_um) {
    check_thickness(d_um, "well");
    return {{{-depth_neV, d_um}}, false};
}

PotentialStructure step(double U_neV) { return {{{U_neV, 0.0}}, true}; }

PotentialStructure double_step(double U1_neV, double d_um, double U2_neV) {
    check_thickness(d_um, "double_step");
    return {{{U1_neV, d_um}, {U2_neV, 0.0}}, true};
}

PotentialStructure nif(double U1_neV, double a_um, double U2_neV, double b_um) {
    check_thickness(a_um, "nif");
    check_thickness(b_um, "nif");
    return {{{U1_neV, a_um}, {U2_neV, b_um}, {U1_neV, a_um}}, false};
}

PotentialStructure lattice(int n_barriers, double U_neV, double barrier_um, double gap_um) {
    if (n_barriers < 1) throw validation_error("lattice: need at least one barrier");
    check_thickness(barrier_um, "lattice");
    check_thickness(gap_um, "lattice");
    PotentialStructure s;
    s.layers.reserve(2 * static_cast<std::size_t>(n_barriers) - 1);
    for (int i = 0; i < n_barriers; ++i) {
        if (i > 0) s.layers.push_back({0.0, gap_um});
        s.layers.push_back({U_neV, barrier_um});
    }
    return s;
}

double effective_potential(double rho_b_per_nm2) {
    // 2*pi*hbar^2/m in neV*um^2; rho_b converts as 1/nm^2 = 1e6/um^2.
    constexpr double coeff = 2.0 * std::numbers::pi * hbar * hbar / mass;
    return coeff * rho_b_per_nm2 * 1e6;
}

double rho_b_for_potential(double U_neV) {
    constexpr double coeff = 2.0 * std::numbers::pi * hbar * hbar / mass;
    return U_neV / (coeff * 1e6);
}

double MotionLaw::offset_um(double t_us) const {
    return s0_um + V0_m_s * t_us + 0.5 * a_m_s2 * accel_to_internal * t_us * t_us;
}

double MotionLaw::velocity_m_s(double t_us) const {
    return V0_m_s + a_m_s2 * accel_to_internal * t_us;
}

double MotionLaw::a_internal() const { return a_m_s2 * accel_to_internal; }

SampledPotential sample_support(const PotentialStructure& structure, const MotionLaw& motion,
                                const Grid& grid, double t_us) {
    const double offset = motion.offset_um(t_us);
    const double dx = grid.dx();

    const std::size_t n_layers = structure.layers.size();
    const std::size_t n_finite = n_layers - (structure.semi_infinite_tail ? 1 : 0);

    const double left = offset;  // structure origin = left edge of layer 0
    double right = offset;
    for (std::size_t l = 0; l < n_finite; ++l) right += structure.layers[l].thickness_um;

    if (left < grid.x_min())
        throw validation_error("sample: structure extends past the left domain edge");
    if (!structure.semi_infinite_tail && right > grid.x_max())
        throw validation_error("sample: structure extends past the right domain edge");
    if (structure.semi_infinite_tail && right > grid.x_max())
        throw validation_error("sample: semi-infinite tail boundary past the right domain edge");

    SampledPotential out;
    if (structure.layers.empty()) return out;

    const double support_hi = structure.semi_infinite_tail ? grid.x_max() : right;
    const std::size_t j_lo = grid.cell_of(left);
    const std::size_t j_hi =
        std::min(grid.size(), grid.cell_of(support_hi - 1e-12 * dx) + 1);
    if (j_hi <= j_lo) return out;

    out.j0 = j_lo;
    out.values.assign(j_hi - j_lo, 0.0);

    // Accumulate each layer's exact overlap with each cell [x_j, x_j + dx).
    double layer_lo = offset;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const bool tail = structure.semi_infinite_tail && l + 1 == n_layers;
        const double layer_hi = tail ? grid.x_max() : layer_lo + structure.layers[l].thickness_um;
        const double h = structure.layers[l].height_neV;
        if (h != 0.0) {
            std::size_t j = grid.cell_of(layer_lo);
            for (; j < grid.size(); ++j) {
                const double cell_lo = grid.x(j);
                if (cell_lo >= layer_hi) break;
                const double ov = std::min(layer_hi, cell_lo + dx) - std::max(layer_lo, cell_lo);
                if (ov > 0.0 && j >= j_lo && j < j_hi)
                    out.values[j - j_lo] += h * (ov / dx);
            }
        }
        layer_lo = layer_hi;
    }
    return out;
}

std::vector<double> sample(const PotentialStructure& structure, const MotionLaw& motion,
                           const Grid& grid, double t_us) {
    const auto s = sample_support(structure, motion, grid, t_us);
    std::vector<double> full(grid.size(), 0.0);
    std::copy(s.values.begin(), s.values.end(), full.begin() + static_cast<long>(s.j0));
    return full;
}

}  // namespace ucn
