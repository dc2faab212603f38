#pragma once

#include <cstddef>
#include <vector>

#include "ucnwave/grid.hpp"

namespace ucn {

struct Layer {
    double height_neV = 0.0;
    double thickness_um = 0.0;
};

/// Piecewise-constant potential in its own rest frame. The origin sits at the
/// left edge of the first layer; the potential is zero outside the stack.
/// With semi_infinite_tail set, the last layer extends to +infinity (its
/// thickness entry is ignored) — used for step-like reflectors.
struct PotentialStructure {
    std::vector<Layer> layers;
    bool semi_infinite_tail = false;

    double total_thickness_um() const;        // finite layers only
    std::size_t boundary_count() const;       // interfaces incl. outer edges
    // Rest-frame position of boundary i (0 = left edge of layer 0).
    double boundary_um(std::size_t i) const;
    // Potential level of region i; region 0 is the left exterior (0 neV).
    double region_height_neV(std::size_t i) const;
    std::size_t region_count() const { return layers.size() + 2 - (semi_infinite_tail ? 1 : 0); }
    double max_abs_height_neV() const;
};

PotentialStructure barrier(double U_neV, double d_um);
PotentialStructure well(double depth_neV, double d_um);   // layer height -depth
PotentialStructure step(double U_neV);
PotentialStructure double_step(double U1_neV, double d_um, double U2_neV);
PotentialStructure nif(double U1_neV, double a_um, double U2_neV, double b_um);
PotentialStructure lattice(int n_barriers, double U_neV, double barrier_um, double gap_um);

/// Mean optical potential of a medium with scattering-length density rho*b,
/// U = 2*pi*hbar^2*(rho b)/m, rho_b in 1/nm^2, result in neV.
double effective_potential(double rho_b_per_nm2);
double rho_b_for_potential(double U_neV);  // inverse

/// Rigid trajectory offset(t) = s0 + V0 t + a t^2 / 2 applied to a structure.
/// Positive a accelerates the structure toward +x (the packet's direction of
/// motion in every builtin scenario).
struct MotionLaw {
    double s0_um = 0.0;
    double V0_m_s = 0.0;
    double a_m_s2 = 0.0;

    double offset_um(double t_us) const;
    double velocity_m_s(double t_us) const;
    double a_internal() const;  // um/us^2
};

/// Potential samples over the contiguous run of cells where V != 0.
struct SampledPotential {
    std::size_t j0 = 0;
    std::vector<double> values;  // neV per cell, empty if V == 0 everywhere

    std::size_t j_end() const { return j0 + values.size(); }
};

/// V(x_j, t) as the exact average of U(x - offset(t)) over the cell
/// [x_j, x_j + dx). Cell averaging reproduces grid-aligned layers exactly,
/// reduces a mid-cell edge to the thickness-weighted mix of the two adjacent
/// heights, and conserves the spatial integral of V under any rigid motion.
/// Throws validation_error if the structure (or its semi-infinite tail's
/// leading edge) leaves the domain.
SampledPotential sample_support(const PotentialStructure&, const MotionLaw&,
                                const Grid&, double t_us);
std::vector<double> sample(const PotentialStructure&, const MotionLaw&,
                           const Grid&, double t_us);

}  // namespace ucn
