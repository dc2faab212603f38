#pragma once

#include <cstddef>
#include <numbers>

namespace ucn {

/// Uniform spatial lattice x_j = x_min + j*dx together with its conjugate
/// wavenumber lattice in standard DFT ordering:
///   k_j = j*dk for j < n/2,  k_j = (j-n)*dk for j >= n/2,  dk = 2*pi/(n*dx).
/// Immutable after creation; one grid is shared by all states of a simulation.
class Grid {
public:
    static Grid make(double x_min_um, double x_max_um, std::size_t n_points);

    double x_min() const { return x_min_; }
    double x_max() const { return x_min_ + dx_ * static_cast<double>(n_); }
    double dx() const { return dx_; }
    double length() const { return dx_ * static_cast<double>(n_); }
    std::size_t size() const { return n_; }

    double x(std::size_t j) const { return x_min_ + dx_ * static_cast<double>(j); }

    double dk() const { return 2.0 * std::numbers::pi / length(); }
    double k(std::size_t j) const {
        const auto half = n_ / 2;
        const double m = (j < half) ? static_cast<double>(j)
                                    : static_cast<double>(j) - static_cast<double>(n_);
        return m * dk();
    }
    double k_max() const { return dk() * static_cast<double>(n_ / 2); }

    // Cell index containing x, clamped to [0, n-1]. Cells are [x_j, x_j + dx).
    std::size_t cell_of(double x_um) const;

private:
    Grid(double x_min_um, double dx_um, std::size_t n)
        : x_min_(x_min_um), dx_(dx_um), n_(n) {}

    double x_min_;
    double dx_;
    std::size_t n_;
};

/// Throws validation_error unless x_max > x_min and n_points is a power of two >= 8.
Grid make_grid(double x_min_um, double x_max_um, std::size_t n_points);

}  // namespace ucn
