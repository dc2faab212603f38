#include "ucnwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ucnwave/errors.hpp"

namespace ucn {

namespace {
bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}

Grid Grid::make(double x_min_um, double x_max_um, std::size_t n_points) {
    if (!(x_max_um > x_min_um))
        throw validation_error("make_grid: x_max must exceed x_min");
    if (!is_power_of_two(n_points) || n_points < 8)
        throw validation_error("make_grid: n_points must be a power of two >= 8, got " +
                               std::to_string(n_points));
    const double dx = (x_max_um - x_min_um) / static_cast<double>(n_points);
    return Grid(x_min_um, dx, n_points);
}

std::size_t Grid::cell_of(double x_um) const {
    const double j = std::floor((x_um - x_min_) / dx_);
    if (j < 0.0) return 0;
    const auto idx = static_cast<std::size_t>(j);
    return std::min(idx, n_ - 1);
}

Grid make_grid(double x_min_um, double x_max_um, std::size_t n_points) {
    return Grid::make(x_min_um, x_max_um, n_points);
}

}  // namespace ucn
