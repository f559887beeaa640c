#include "varmesh/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "varmesh/errors.hpp"

namespace varmesh {

GridSpec::GridSpec(int dim_, int points_per_axis) : dim(dim_), n(points_per_axis) {
    if (dim != 2 && dim != 3)
        throw GridError("grid dimension must be 2 or 3, got " + std::to_string(dim_));
    if (n < 3)
        throw GridError("grid needs at least 3 points per axis, got " +
                        std::to_string(points_per_axis));
    h = 1.0 / (n - 1);
    // The spacing must reproduce the unit interval essentially exactly;
    // anything worse than 1 ulp here would poison every stencil built on it.
    if (std::abs(h * (n - 1) - 1.0) > std::numeric_limits<double>::epsilon())
        throw GridError("grid spacing does not reproduce the unit interval");
}

GridSpec GridSpec::from_axes(int dim_, std::span<const int> per_axis) {
    if (per_axis.size() != static_cast<std::size_t>(dim_))
        throw GridError("per-axis point counts must match the dimension");
    for (int m : per_axis)
        if (m != per_axis[0])
            throw GridError("lattice must be cubic: unequal per-axis point counts");
    return GridSpec(dim_, per_axis[0]);
}

std::size_t GridSpec::node_count() const {
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a)
        total *= static_cast<std::size_t>(n);
    return total;
}

std::size_t GridSpec::axis_stride(int axis) const {
    std::size_t s = 1;
    for (int a = dim - 1; a > axis; --a)
        s *= static_cast<std::size_t>(n);
    return s;
}

int GridSpec::axis_index(std::size_t flat, int axis) const {
    return static_cast<int>((flat / axis_stride(axis)) % static_cast<std::size_t>(n));
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* context) {
    if (!(a == b))
        throw GridError(std::string(context) + ": fields live on different grids");
}

} // namespace varmesh
