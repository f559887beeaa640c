#include "varmesh/transform.hpp"

#include <string>

#include "varmesh/errors.hpp"

namespace varmesh {

VectorField identity_positions(const GridSpec& grid) {
    VectorField pos(grid);
    for (int a = 0; a < grid.dim; ++a) {
        ScalarField& comp = pos.comp(a);
        for (std::size_t flat = 0; flat < grid.node_count(); ++flat)
            comp[flat] = grid.coord(grid.axis_index(flat, a));
    }
    return pos;
}

Transformation Transformation::identity(const GridSpec& grid) {
    return Transformation(grid, identity_positions(grid));
}

Transformation Transformation::from_displacement(const VectorField& u) {
    return Transformation(u.grid(), identity_positions(u.grid()) + u);
}

Transformation::Transformation(const GridSpec& grid, VectorField positions)
    : grid_(grid), positions_(std::move(positions)) {
    require_same_grid(grid_, positions_.grid(), "transformation construction");
    for (std::size_t flat = 0; flat < grid_.node_count(); ++flat) {
        bool boundary = false;
        for (int a = 0; a < grid_.dim; ++a)
            if (grid_.is_boundary_index(grid_.axis_index(flat, a)))
                boundary = true;
        if (!boundary)
            continue;
        for (int a = 0; a < grid_.dim; ++a) {
            if (positions_.comp(a)[flat] != grid_.coord(grid_.axis_index(flat, a)))
                throw TargetError("transformation boundary is off the lattice hull");
        }
    }
}

VectorField Transformation::displacement() const {
    return positions_ - identity_positions(grid_);
}

Transformation operator+(const Transformation& phi, const VectorField& u) {
    return Transformation(phi.grid(), phi.positions() + u);
}

} // namespace varmesh
