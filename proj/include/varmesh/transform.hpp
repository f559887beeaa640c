#pragma once

#include "varmesh/field.hpp"

namespace varmesh {

/// Grid transformation phi: the image position of every lattice node.
///
/// Boundary nodes must sit exactly on their lattice coordinates; the
/// constructor enforces this bitwise so no optimizer step can drift the
/// hull. Interior positions are unconstrained (folding is legal to
/// represent and is diagnosed elsewhere, not rejected here).
class Transformation {
public:
    static Transformation identity(const GridSpec& grid);

    /// id + u for a displacement that vanishes on the boundary.
    static Transformation from_displacement(const VectorField& u);

    Transformation(const GridSpec& grid, VectorField positions);

    const GridSpec& grid() const { return grid_; }
    const VectorField& positions() const { return positions_; }

    /// positions - id, as a vector field.
    VectorField displacement() const;

private:
    GridSpec grid_;
    VectorField positions_;
};

/// phi + u. The displacement must vanish on the boundary or the result
/// fails hull validation.
Transformation operator+(const Transformation& phi, const VectorField& u);

/// Identity node positions as a vector field (component a = coordinate
/// along axis a).
VectorField identity_positions(const GridSpec& grid);

} // namespace varmesh
