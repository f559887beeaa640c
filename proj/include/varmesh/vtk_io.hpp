#pragma once

#include <iosfwd>
#include <string>

#include "varmesh/field.hpp"

namespace varmesh {

/// Legacy ASCII STRUCTURED_GRID export of a mesh: the field's components
/// are read as node coordinates. Point order follows the VTK contract
/// (first axis fastest); 2D meshes land in the z = 0 plane. Any desktop
/// viewer that speaks the legacy format can render the grid lines.
void write_mesh_vtk(std::ostream& out, const VectorField& positions,
                    const std::string& title = "mesh");

/// Same dataset layout with the unit-lattice nodes as points and the
/// scalar attached as POINT_DATA, for viewing densities and residuals
/// next to the meshes they shaped.
void write_scalar_vtk(std::ostream& out, const ScalarField& field, const std::string& name,
                      const std::string& title = "field");

}  // namespace varmesh
