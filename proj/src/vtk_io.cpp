#include "varmesh/vtk_io.hpp"

#include <cstdio>
#include <ostream>

#include "varmesh/errors.hpp"

namespace varmesh {

namespace {

/// VTK titles are a single line; scalar names must not contain spaces.
std::string sanitized(std::string text, bool spaces_allowed) {
    for (char& ch : text)
        if (ch == '\n' || ch == '\r' || (!spaces_allowed && ch == ' '))
            ch = '_';
    return text;
}

void write_header(std::ostream& out, const GridSpec& g, const std::string& title) {
    out << "# vtk DataFile Version 3.0\n"
        << sanitized(title, true) << "\n"
        << "ASCII\n"
        << "DATASET STRUCTURED_GRID\n"
        << "DIMENSIONS " << g.n << ' ' << g.n << ' ' << (g.dim == 3 ? g.n : 1) << "\n"
        << "POINTS " << g.node_count() << " double\n";
}

void write_point(std::ostream& out, double x, double y, double z) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", x, y, z);
    out << buf;
}

/// Visits the lattice in VTK point order: axis 0 fastest, axis dim-1
/// slowest (the reverse of the storage order, where the last axis is
/// fastest).
template <typename Visit>
void for_each_vtk_point_2d(const GridSpec& g, Visit&& visit) {
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            visit(i, j);
}

template <typename Visit>
void for_each_vtk_point_3d(const GridSpec& g, Visit&& visit) {
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                visit(i, j, k);
}

}  // namespace

void write_mesh_vtk(std::ostream& out, const VectorField& positions,
                    const std::string& title) {
    const GridSpec& g = positions.grid();
    if (positions.components() != g.dim)
        throw FieldError("mesh export needs one position component per axis");
    write_header(out, g, title);
    if (g.dim == 2) {
        for_each_vtk_point_2d(g, [&](int i, int j) {
            write_point(out, positions.comp(0).at(i, j), positions.comp(1).at(i, j), 0.0);
        });
    } else {
        for_each_vtk_point_3d(g, [&](int i, int j, int k) {
            write_point(out, positions.comp(0).at(i, j, k), positions.comp(1).at(i, j, k),
                        positions.comp(2).at(i, j, k));
        });
    }
}

void write_scalar_vtk(std::ostream& out, const ScalarField& field, const std::string& name,
                      const std::string& title) {
    const GridSpec& g = field.grid();
    write_header(out, g, title);
    if (g.dim == 2) {
        for_each_vtk_point_2d(
            g, [&](int i, int j) { write_point(out, g.coord(i), g.coord(j), 0.0); });
    } else {
        for_each_vtk_point_3d(g, [&](int i, int j, int k) {
            write_point(out, g.coord(i), g.coord(j), g.coord(k));
        });
    }
    out << "POINT_DATA " << g.node_count() << "\n"
        << "SCALARS " << sanitized(name, false) << " double 1\n"
        << "LOOKUP_TABLE default\n";
    char buf[64];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    };
    if (g.dim == 2)
        for_each_vtk_point_2d(g, [&](int i, int j) { emit(field.at(i, j)); });
    else
        for_each_vtk_point_3d(g, [&](int i, int j, int k) { emit(field.at(i, j, k)); });
}

}  // namespace varmesh
