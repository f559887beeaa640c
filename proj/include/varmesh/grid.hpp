#pragma once

#include <cstddef>
#include <span>

namespace varmesh {

/// Uniform lattice over the closed unit square (dim = 2) or cube (dim = 3).
///
/// n points per axis, spacing h = 1/(n-1), node i at coordinate i/(n-1).
/// Nodes are stored row-major with the last axis varying fastest, so the
/// flat index of (i, j) is i*n + j and of (i, j, k) is (i*n + j)*n + k.
struct GridSpec {
    int dim;
    int n;
    double h;

    GridSpec(int dim, int points_per_axis);

    /// Convenience for callers holding per-axis counts. The lattice is
    /// cubic by contract; unequal counts are rejected here.
    static GridSpec from_axes(int dim, std::span<const int> per_axis);

    std::size_t node_count() const;
    std::size_t axis_stride(int axis) const;

    /// i/(n-1), computed so that coord(0) == 0.0 and coord(n-1) == 1.0
    /// exactly. All lattice coordinates in the library come from here.
    double coord(int i) const { return static_cast<double>(i) / (n - 1); }

    bool is_boundary_index(int i) const { return i == 0 || i == n - 1; }

    /// Index along `axis` of the node with the given flat index.
    int axis_index(std::size_t flat, int axis) const;

    bool operator==(const GridSpec& other) const {
        return dim == other.dim && n == other.n;
    }
};

/// Throws GridError when two fields that must live on the same lattice
/// do not. `context` names the offending operation in the message.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* context);

} // namespace varmesh
