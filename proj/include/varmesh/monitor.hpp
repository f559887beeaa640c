#pragma once

#include <filesystem>

#include "varmesh/diffops.hpp"
#include "varmesh/field.hpp"
#include "varmesh/pgm.hpp"
#include "varmesh/poisson.hpp"
#include "varmesh/transform.hpp"

namespace varmesh {

/// Target densities for mesh generation: a scalar size density f0 and a
/// rotational target g0 (scalar in 2D, vector in 3D). When curl control is
/// off, g0 is kept as the zero field of the right shape so downstream code
/// never branches on a missing member.
struct MonitorPair {
    ScalarField f0;
    CurlField g0;
    bool curl_enabled = false;

    const GridSpec& grid() const { return f0.grid(); }

    /// Checks the admissibility contract: f0 and g0 share a grid, f0 is
    /// strictly positive everywhere, its discrete integral is 1 to within
    /// 1e-10, and in 3D the rotational target is discretely divergence-free
    /// (interior L2 of the backward-stencil divergence at most 1e-8).
    /// Throws TargetError or GridError describing the first violation.
    void validate() const;
};

/// Node-mean quadrature sum(f) / N^dim. Exact on constants, which is what
/// makes a uniform raw density normalize to exactly one; the accumulation is
/// compensated so the result stays trustworthy at 129^3 nodes.
double monitor_integral(const ScalarField& f);

/// Scales a strictly positive density so its discrete integral is 1.
/// Throws TargetError when any node is nonpositive.
ScalarField normalize_f0(const ScalarField& raw);

/// Interior L2 norm of the backward-stencil divergence for a 3D rotational
/// target; identically zero in 2D where no compatibility constraint exists.
double divergence_defect(const CurlField& g0);

/// Removes the divergent part of a 3D field: g - grad_f(solve(div_b g))
/// with homogeneous Dirichlet data. The forward/backward stencil pair is
/// essential here: it inverts the discrete Laplacian exactly, so the
/// residual divergence drops to the solver tolerance instead of the O(h^2)
/// floor a central/central correction would leave behind.
VectorField project_divergence_free(const VectorField& g, const SolverConfig& config = {});

/// Builds a 2D monitor from a grayscale picture: raw density
/// 1 + beta * (1 - I) with I in [0, 1], sampled bilinearly with image row 0
/// at x2 = 1 (pictures hang top-down, the domain does not). Dark regions get
/// density 1 + beta, white regions 1; the result is normalized. Rotational
/// control is not available from images, so use_curl merely marks the pair.
MonitorPair monitor_from_image(const GrayImage& image, double beta, const GridSpec& grid,
                               bool use_curl = false);

/// Derives the monitor realized by an existing transformation: f0 is its
/// normalized Jacobian determinant and g0 the curl of its position field
/// (projected divergence-free in 3D). A transformation whose determinant is
/// nonpositive anywhere is rejected as folded.
MonitorPair monitor_from_transformation(const Transformation& t, bool use_curl,
                                        const SolverConfig& config = {});

/// Persists a pair as f0.fld, g0.fld and a small text manifest in `dir`
/// (created if missing). load_monitor validates before returning.
void save_monitor(const MonitorPair& pair, const std::filesystem::path& dir);
MonitorPair load_monitor(const std::filesystem::path& dir);

}  // namespace varmesh
