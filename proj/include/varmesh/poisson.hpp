#pragma once

#include "varmesh/diffops.hpp"
#include "varmesh/field.hpp"

namespace varmesh {

/// SineSpectral inverts the compact stencil mode by mode (exact up to
/// roundoff, the sine basis realizes the zero boundary); Sor is the
/// dependency-free fallback and must meet the same residual contract.
enum class PoissonBackend { SineSpectral, Sor };

struct SolverConfig {
    PoissonBackend backend = PoissonBackend::SineSpectral;
    /// Relative interior L2 tolerance on || lap(s) - rhs ||.
    double residual_tol = 1e-10;
    /// SOR sweep budget; 0 picks 50 * N^2 for the grid being solved.
    long max_iterations = 0;
    /// Over-relaxation factor, must lie strictly inside (0, 2).
    double sor_omega = 1.9;
};

/// Solves lap(s) = rhs with s = 0 on the boundary. Boundary entries of
/// rhs are ignored (the boundary rows of the system are the Dirichlet
/// identity). SOR throws SolverError with the last residual when the
/// sweep budget runs out; the spectral backend needs no iteration.
ScalarField solve_dirichlet(const ScalarField& rhs, const SolverConfig& cfg = {});

/// Componentwise solve_dirichlet, bit-identical to solving each
/// component on its own.
VectorField solve_vector_dirichlet(const VectorField& rhs, const SolverConfig& cfg = {});

/// Right-hand side of the Poisson reduction lap(u) = grad(f) - curl(g),
/// written out under this library's curl component layout:
///   2D: (f_x1 - g_x2,  f_x2 + g_x1)
///   3D: (f_x1 + g3_x2 + g2_x3,  f_x2 - g1_x3 - g3_x1,  f_x3 - g2_x1 + g1_x2)
/// All quotients are central. g should be (numerically) divergence-free
/// for the system to be solvable; that check lives with the monitor
/// ingest, not here.
VectorField assemble_divcurl_rhs(const ScalarField& f, const CurlField& g);

struct DivCurlSolution {
    VectorField u;
    /// || div(u) - f ||_2 over interior nodes, central divergence.
    double div_residual;
    /// || curl(u) - g ||_2 over interior nodes.
    double curl_residual;
};

/// Assemble, solve componentwise, and report how well the recovered
/// field meets the two first-order constraints. The residuals carry the
/// discretization and compatibility error; they are data, not a pass
/// or fail signal.
DivCurlSolution solve_div_curl(const ScalarField& f, const CurlField& g,
                               const SolverConfig& cfg = {});

/// 1 / lambda_1 of the discrete Dirichlet Laplacian on the grid,
/// lambda_1 = dim * (4/h^2) * sin^2(pi h / 2). At N=3 in 2D this is
/// exactly 1/16; as N grows it falls to 1/(dim pi^2).
double poincare_constant(const GridSpec& grid);

} // namespace varmesh
