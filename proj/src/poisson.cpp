#include "varmesh/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "varmesh/errors.hpp"

namespace varmesh {

namespace {

// FFTW plan creation and destruction mutate global planner state and are
// not thread-safe; executing a plan on its own buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void validate(const SolverConfig& cfg) {
    if (!(cfg.residual_tol > 0.0))
        throw ConfigError("solver residual_tol must be positive");
    if (!(cfg.sor_omega > 0.0) || !(cfg.sor_omega < 2.0))
        throw ConfigError("sor_omega must lie strictly inside (0, 2)");
}

// Interior L2 of (lap(s) - rhs) computed in one pass, no temporaries.
double interior_defect(const ScalarField& s, const ScalarField& rhs) {
    const GridSpec& g = s.grid();
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double* v = s.values().data();
    double acc = 0.0;
    for (std::size_t flat = 0; flat < s.size(); ++flat) {
        bool interior = true;
        for (int a = 0; a < g.dim; ++a)
            if (g.is_boundary_index(g.axis_index(flat, a)))
                interior = false;
        if (!interior)
            continue;
        double lap = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const std::size_t stride = g.axis_stride(a);
            lap += v[flat + stride] - 2.0 * v[flat] + v[flat - stride];
        }
        const double d = lap * inv_h2 - rhs[flat];
        acc += d * d;
    }
    return std::sqrt(std::pow(g.h, g.dim) * acc);
}

ScalarField solve_spectral(const ScalarField& rhs) {
    const GridSpec& g = rhs.grid();
    const int m = g.n - 2;
    const std::size_t mcount = g.dim == 2 ? std::size_t(m) * m : std::size_t(m) * m * m;
    std::vector<double> buf(mcount);

    if (g.dim == 2) {
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j)
                buf[std::size_t(i - 1) * m + (j - 1)] = rhs.at(i, j);
    } else {
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j)
                for (int k = 1; k <= m; ++k)
                    buf[(std::size_t(i - 1) * m + (j - 1)) * m + (k - 1)] = rhs.at(i, j, k);
    }

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = g.dim == 2
                   ? fftw_plan_r2r_2d(m, m, buf.data(), buf.data(), FFTW_RODFT00,
                                      FFTW_RODFT00, FFTW_ESTIMATE)
                   : fftw_plan_r2r_3d(m, m, m, buf.data(), buf.data(), FFTW_RODFT00,
                                      FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
    }
    fftw_execute(plan);

    // One DST-I pass per axis multiplies by 2(m+1); undo that together
    // with the modal eigenvalues of the compact stencil.
    std::vector<double> lambda(std::size_t(m) + 1, 0.0);
    for (int k = 1; k <= m; ++k) {
        const double s = std::sin(0.5 * std::numbers::pi * k * g.h);
        lambda[std::size_t(k)] = 4.0 / (g.h * g.h) * s * s;
    }
    const double norm = 1.0 / std::pow(2.0 * (m + 1), g.dim);

    if (g.dim == 2) {
        for (int a = 1; a <= m; ++a)
            for (int b = 1; b <= m; ++b) {
                const double denom = lambda[std::size_t(a)] + lambda[std::size_t(b)];
                buf[std::size_t(a - 1) * m + (b - 1)] *= -norm / denom;
            }
    } else {
        for (int a = 1; a <= m; ++a)
            for (int b = 1; b <= m; ++b)
                for (int c = 1; c <= m; ++c) {
                    const double denom = lambda[std::size_t(a)] + lambda[std::size_t(b)] +
                                         lambda[std::size_t(c)];
                    buf[(std::size_t(a - 1) * m + (b - 1)) * m + (c - 1)] *= -norm / denom;
                }
    }

    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    ScalarField out(g);
    if (g.dim == 2) {
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j)
                out.at(i, j) = buf[std::size_t(i - 1) * m + (j - 1)];
    } else {
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j)
                for (int k = 1; k <= m; ++k)
                    out.at(i, j, k) = buf[(std::size_t(i - 1) * m + (j - 1)) * m + (k - 1)];
    }
    return out;
}

ScalarField solve_sor(const ScalarField& rhs, const SolverConfig& cfg) {
    const GridSpec& g = rhs.grid();
    const long budget =
        cfg.max_iterations > 0 ? cfg.max_iterations : 50L * g.n * g.n;
    const double rhs_norm = l2_norm_interior(rhs);

    ScalarField s(g);
    if (rhs_norm == 0.0)
        return s;

    const double h2 = g.h * g.h;
    const double inv_2dim = 1.0 / (2.0 * g.dim);
    const double omega = cfg.sor_omega;

    double defect = interior_defect(s, rhs);
    for (long sweep = 0; sweep < budget; ++sweep) {
        for (int color = 0; color < 2; ++color) {
            for (std::size_t flat = 0; flat < s.size(); ++flat) {
                int parity = 0;
                bool interior = true;
                for (int a = 0; a < g.dim; ++a) {
                    const int ia = g.axis_index(flat, a);
                    parity += ia;
                    if (g.is_boundary_index(ia))
                        interior = false;
                }
                if (!interior || parity % 2 != color)
                    continue;
                double nb = 0.0;
                for (int a = 0; a < g.dim; ++a) {
                    const std::size_t stride = g.axis_stride(a);
                    nb += s[flat + stride] + s[flat - stride];
                }
                const double gauss = (nb - h2 * rhs[flat]) * inv_2dim;
                s[flat] += omega * (gauss - s[flat]);
            }
        }
        defect = interior_defect(s, rhs);
        if (defect <= cfg.residual_tol * rhs_norm)
            return s;
    }
    throw SolverError("sor exhausted " + std::to_string(budget) +
                          " sweeps without meeting the residual tolerance",
                      defect);
}

} // namespace

ScalarField solve_dirichlet(const ScalarField& rhs, const SolverConfig& cfg) {
    validate(cfg);
    if (cfg.backend == PoissonBackend::SineSpectral)
        return solve_spectral(rhs);
    return solve_sor(rhs, cfg);
}

VectorField solve_vector_dirichlet(const VectorField& rhs, const SolverConfig& cfg) {
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(rhs.components()));
    for (int c = 0; c < rhs.components(); ++c)
        comps.push_back(solve_dirichlet(rhs.comp(c), cfg));
    return VectorField(rhs.grid(), std::move(comps));
}

VectorField assemble_divcurl_rhs(const ScalarField& f, const CurlField& g) {
    require_same_grid(f.grid(), g.grid(), "assemble_divcurl_rhs");
    const GridSpec& grid = f.grid();
    auto d = [](const ScalarField& s, int axis) {
        return diff_axis(s, axis, DiffScheme::Central);
    };

    if (grid.dim == 2) {
        const ScalarField& gs = g.scalar();
        std::vector<ScalarField> comps{d(f, 0) - d(gs, 1), d(f, 1) + d(gs, 0)};
        return VectorField(grid, std::move(comps));
    }

    const VectorField& gv = g.vector();
    ScalarField f1 = d(f, 0) + d(gv.comp(2), 1) + d(gv.comp(1), 2);
    ScalarField f2 = d(f, 1) - d(gv.comp(0), 2) - d(gv.comp(2), 0);
    ScalarField f3 = d(f, 2) - d(gv.comp(1), 0) + d(gv.comp(0), 1);
    std::vector<ScalarField> comps{std::move(f1), std::move(f2), std::move(f3)};
    return VectorField(grid, std::move(comps));
}

DivCurlSolution solve_div_curl(const ScalarField& f, const CurlField& g,
                               const SolverConfig& cfg) {
    VectorField rhs = assemble_divcurl_rhs(f, g);
    VectorField u = solve_vector_dirichlet(rhs, cfg);
    const double div_res = l2_norm_interior(divergence(u) - f);
    const double curl_res = l2_norm_interior(curl(u) - g);
    return {std::move(u), div_res, curl_res};
}

double poincare_constant(const GridSpec& grid) {
    // Per-axis eigenvalue 4 sin^2(pi h / 2) = 2 - 2 cos(pi h), with
    // cos(pi h) evaluated as sin(pi (1/2 - h)). The subtraction 1/2 - h
    // is exact, so spacings landing on the quarter points produce the
    // exact rational eigenvalue (N=3 gives precisely 16 in 2D) instead
    // of a value one rounding step away. The cancellation in 2 - 2 cos
    // costs at most ~ulp/(pi h)^2 relative error, immaterial at any
    // lattice this library targets.
    const double cos_pi_h = std::sin(std::numbers::pi * (0.5 - grid.h));
    const double axis = (2.0 - 2.0 * cos_pi_h) / (grid.h * grid.h);
    return 1.0 / (grid.dim * axis);
}

} // namespace varmesh
