#include "varmesh/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>

#include "varmesh/diffops.hpp"
#include "varmesh/errors.hpp"

namespace varmesh {

namespace {

double cell_measure(const GridSpec& g) {
    double m = 1.0;
    for (int a = 0; a < g.dim; ++a)
        m *= g.h;
    return m;
}

void require_zero_boundary(const VectorField& u, const char* op) {
    const GridSpec& g = u.grid();
    for (int c = 0; c < u.components(); ++c) {
        const ScalarField& s = u.comp(c);
        for (std::size_t flat = 0; flat < s.size(); ++flat) {
            bool boundary = false;
            for (int a = 0; a < g.dim && !boundary; ++a)
                boundary = g.is_boundary_index(g.axis_index(flat, a));
            if (boundary && s[flat] != 0.0)
                throw FieldError(std::string(op) +
                                 ": field has a nonzero boundary value, so it is outside "
                                 "the discrete H1_0 surrogate (exact zeros required)");
        }
    }
}

bool all_finite(const VectorField& u) {
    for (int c = 0; c < u.components(); ++c)
        for (double v : u.comp(c).values())
            if (!std::isfinite(v))
                return false;
    return true;
}

long double sum_of_squares(const ScalarField& s) {
    long double acc = 0.0L;
    for (double v : s.values())
        acc += static_cast<long double>(v) * static_cast<long double>(v);
    return acc;
}

/// h^dim * sum over all nodes of every squared forward quotient. The
/// forward scheme zeroes the last node of each line, which is exactly the
/// index range that makes summation by parts against the backward
/// divergence exact for zero-boundary fields.
double forward_grad_squared(const VectorField& u) {
    long double acc = 0.0L;
    for (int c = 0; c < u.components(); ++c)
        for (int a = 0; a < u.grid().dim; ++a)
            acc += sum_of_squares(diff_axis(u.comp(c), a, DiffScheme::Forward));
    return static_cast<double>(static_cast<long double>(cell_measure(u.grid())) * acc);
}

struct GreenParts {
    double grad_sq;      // |grad u|^2 with the forward quotients
    double pairing_abs;  // |<u, lap u>|, h^dim-weighted
};

GreenParts green_parts(const VectorField& u) {
    GreenParts parts;
    parts.grad_sq = forward_grad_squared(u);
    const VectorField lap = laplacian(u);
    long double dot = 0.0L;
    for (int c = 0; c < u.components(); ++c) {
        const ScalarField& a = u.comp(c);
        const ScalarField& b = lap.comp(c);
        for (std::size_t i = 0; i < a.size(); ++i)
            dot += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
    }
    const long double pairing = static_cast<long double>(cell_measure(u.grid())) * dot;
    parts.pairing_abs = static_cast<double>(pairing < 0.0L ? -pairing : pairing);
    return parts;
}

void require_positive_constant(double c, const char* op) {
    if (!(c > 0.0))
        throw ConfigError(std::string(op) + ": the Poincare constant must be positive");
}

}  // namespace

double NormTriple::max() const {
    return std::max({u_l2, grad_l2, lap_l2});
}

NormTriple norm_triple(const VectorField& u) {
    require_zero_boundary(u, "norm_triple");
    NormTriple t;
    t.u_l2 = l2_norm(u);
    t.grad_l2 = std::sqrt(forward_grad_squared(u));
    t.lap_l2 = l2_norm(laplacian(u));
    return t;
}

double green_identity_gap(const VectorField& u) {
    require_zero_boundary(u, "green_identity_gap");
    const GreenParts parts = green_parts(u);
    return std::abs(parts.grad_sq - parts.pairing_abs);
}

BoundPair interpolation_check(const VectorField& u) {
    const NormTriple t = norm_triple(u);
    return {t.grad_l2 * t.grad_l2, t.u_l2 * t.lap_l2};
}

BoundPair poincare_check(const VectorField& u, double c) {
    require_positive_constant(c, "poincare_check");
    const NormTriple t = norm_triple(u);
    return {t.u_l2 * t.u_l2, c * t.grad_l2 * t.grad_l2};
}

BoundSequence bound_sequence(double epsilon, double c, int k_max) {
    if (!(epsilon > 0.0))
        throw ConfigError("bound_sequence: epsilon must be positive");
    require_positive_constant(c, "bound_sequence");
    if (k_max < 0)
        throw ConfigError("bound_sequence: k_max must be nonnegative");

    BoundSequence seq;
    seq.epsilon = epsilon;
    seq.c = c;
    seq.convergent = epsilon < std::min(1.0, 1.0 / std::sqrt(c));
    seq.rows.reserve(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        const double half_k = 0.5 * static_cast<double>(k);
        const double eps_pow = std::pow(epsilon, 2.0 + static_cast<double>(k));
        BoundRow row;
        row.k = k;
        row.bound_u = std::pow(c, 1.0 + half_k) * eps_pow;
        row.bound_grad = std::pow(c, 0.5 + half_k) * eps_pow;
        row.bound_lap = std::pow(c, half_k) * eps_pow;
        seq.rows.push_back(row);
    }
    return seq;
}

FixedPointRun fixed_point_iteration(const VectorField& seed, int m_max,
                                    const SolverConfig& config) {
    if (m_max < 0)
        throw ConfigError("fixed_point_iteration: m_max must be nonnegative");

    FixedPointRun run;
    run.history.reserve(static_cast<std::size_t>(m_max) + 1);
    run.history.push_back(norm_triple(seed));
    const double seed_scale = run.history.front().max();

    VectorField u = seed;
    for (int m = 0; m < m_max; ++m) {
        // Divergence is data, not an error: an iterate that overflows to
        // non-finite values is recorded as diverged and the run stops.
        // Solver failures (SolverError) still propagate.
        try {
            const VectorField rhs = gradient(expansion_F(u), StencilConvention::central());
            VectorField next = solve_vector_dirichlet(rhs, config);
            if (!all_finite(next)) {
                run.diverged = true;
                break;
            }
            u = std::move(next);
        } catch (const FieldError&) {
            run.diverged = true;
            break;
        }
        const NormTriple t = norm_triple(u);
        run.history.push_back(t);
        if (t.max() > 10.0 * seed_scale) {
            run.diverged = true;
            break;
        }
    }
    return run;
}

ChainReport chain_report(const VectorField& u, double c) {
    require_positive_constant(c, "chain_report");
    require_zero_boundary(u, "chain_report");

    ChainReport report;
    report.norms = norm_triple(u);
    report.c = c;
    report.epsilon = report.norms.max();

    const double un = report.norms.u_l2;
    const double gn = report.norms.grad_l2;
    const double ln = report.norms.lap_l2;
    const GreenParts green = green_parts(u);

    // Equality rows get a gap criterion, inequality rows a one-sided
    // relative slack. The Green identity and Cauchy-Schwarz hold to
    // roundoff; the Poincare family inherits the constant's rounding,
    // hence the slightly looser 1e-10.
    auto equality_row = [&](const char* name, double lhs, double rhs) {
        const bool pass = std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, lhs);
        report.rows.push_back({name, lhs, rhs, pass});
    };
    auto bound_row = [&](const char* name, double lhs, double rhs, double slack) {
        const bool pass = lhs <= rhs * (1.0 + slack);
        report.rows.push_back({name, lhs, rhs, pass});
    };

    equality_row("green_identity", green.grad_sq, green.pairing_abs);
    bound_row("interpolation", gn * gn, un * ln, 1e-12);
    bound_row("poincare", un * un, c * gn * gn, 1e-10);
    bound_row("poincare_interpolated", un * un, c * un * ln, 1e-10);
    bound_row("u_from_lap", un, c * ln, 1e-10);
    bound_row("u_eps_squared", un, c * report.epsilon * report.epsilon, 1e-10);
    bound_row("grad_interpolated", gn, std::sqrt(un * ln), 1e-12);

    report.all_pass = true;
    for (const ChainRow& row : report.rows)
        report.all_pass = report.all_pass && row.pass;
    return report;
}

void write_chain_csv(std::ostream& out, const ChainReport& report) {
    out << "name,lhs,rhs,pass\n";
    char line[256];
    for (const ChainRow& row : report.rows) {
        std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%d\n", row.name.c_str(), row.lhs,
                      row.rhs, row.pass ? 1 : 0);
        out << line;
    }
}

void write_bounds_csv(std::ostream& out, const BoundSequence& seq) {
    out << "k,bound_u,bound_grad,bound_lap,convergent\n";
    char line[256];
    for (const BoundRow& row : seq.rows) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%d\n", row.k, row.bound_u,
                      row.bound_grad, row.bound_lap, seq.convergent ? 1 : 0);
        out << line;
    }
}

}  // namespace varmesh
