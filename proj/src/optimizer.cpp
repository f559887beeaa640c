#include "varmesh/optimizer.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>

#include "varmesh/diffops.hpp"
#include "varmesh/errors.hpp"

namespace varmesh {

namespace {

void check_config(const OptimizerConfig& cfg) {
    if (!(cfg.step_sigma > 0.0)) throw ConfigError("step_sigma must be positive");
    if (cfg.max_outer < 1) throw ConfigError("max_outer must be at least 1");
    if (!(cfg.ssd_rel_tol > 0.0)) throw ConfigError("ssd_rel_tol must be positive");
    if (!(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0))
        throw ConfigError("backtrack_factor must lie in (0, 1)");
    if (cfg.max_backtracks < 0) throw ConfigError("max_backtracks must be nonnegative");
}

TraceRow make_row(int iteration, const Transformation& phi, const MonitorPair& m,
                  double cost, double sigma) {
    const ScalarField jac = jacobian_det(phi);
    TraceRow row;
    row.iteration = iteration;
    row.ssd = cost;
    row.jac_residual = l2_norm_interior(jac - m.f0) / l2_norm_interior(m.f0);
    row.curl_residual =
        m.curl_enabled ? l2_norm_interior(curl(phi.positions()) - m.g0) : 0.0;
    row.min_jacobian = *std::min_element(jac.values().begin(), jac.values().end());
    row.sigma = sigma;
    return row;
}

}  // namespace

double ssd(const Transformation& phi, const MonitorPair& m) {
    require_same_grid(phi.grid(), m.grid(), "ssd");
    const double jac_part = l2_norm_interior(jacobian_det(phi) - m.f0);
    double curl_part = 0.0;
    if (m.curl_enabled) curl_part = l2_norm_interior(curl(phi.positions()) - m.g0);
    return 0.5 * (jac_part * jac_part + curl_part * curl_part);
}

StepResult optimizer_step(const Transformation& phi_old, const MonitorPair& m, double sigma,
                          const OptimizerConfig& config) {
    require_same_grid(phi_old.grid(), m.grid(), "optimizer_step");

    const ScalarField f_ctl = sigma * (m.f0 - jacobian_det(phi_old));
    CurlField g_ctl = CurlField::zero(phi_old.grid());
    if (m.curl_enabled) {
        g_ctl = sigma * (m.g0 - curl(phi_old.positions()));
        if (phi_old.grid().dim == 3)
            g_ctl = CurlField(project_divergence_free(g_ctl.vector(), config.solver));
    }

    const DivCurlSolution corr = solve_div_curl(f_ctl, g_ctl, config.solver);
    Transformation candidate = phi_old + corr.u;
    const double cost = ssd(candidate, m);
    return StepResult{std::move(candidate), cost};
}

MinimizeResult minimize(const Transformation& start, const MonitorPair& m,
                        const OptimizerConfig& config) {
    return minimize(start, m, config, IterateObserver{});
}

MinimizeResult minimize(const Transformation& start, const MonitorPair& m,
                        const OptimizerConfig& config, const IterateObserver& observer) {
    check_config(config);
    m.validate();
    require_same_grid(start.grid(), m.grid(), "minimize");

    Transformation phi = start;
    double cost = ssd(phi, m);

    OptimizerTrace trace;
    trace.rows.push_back(make_row(0, phi, m, cost, 0.0));
    trace.stop = StopReason::MaxOuterReached;
    if (observer)
        observer(trace.rows.back(), phi);

    double sigma = config.step_sigma;
    int accepted = 0;
    for (int outer = 0; outer < config.max_outer; ++outer) {
        if (cost == 0.0) {
            trace.stop = StopReason::Converged;
            break;
        }

        std::optional<StepResult> step;
        for (int attempt = 0; attempt <= config.max_backtracks; ++attempt) {
            StepResult proposal = optimizer_step(phi, m, sigma, config);
            if (proposal.ssd < cost) {
                step = std::move(proposal);
                break;
            }
            sigma *= config.backtrack_factor;
        }
        if (!step) {
            trace.stop = StopReason::SigmaExhausted;
            break;
        }

        const double rel = (cost - step->ssd) / cost;
        phi = std::move(step->phi);
        cost = step->ssd;
        ++accepted;
        trace.rows.push_back(make_row(accepted, phi, m, cost, sigma));
        if (observer)
            observer(trace.rows.back(), phi);
        if (rel < config.ssd_rel_tol) {
            trace.stop = StopReason::Converged;
            break;
        }
    }

    trace.folded = fold_check(phi) <= 0.0;
    return MinimizeResult{std::move(phi), std::move(trace)};
}

MinimizeResult reconstruct(const Transformation& t0, bool use_curl,
                           const OptimizerConfig& config) {
    const MonitorPair m = monitor_from_transformation(t0, use_curl, config.solver);
    MinimizeResult result = minimize(Transformation::identity(t0.grid()), m, config);
    result.trace.density_rescale = 1.0 / monitor_integral(jacobian_det(t0));
    return result;
}

double fold_check(const Transformation& phi) {
    const ScalarField jac = jacobian_det(phi);
    return *std::min_element(jac.values().begin(), jac.values().end());
}

void write_trace_csv(std::ostream& out, const OptimizerTrace& trace) {
    write_trace_header(out);
    for (const TraceRow& row : trace.rows)
        write_trace_row(out, row);
}

void write_trace_header(std::ostream& out) {
    out << "iter,ssd,jac_residual,curl_residual,min_jacobian,sigma\n";
}

void write_trace_row(std::ostream& out, const TraceRow& row) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.iteration,
                  row.ssd, row.jac_residual, row.curl_residual, row.min_jacobian, row.sigma);
    out << buf;
}

}  // namespace varmesh
