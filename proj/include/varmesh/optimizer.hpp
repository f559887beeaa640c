#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "varmesh/monitor.hpp"
#include "varmesh/poisson.hpp"
#include "varmesh/transform.hpp"

namespace varmesh {

struct OptimizerConfig {
    double step_sigma = 0.1;       // initial control scale
    int max_outer = 500;           // outer iteration budget
    double ssd_rel_tol = 1e-8;     // stop when a step shaves off less than this
    double backtrack_factor = 0.5; // sigma shrink on a rejected proposal
    int max_backtracks = 20;       // consecutive rejections before giving up
    SolverConfig solver;
};

/// One accepted state of the descent. Row zero is the start iterate (sigma
/// 0, nothing accepted yet); subsequent rows are accepted steps, and their
/// ssd values form a strictly decreasing sequence.
struct TraceRow {
    int iteration;
    double ssd;
    double jac_residual;   // |J(phi) - f0|_2 / |f0|_2 over interior nodes
    double curl_residual;  // |curl(phi) - g0|_2 over interior nodes, 0 when off
    double min_jacobian;   // over all nodes, boundary included
    double sigma;          // control scale that produced this state
};

enum class StopReason { Converged, SigmaExhausted, MaxOuterReached };

struct OptimizerTrace {
    std::vector<TraceRow> rows;
    StopReason stop = StopReason::Converged;
    bool folded = false;  // final iterate has a nonpositive Jacobian somewhere

    // reconstruct renormalizes the target density so it integrates to 1;
    // the factor it applied is kept here because the induced bias belongs
    // in the run record, not in a side channel.
    double density_rescale = 1.0;
};

/// Interior cost: half the h-weighted squared mismatch of the Jacobian
/// determinant against f0, plus the same for the curl when enabled.
/// Boundary nodes are excluded so one-sided stencil bias stays out of the
/// objective. Throws GridError on mismatched grids.
double ssd(const Transformation& phi, const MonitorPair& m);

struct StepResult {
    Transformation phi;
    double ssd;
};

/// One residual-driven correction: solve the div-curl system for the
/// control pair f = sigma*(f0 - J), g = sigma*(g0 - curl) (projected
/// divergence-free in 3D, zero when curl control is off) and displace by
/// the result. sigma = 0 returns phi_old bit for bit.
StepResult optimizer_step(const Transformation& phi_old, const MonitorPair& m, double sigma,
                          const OptimizerConfig& config = {});

struct MinimizeResult {
    Transformation phi;
    OptimizerTrace trace;
};

/// Called once per appended trace row (the start row included) with the
/// iterate that produced it. Lets callers stream the trace to disk or
/// measure distances against a reference mesh without rerunning.
using IterateObserver = std::function<void(const TraceRow&, const Transformation&)>;

/// Backtracking descent: propose optimizer_step at the current sigma,
/// accept on strict decrease, otherwise shrink sigma. Stops when a step
/// improves by less than ssd_rel_tol relative, when max_backtracks
/// consecutive proposals fail, or at max_outer. Non-convergence is
/// reported through the trace, never thrown.
MinimizeResult minimize(const Transformation& start, const MonitorPair& m,
                        const OptimizerConfig& config = {});
MinimizeResult minimize(const Transformation& start, const MonitorPair& m,
                        const OptimizerConfig& config, const IterateObserver& observer);

/// Recovers a transformation from the monitor its target realizes:
/// minimize from identity against monitor_from_transformation(t0, use_curl).
/// With use_curl the recovery sees both the size and rotation content.
MinimizeResult reconstruct(const Transformation& t0, bool use_curl,
                           const OptimizerConfig& config = {});

/// Smallest Jacobian determinant over all nodes; nonpositive means folded.
double fold_check(const Transformation& phi);

/// Trace table as CSV: iter,ssd,jac_residual,curl_residual,min_jacobian,sigma.
/// The header/row pair exists so observers can stream the same format
/// incrementally and end up byte-identical with the batch writer.
void write_trace_csv(std::ostream& out, const OptimizerTrace& trace);
void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const TraceRow& row);

}  // namespace varmesh
