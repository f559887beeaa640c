#include "varmesh/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "varmesh/diffops.hpp"
#include "varmesh/errors.hpp"
#include "varmesh/field.hpp"
#include "varmesh/field_io.hpp"
#include "varmesh/monitor.hpp"
#include "varmesh/optimizer.hpp"
#include "varmesh/pgm.hpp"
#include "varmesh/poisson.hpp"
#include "varmesh/transform.hpp"
#include "varmesh/uniqueness.hpp"
#include "varmesh/vtk_io.hpp"

namespace varmesh::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path prepare_out_dir(const std::string& out, bool force) {
    const fs::path dir(out);
    if (fs::exists(dir) && !force)
        throw ConfigError("output directory '" + out +
                          "' already exists; pass --force to write into it");
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const fs::path& dir, const json& manifest) {
    const fs::path path = dir / "manifest.json";
    std::ofstream file(path);
    file << manifest.dump(2) << '\n';
    if (!file)
        throw FieldIoError(FieldIoError::Code::Io, "could not write " + path.string());
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream file(path);
    if (!file)
        throw FieldIoError(FieldIoError::Code::Io,
                           "could not open " + path.string() + " for writing");
    return file;
}

json manifest_base(const char* subcommand, std::vector<std::string> inputs, int n, int dim,
                   std::uint64_t seed, const std::string& out) {
    return json{{"subcommand", subcommand}, {"inputs", std::move(inputs)}, {"n", n},
                {"dim", dim},               {"seed", seed},                {"out", out}};
}

const char* stop_name(StopReason stop) {
    switch (stop) {
        case StopReason::Converged:
            return "converged";
        case StopReason::SigmaExhausted:
            return "sigma_exhausted";
        case StopReason::MaxOuterReached:
            return "max_outer_reached";
    }
    return "unknown";
}

/// Interior nodes uniform in [-amplitude, amplitude], boundary exactly
/// zero; the random material for the chain report sweeps.
VectorField rough_zero_boundary(const GridSpec& g, std::mt19937_64& rng, double amplitude) {
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    VectorField u(g);
    for (int c = 0; c < g.dim; ++c) {
        ScalarField& s = u.comp(c);
        for (std::size_t flat = 0; flat < s.size(); ++flat) {
            bool boundary = false;
            for (int a = 0; a < g.dim && !boundary; ++a)
                boundary = g.is_boundary_index(g.axis_index(flat, a));
            s[flat] = boundary ? 0.0 : dist(rng);
        }
    }
    return u;
}

/// The standard two-mode (2D) / three-mode (3D) sine swirl the fixed-point
/// runs are seeded with; --amp rescales its max norm. Interior fill only:
/// sin at the far lattice edge is a rounding hair off zero and the
/// iteration demands exact boundary zeros.
VectorField mode_seed(const GridSpec& g) {
    const double pi = std::numbers::pi;
    VectorField v(g);
    if (g.dim == 2) {
        for (int i = 1; i + 1 < g.n; ++i)
            for (int j = 1; j + 1 < g.n; ++j) {
                const double x = g.coord(i);
                const double y = g.coord(j);
                v.comp(0).at(i, j) = std::sin(pi * x) * std::sin(2.0 * pi * y);
                v.comp(1).at(i, j) = std::sin(2.0 * pi * x) * std::sin(pi * y);
            }
    } else {
        for (int i = 1; i + 1 < g.n; ++i)
            for (int j = 1; j + 1 < g.n; ++j)
                for (int k = 1; k + 1 < g.n; ++k) {
                    const double x = g.coord(i);
                    const double y = g.coord(j);
                    const double z = g.coord(k);
                    v.comp(0).at(i, j, k) =
                        std::sin(pi * x) * std::sin(2.0 * pi * y) * std::sin(pi * z);
                    v.comp(1).at(i, j, k) =
                        std::sin(2.0 * pi * x) * std::sin(pi * y) * std::sin(pi * z);
                    v.comp(2).at(i, j, k) =
                        std::sin(pi * x) * std::sin(pi * y) * std::sin(2.0 * pi * z);
                }
    }
    return v;
}

struct OptimizerFlags {
    double sigma = OptimizerConfig{}.step_sigma;
    int max_outer = OptimizerConfig{}.max_outer;
    double tol = OptimizerConfig{}.ssd_rel_tol;

    OptimizerConfig config() const {
        OptimizerConfig cfg;
        cfg.step_sigma = sigma;
        cfg.max_outer = max_outer;
        cfg.ssd_rel_tol = tol;
        return cfg;
    }
    json overrides() const {
        return json{{"sigma", sigma}, {"max_outer", max_outer}, {"tol", tol}};
    }
};

void add_optimizer_flags(CLI::App* cmd, OptimizerFlags& flags) {
    cmd->add_option("--sigma", flags.sigma, "initial control scale");
    cmd->add_option("--max-outer", flags.max_outer, "outer iteration budget");
    cmd->add_option("--tol", flags.tol, "relative improvement stop tolerance");
}

// ---- subcommand bodies ----

int cmd_image2monitor(const std::string& image, double beta, int n, bool use_curl,
                      const std::string& out_dir, bool force, std::ostream& out) {
    const fs::path dir = prepare_out_dir(out_dir, force);
    json manifest = manifest_base("image2monitor", {image}, n, 2, 0, out_dir);
    manifest["overrides"] = json{{"beta", beta}, {"use_curl", use_curl}};
    write_manifest(dir, manifest);

    const GrayImage img = read_pgm_file(image);
    const MonitorPair monitor = monitor_from_image(img, beta, GridSpec(2, n), use_curl);
    save_monitor(monitor, dir);

    double lo = monitor.f0[0];
    double hi = monitor.f0[0];
    for (double v : monitor.f0.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "monitor: n=%d beta=%g f0 in [%.6g, %.6g]\n", n, beta, lo,
                  hi);
    out << buf;
    return 0;
}

int cmd_generate(const std::string& monitor_dir, int n_flag, const OptimizerFlags& flags,
                 const std::string& out_dir, bool force, std::ostream& out) {
    const MonitorPair monitor = load_monitor(monitor_dir);
    const GridSpec grid = monitor.grid();
    if (n_flag != 0 && n_flag != grid.n)
        throw ConfigError("--n " + std::to_string(n_flag) + " does not match the monitor lattice (" +
                          std::to_string(grid.n) + " points per axis)");

    const fs::path dir = prepare_out_dir(out_dir, force);
    json manifest = manifest_base("generate", {monitor_dir}, grid.n, grid.dim, 0, out_dir);
    manifest["overrides"] = flags.overrides();
    write_manifest(dir, manifest);

    // The trace is streamed row by row so a solver failure still leaves
    // the accepted iterations on disk.
    std::ofstream trace_file = open_output(dir / "trace.csv");
    write_trace_header(trace_file);
    const IterateObserver observer = [&](const TraceRow& row, const Transformation&) {
        write_trace_row(trace_file, row);
        trace_file.flush();
    };

    const MinimizeResult result =
        minimize(Transformation::identity(grid), monitor, flags.config(), observer);

    write_field_file(dir / "mesh.fld", result.phi.positions());
    std::ofstream vtk = open_output(dir / "mesh.vtk");
    write_mesh_vtk(vtk, result.phi.positions(), "generated mesh");

    const TraceRow& last = result.trace.rows.back();
    char buf[256];
    std::snprintf(buf, sizeof buf, "summary: ssd=%.6e min_jacobian=%.6g iterations=%d stop=%s%s\n",
                  last.ssd, last.min_jacobian, last.iteration, stop_name(result.trace.stop),
                  result.trace.folded ? " FOLDED" : "");
    out << buf;
    return 0;
}

int cmd_reconstruct(const std::string& t0_path, bool use_curl, const OptimizerFlags& flags,
                    const std::string& out_dir, bool force, std::ostream& out) {
    const Transformation t0 = read_field_file(t0_path).to_transformation();
    const GridSpec grid = t0.grid();

    const fs::path dir = prepare_out_dir(out_dir, force);
    json manifest = manifest_base("reconstruct", {t0_path}, grid.n, grid.dim, 0, out_dir);
    manifest["overrides"] = flags.overrides();
    manifest["overrides"]["use_curl"] = use_curl;
    write_manifest(dir, manifest);

    const OptimizerConfig cfg = flags.config();
    const MonitorPair monitor = monitor_from_transformation(t0, use_curl, cfg.solver);

    std::ofstream error_csv = open_output(dir / "error.csv");
    error_csv << "iter,ssd,error_l2\n";
    const IterateObserver observer = [&](const TraceRow& row, const Transformation& phi) {
        const double error = l2_norm(phi.positions() - t0.positions());
        char line[160];
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", row.iteration, row.ssd, error);
        error_csv << line;
        error_csv.flush();
    };

    const MinimizeResult result =
        minimize(Transformation::identity(grid), monitor, cfg, observer);

    write_field_file(dir / "recovered.fld", result.phi.positions());
    std::ofstream vtk = open_output(dir / "recovered.vtk");
    write_mesh_vtk(vtk, result.phi.positions(), "recovered mesh");

    const double error = l2_norm(result.phi.positions() - t0.positions());
    const double target_size = l2_norm(t0.displacement());
    const double rel = target_size > 0.0 ? error / target_size : 0.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "summary: error_l2=%.6e rel_error=%.6e iterations=%d stop=%s%s\n", error, rel,
                  result.trace.rows.back().iteration, stop_name(result.trace.stop),
                  result.trace.folded ? " FOLDED" : "");
    out << buf;
    return 0;
}

int cmd_check(int n, int dim, int trials, std::uint64_t seed, const std::string& out_dir,
              bool force, std::ostream& out) {
    if (trials < 0)
        throw ConfigError("--trials must be nonnegative");
    const fs::path dir = prepare_out_dir(out_dir, force);
    json manifest = manifest_base("check", {}, n, dim, seed, out_dir);
    manifest["overrides"] = json{{"trials", trials}};
    write_manifest(dir, manifest);

    const GridSpec grid(dim, n);
    const double c = poincare_constant(grid);
    std::mt19937_64 rng(seed);

    std::ofstream csv = open_output(dir / "chain.csv");
    csv << "trial,name,lhs,rhs,pass\n";
    int failed = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const ChainReport report = chain_report(rough_zero_boundary(grid, rng, 1.0), c);
        for (const ChainRow& row : report.rows) {
            char line[224];
            std::snprintf(line, sizeof line, "%d,%s,%.17g,%.17g,%d\n", trial, row.name.c_str(),
                          row.lhs, row.rhs, row.pass ? 1 : 0);
            csv << line;
        }
        if (!report.all_pass)
            ++failed;
    }
    out << "check: " << (trials - failed) << "/" << trials
        << " trials passed the whole inequality chain\n";
    return 0;
}

int cmd_bounds(double epsilon, bool c_given, double c_value, bool grid_given, int grid_n,
               int dim, int k_max, const std::string& out_dir, bool force, std::ostream& out) {
    if (c_given == grid_given)
        throw ConfigError("pass exactly one of --c and --grid");
    const double c = c_given ? c_value : poincare_constant(GridSpec(dim, grid_n));

    const fs::path dir = prepare_out_dir(out_dir, force);
    json manifest = manifest_base("bounds", {}, grid_given ? grid_n : 0, dim, 0, out_dir);
    manifest["overrides"] =
        json{{"epsilon", epsilon}, {"c", c}, {"k_max", k_max},
             {"c_source", c_given ? "flag" : "poincare_constant"}};
    write_manifest(dir, manifest);

    const BoundSequence seq = bound_sequence(epsilon, c, k_max);
    std::ofstream csv = open_output(dir / "bounds.csv");
    write_bounds_csv(csv, seq);

    char buf[160];
    std::snprintf(buf, sizeof buf, "bounds: epsilon=%g c=%.10g convergent=%s rows=%zu\n",
                  epsilon, c, seq.convergent ? "yes" : "no", seq.rows.size());
    out << buf;
    return 0;
}

int cmd_fixed_point(double amp, int n, int dim, int m_max, const std::string& out_dir,
                    bool force, std::ostream& out) {
    if (amp < 0.0)
        throw ConfigError("--amp must be nonnegative");
    const fs::path dir = prepare_out_dir(out_dir, force);
    json manifest = manifest_base("fixed-point", {}, n, dim, 0, out_dir);
    manifest["overrides"] = json{{"amp", amp}, {"m_max", m_max}};
    write_manifest(dir, manifest);

    const GridSpec grid(dim, n);
    VectorField seed_field(grid);
    if (amp > 0.0) {
        seed_field = mode_seed(grid);
        seed_field = (amp / max_norm(seed_field)) * seed_field;
    }

    const FixedPointRun run = fixed_point_iteration(seed_field, m_max);

    std::ofstream csv = open_output(dir / "norms.csv");
    csv << "m,u_l2,grad_l2,lap_l2\n";
    for (std::size_t m = 0; m < run.history.size(); ++m) {
        const NormTriple& t = run.history[m];
        char line[160];
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", m, t.u_l2, t.grad_l2,
                      t.lap_l2);
        csv << line;
    }
    if (run.diverged)
        csv << "DIVERGED,,,\n";

    char buf[160];
    std::snprintf(buf, sizeof buf, "fixed-point: steps=%zu final_u_l2=%.6e%s\n",
                  run.history.size() - 1, run.history.back().u_l2,
                  run.diverged ? " DIVERGED" : "");
    out << buf;
    return 0;
}

int cmd_export_vtk(const std::string& field_path, const std::string& out_dir, bool force,
                   std::ostream& out) {
    const StoredField stored = read_field_file(field_path);
    const fs::path dir = prepare_out_dir(out_dir, force);
    json manifest =
        manifest_base("export-vtk", {field_path}, stored.grid.n, stored.grid.dim, 0, out_dir);
    manifest["overrides"] = json::object();
    write_manifest(dir, manifest);

    std::ofstream vtk = open_output(dir / "export.vtk");
    if (stored.is_scalar())
        write_scalar_vtk(vtk, stored.to_scalar(), "field", fs::path(field_path).filename().string());
    else
        write_mesh_vtk(vtk, stored.to_vector(), fs::path(field_path).filename().string());

    out << "vtk: " << stored.grid.node_count() << " points\n";
    return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"variational mesh toolkit: monitors, meshes, and norm-chain reports"};
    app.require_subcommand(1);

    std::string im_image;
    double im_beta = 2.0;
    int im_n = 65;
    bool im_curl = false;
    std::string im_out;
    bool im_force = false;
    CLI::App* im = app.add_subcommand("image2monitor",
                                      "build a monitor density from a grayscale PGM image");
    im->add_option("image", im_image, "PGM file, P2 or P5")->required();
    im->add_option("--beta", im_beta, "contrast weight: density = 1 + beta*(1 - intensity)");
    im->add_option("--n", im_n, "lattice points per axis");
    im->add_flag("--use-curl", im_curl, "store an explicit zero curl target");
    im->add_option("--out", im_out, "output directory")->required();
    im->add_flag("--force", im_force, "write into an existing directory");

    std::string gen_monitor;
    int gen_n = 0;
    OptimizerFlags gen_flags;
    std::string gen_out;
    bool gen_force = false;
    CLI::App* gen = app.add_subcommand("generate", "minimize the cost against a saved monitor");
    gen->add_option("monitor", gen_monitor, "directory written by image2monitor")->required();
    gen->add_option("--n", gen_n, "expected lattice points per axis (checked, not resampled)");
    add_optimizer_flags(gen, gen_flags);
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_flag("--force", gen_force, "write into an existing directory");

    std::string rec_t0;
    bool rec_curl = false;
    OptimizerFlags rec_flags;
    std::string rec_out;
    bool rec_force = false;
    CLI::App* rec = app.add_subcommand(
        "reconstruct", "recover a transformation from the monitor its target realizes");
    rec->add_option("t0", rec_t0, "target transformation, FLD1 position field")->required();
    rec->add_flag("--use-curl", rec_curl, "match the curl as well as the Jacobian");
    add_optimizer_flags(rec, rec_flags);
    rec->add_option("--out", rec_out, "output directory")->required();
    rec->add_flag("--force", rec_force, "write into an existing directory");

    int chk_n = 33;
    int chk_dim = 2;
    int chk_trials = 100;
    std::uint64_t chk_seed = 0;
    std::string chk_out;
    bool chk_force = false;
    CLI::App* chk = app.add_subcommand("check", "run the inequality chain on random fields");
    chk->add_option("--n", chk_n, "lattice points per axis");
    chk->add_option("--dim", chk_dim, "2 or 3");
    chk->add_option("--trials", chk_trials, "number of random fields");
    chk->add_option("--seed", chk_seed, "random seed");
    chk->add_option("--out", chk_out, "output directory")->required();
    chk->add_flag("--force", chk_force, "write into an existing directory");

    double bnd_eps = 0.1;
    double bnd_c = 0.0;
    int bnd_grid = 0;
    int bnd_dim = 2;
    int bnd_kmax = 10;
    std::string bnd_out;
    bool bnd_force = false;
    CLI::App* bnd = app.add_subcommand("bounds", "tabulate the analytic bound ladder");
    bnd->add_option("--epsilon", bnd_eps, "smallness parameter")->required();
    CLI::Option* bnd_c_opt = bnd->add_option("--c", bnd_c, "Poincare constant");
    CLI::Option* bnd_grid_opt =
        bnd->add_option("--grid", bnd_grid, "resolve the constant from this lattice size");
    bnd_c_opt->excludes(bnd_grid_opt);
    bnd->add_option("--dim", bnd_dim, "dimension for --grid");
    bnd->add_option("--k-max", bnd_kmax, "last ladder step");
    bnd->add_option("--out", bnd_out, "output directory")->required();
    bnd->add_flag("--force", bnd_force, "write into an existing directory");

    double fp_amp = 0.1;
    int fp_n = 17;
    int fp_dim = 2;
    int fp_mmax = 30;
    std::string fp_out;
    bool fp_force = false;
    CLI::App* fp = app.add_subcommand("fixed-point", "iterate the contraction map and log norms");
    fp->add_option("--amp", fp_amp, "max norm of the sine seed (0 for the zero seed)");
    fp->add_option("--n", fp_n, "lattice points per axis");
    fp->add_option("--dim", fp_dim, "2 or 3");
    fp->add_option("--m-max", fp_mmax, "iteration budget");
    fp->add_option("--out", fp_out, "output directory")->required();
    fp->add_flag("--force", fp_force, "write into an existing directory");

    std::string vtk_field;
    std::string vtk_out;
    bool vtk_force = false;
    CLI::App* vtk = app.add_subcommand("export-vtk", "convert an FLD1 field to legacy VTK");
    vtk->add_option("field", vtk_field, "FLD1 file (mesh or scalar)")->required();
    vtk->add_option("--out", vtk_out, "output directory")->required();
    vtk->add_flag("--force", vtk_force, "write into an existing directory");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(im))
            return cmd_image2monitor(im_image, im_beta, im_n, im_curl, im_out, im_force, out);
        if (app.got_subcommand(gen))
            return cmd_generate(gen_monitor, gen_n, gen_flags, gen_out, gen_force, out);
        if (app.got_subcommand(rec))
            return cmd_reconstruct(rec_t0, rec_curl, rec_flags, rec_out, rec_force, out);
        if (app.got_subcommand(chk))
            return cmd_check(chk_n, chk_dim, chk_trials, chk_seed, chk_out, chk_force, out);
        if (app.got_subcommand(bnd))
            return cmd_bounds(bnd_eps, bnd_c_opt->count() > 0, bnd_c, bnd_grid_opt->count() > 0,
                              bnd_grid, bnd_dim, bnd_kmax, bnd_out, bnd_force, out);
        if (app.got_subcommand(fp))
            return cmd_fixed_point(fp_amp, fp_n, fp_dim, fp_mmax, fp_out, fp_force, out);
        if (app.got_subcommand(vtk))
            return cmd_export_vtk(vtk_field, vtk_out, vtk_force, out);
        err << "error: no subcommand selected\n";
        return 2;
    } catch (const TargetError& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const varmesh::Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int run(std::vector<std::string> args) { return run(std::move(args), std::cout, std::cerr); }

}  // namespace varmesh::cli
