#include "varmesh/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "varmesh/errors.hpp"
#include "varmesh/field_io.hpp"

namespace varmesh {

namespace {

constexpr double kIntegralTol = 1e-10;
constexpr double kDivergenceTol = 1e-8;

double sample_bilinear(const GrayImage& img, double x1, double x2) {
    // Column index grows with x1; row 0 sits at the top of the picture,
    // which is x2 = 1 in the domain.
    const double col = x1 * (img.width - 1);
    const double row = (1.0 - x2) * (img.height - 1);
    int c0 = static_cast<int>(std::floor(col));
    int r0 = static_cast<int>(std::floor(row));
    c0 = std::max(0, std::min(c0, img.width - 2 >= 0 ? img.width - 2 : 0));
    r0 = std::max(0, std::min(r0, img.height - 2 >= 0 ? img.height - 2 : 0));
    const int c1 = std::min(c0 + 1, img.width - 1);
    const int r1 = std::min(r0 + 1, img.height - 1);
    const double tc = std::max(0.0, std::min(1.0, col - c0));
    const double tr = std::max(0.0, std::min(1.0, row - r0));
    const double top = (1.0 - tc) * img.intensity(r0, c0) + tc * img.intensity(r0, c1);
    const double bot = (1.0 - tc) * img.intensity(r1, c0) + tc * img.intensity(r1, c1);
    return (1.0 - tr) * top + tr * bot;
}

}  // namespace

double monitor_integral(const ScalarField& f) {
    long double sum = 0.0L;
    long double comp = 0.0L;
    for (double v : f.values()) {
        const long double y = static_cast<long double>(v) - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return static_cast<double>(sum / static_cast<long double>(f.size()));
}

ScalarField normalize_f0(const ScalarField& raw) {
    for (double v : raw.values())
        if (!(v > 0.0)) throw TargetError("nonpositive monitor density");
    const double integral = monitor_integral(raw);
    return (1.0 / integral) * raw;
}

double divergence_defect(const CurlField& g0) {
    if (g0.is_scalar()) return 0.0;
    StencilConvention conv = StencilConvention::matched_sbp();
    return l2_norm_interior(divergence(g0.vector(), conv));
}

VectorField project_divergence_free(const VectorField& g, const SolverConfig& config) {
    if (g.grid().dim != 3)
        throw GridError("divergence-free projection applies to 3D fields only");
    StencilConvention conv = StencilConvention::matched_sbp();
    const ScalarField defect = divergence(g, conv);
    const ScalarField potential = solve_dirichlet(defect, config);
    return g - gradient(potential, conv);
}

void MonitorPair::validate() const {
    // CurlField's own invariant ties payload shape to dimension, so a grid
    // match is all the structural checking left to do here.
    require_same_grid(f0.grid(), g0.grid(), "monitor pair");
    for (double v : f0.values())
        if (!(v > 0.0)) throw TargetError("nonpositive monitor density");
    const double integral = monitor_integral(f0);
    if (std::abs(integral - 1.0) > kIntegralTol) {
        std::ostringstream msg;
        msg << "monitor density integrates to " << integral << ", expected 1";
        throw TargetError(msg.str());
    }
    const double div = divergence_defect(g0);
    if (div > kDivergenceTol) {
        std::ostringstream msg;
        msg << "rotational target has divergence " << div;
        throw TargetError(msg.str());
    }
}

MonitorPair monitor_from_image(const GrayImage& image, double beta, const GridSpec& grid,
                               bool use_curl) {
    if (grid.dim != 2)
        throw ConfigError("image monitors are 2D; volumetric targets need a transformation");
    if (!(beta > 0.0)) throw ConfigError("contrast beta must be positive");
    if (image.width < 1 || image.height < 1 ||
        image.samples.size() !=
            static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height))
        throw ImageFormatError("image has no usable samples");

    ScalarField raw(grid);
    for (int i = 0; i < grid.n; ++i) {
        const double x1 = grid.coord(i);
        for (int j = 0; j < grid.n; ++j) {
            const double x2 = grid.coord(j);
            raw.at(i, j) = 1.0 + beta * (1.0 - sample_bilinear(image, x1, x2));
        }
    }

    MonitorPair pair{normalize_f0(raw), CurlField::zero(grid), use_curl};
    pair.validate();
    return pair;
}

MonitorPair monitor_from_transformation(const Transformation& t, bool use_curl,
                                        const SolverConfig& config) {
    const ScalarField jac = jacobian_det(t);
    for (double v : jac.values())
        if (!(v > 0.0)) throw TargetError("folded target: Jacobian determinant is nonpositive");

    MonitorPair pair{normalize_f0(jac), CurlField::zero(t.grid()), use_curl};
    if (use_curl) {
        CurlField rotation = curl(t.positions());
        if (t.grid().dim == 3)
            rotation = CurlField(project_divergence_free(rotation.vector(), config));
        pair.g0 = std::move(rotation);
    }
    pair.validate();
    return pair;
}

void save_monitor(const MonitorPair& pair, const std::filesystem::path& dir) {
    pair.validate();
    std::filesystem::create_directories(dir);
    write_field_file(dir / "f0.fld", pair.f0);
    if (pair.g0.is_scalar())
        write_field_file(dir / "g0.fld", pair.g0.scalar());
    else
        write_field_file(dir / "g0.fld", pair.g0.vector());
    std::ofstream manifest(dir / "monitor.txt");
    if (!manifest) throw FieldIoError(FieldIoError::Code::Io, "cannot write monitor manifest");
    manifest << "f0 f0.fld\n";
    manifest << "g0 g0.fld\n";
    manifest << "curl_enabled " << (pair.curl_enabled ? 1 : 0) << "\n";
    if (!manifest.flush())
        throw FieldIoError(FieldIoError::Code::Io, "short write to monitor manifest");
}

MonitorPair load_monitor(const std::filesystem::path& dir) {
    std::ifstream manifest(dir / "monitor.txt");
    if (!manifest)
        throw FieldIoError(FieldIoError::Code::Io,
                           "cannot open monitor manifest in '" + dir.string() + "'");
    std::string f0_name, g0_name;
    bool curl_enabled = false;
    std::string key;
    while (manifest >> key) {
        if (key == "f0") {
            manifest >> f0_name;
        } else if (key == "g0") {
            manifest >> g0_name;
        } else if (key == "curl_enabled") {
            int flag = 0;
            manifest >> flag;
            curl_enabled = flag != 0;
        } else {
            throw FieldIoError(FieldIoError::Code::Io,
                               "unknown monitor manifest key '" + key + "'");
        }
    }
    if (f0_name.empty() || g0_name.empty())
        throw FieldIoError(FieldIoError::Code::Io, "monitor manifest is incomplete");

    const StoredField f0_stored = read_field_file(dir / f0_name);
    const StoredField g0_stored = read_field_file(dir / g0_name);
    MonitorPair pair{f0_stored.to_scalar(),
                     g0_stored.is_scalar() ? CurlField(g0_stored.to_scalar())
                                           : CurlField(g0_stored.to_vector()),
                     curl_enabled};
    pair.validate();
    return pair;
}

}  // namespace varmesh
