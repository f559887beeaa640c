#include "varmesh/field.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "varmesh/errors.hpp"

namespace varmesh {

namespace {

void require_finite(const std::vector<double>& values, const char* context) {
    for (double v : values)
        if (!std::isfinite(v))
            throw FieldError(std::string(context) + ": non-finite value in field");
}

double pow_h(const GridSpec& g) {
    double w = g.h;
    for (int a = 1; a < g.dim; ++a)
        w *= g.h;
    return w;
}

bool flat_is_boundary(const GridSpec& g, std::size_t flat) {
    for (int a = 0; a < g.dim; ++a)
        if (g.is_boundary_index(g.axis_index(flat, a)))
            return true;
    return false;
}

} // namespace

ScalarField::ScalarField(const GridSpec& grid)
    : grid_(grid), values_(grid.node_count(), 0.0) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count())
        throw FieldError("scalar field payload size does not match the grid (" +
                         std::to_string(values_.size()) + " values for " +
                         std::to_string(grid_.node_count()) + " nodes)");
    require_finite(values_, "scalar field construction");
}

double ScalarField::at(int i, int j) const {
    return values_[static_cast<std::size_t>(i) * grid_.axis_stride(0) +
                   static_cast<std::size_t>(j)];
}

double ScalarField::at(int i, int j, int k) const {
    return values_[static_cast<std::size_t>(i) * grid_.axis_stride(0) +
                   static_cast<std::size_t>(j) * grid_.axis_stride(1) +
                   static_cast<std::size_t>(k)];
}

double& ScalarField::at(int i, int j) {
    return values_[static_cast<std::size_t>(i) * grid_.axis_stride(0) +
                   static_cast<std::size_t>(j)];
}

double& ScalarField::at(int i, int j, int k) {
    return values_[static_cast<std::size_t>(i) * grid_.axis_stride(0) +
                   static_cast<std::size_t>(j) * grid_.axis_stride(1) +
                   static_cast<std::size_t>(k)];
}

VectorField::VectorField(const GridSpec& grid) : grid_(grid) {
    comps_.reserve(static_cast<std::size_t>(grid.dim));
    for (int c = 0; c < grid.dim; ++c)
        comps_.emplace_back(grid);
}

VectorField::VectorField(const GridSpec& grid, std::vector<ScalarField> components)
    : grid_(grid), comps_(std::move(components)) {
    if (comps_.size() != static_cast<std::size_t>(grid.dim))
        throw FieldError("vector field needs exactly dim components, got " +
                         std::to_string(comps_.size()));
    for (const ScalarField& c : comps_)
        require_same_grid(c.grid(), grid_, "vector field construction");
}

double l2_norm(const ScalarField& f) {
    double sum = 0.0;
    for (double v : f.values()) {
        if (!std::isfinite(v))
            throw FieldError("l2_norm: non-finite value in field");
        sum += v * v;
    }
    return std::sqrt(pow_h(f.grid()) * sum);
}

double l2_norm(const VectorField& v) {
    double sum = 0.0;
    for (int c = 0; c < v.components(); ++c) {
        for (double x : v.comp(c).values()) {
            if (!std::isfinite(x))
                throw FieldError("l2_norm: non-finite value in field");
            sum += x * x;
        }
    }
    return std::sqrt(pow_h(v.grid()) * sum);
}

double l2_norm_interior(const ScalarField& f) {
    const GridSpec& g = f.grid();
    double sum = 0.0;
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        if (flat_is_boundary(g, flat))
            continue;
        double v = f[flat];
        if (!std::isfinite(v))
            throw FieldError("l2_norm_interior: non-finite value in field");
        sum += v * v;
    }
    return std::sqrt(pow_h(g) * sum);
}

double l2_norm_interior(const VectorField& v) {
    const GridSpec& g = v.grid();
    double sum = 0.0;
    for (int c = 0; c < v.components(); ++c) {
        const ScalarField& f = v.comp(c);
        for (std::size_t flat = 0; flat < f.size(); ++flat) {
            if (flat_is_boundary(g, flat))
                continue;
            double x = f[flat];
            if (!std::isfinite(x))
                throw FieldError("l2_norm_interior: non-finite value in field");
            sum += x * x;
        }
    }
    return std::sqrt(pow_h(g) * sum);
}

double max_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) {
        if (!std::isfinite(v))
            throw FieldError("max_norm: non-finite value in field");
        m = std::max(m, std::abs(v));
    }
    return m;
}

double max_norm(const VectorField& v) {
    double m = 0.0;
    for (int c = 0; c < v.components(); ++c)
        m = std::max(m, max_norm(v.comp(c)));
    return m;
}

bool all_finite(const ScalarField& f) {
    for (double v : f.values())
        if (!std::isfinite(v))
            return false;
    return true;
}

namespace {

template <typename Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op, const char* context) {
    require_same_grid(a.grid(), b.grid(), context);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = op(a[i], b[i]);
    return ScalarField(a.grid(), std::move(out));
}

} // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x + y; }, "scalar field sum");
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x - y; }, "scalar field difference");
}

ScalarField operator*(double alpha, const ScalarField& f) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        out[i] = alpha * f[i];
    return ScalarField(f.grid(), std::move(out));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "vector field sum");
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(a.components()));
    for (int c = 0; c < a.components(); ++c)
        comps.push_back(a.comp(c) + b.comp(c));
    return VectorField(a.grid(), std::move(comps));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "vector field difference");
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(a.components()));
    for (int c = 0; c < a.components(); ++c)
        comps.push_back(a.comp(c) - b.comp(c));
    return VectorField(a.grid(), std::move(comps));
}

VectorField operator*(double alpha, const VectorField& v) {
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(v.components()));
    for (int c = 0; c < v.components(); ++c)
        comps.push_back(alpha * v.comp(c));
    return VectorField(v.grid(), std::move(comps));
}

} // namespace varmesh
