#include "varmesh/diffops.hpp"

#include <array>

#include "varmesh/errors.hpp"

namespace varmesh {

CurlField::CurlField(ScalarField s) : value_(std::move(s)) {
    if (grid().dim != 2)
        throw FieldError("scalar curl payload is only meaningful in 2D");
}

CurlField::CurlField(VectorField v) : value_(std::move(v)) {
    if (grid().dim != 3)
        throw FieldError("vector curl payload is only meaningful in 3D");
}

CurlField CurlField::zero(const GridSpec& grid) {
    if (grid.dim == 2)
        return CurlField(ScalarField(grid));
    return CurlField(VectorField(grid));
}

const GridSpec& CurlField::grid() const {
    if (is_scalar())
        return std::get<ScalarField>(value_).grid();
    return std::get<VectorField>(value_).grid();
}

const ScalarField& CurlField::scalar() const {
    if (!is_scalar())
        throw FieldError("curl payload is a vector, not a scalar");
    return std::get<ScalarField>(value_);
}

const VectorField& CurlField::vector() const {
    if (is_scalar())
        throw FieldError("curl payload is a scalar, not a vector");
    return std::get<VectorField>(value_);
}

double l2_norm(const CurlField& c) {
    return c.is_scalar() ? l2_norm(c.scalar()) : l2_norm(c.vector());
}

double l2_norm_interior(const CurlField& c) {
    return c.is_scalar() ? l2_norm_interior(c.scalar()) : l2_norm_interior(c.vector());
}

double max_norm(const CurlField& c) {
    return c.is_scalar() ? max_norm(c.scalar()) : max_norm(c.vector());
}

CurlField operator-(const CurlField& a, const CurlField& b) {
    if (a.is_scalar() != b.is_scalar())
        throw FieldError("curl payload kinds differ");
    if (a.is_scalar())
        return CurlField(a.scalar() - b.scalar());
    return CurlField(a.vector() - b.vector());
}

CurlField operator*(double alpha, const CurlField& c) {
    if (c.is_scalar())
        return CurlField(alpha * c.scalar());
    return CurlField(alpha * c.vector());
}

ScalarField diff_axis(const ScalarField& s, int axis, DiffScheme scheme) {
    const GridSpec& g = s.grid();
    if (axis < 0 || axis >= g.dim)
        throw GridError("diff_axis: axis out of range");

    const std::size_t stride = g.axis_stride(axis);
    const int n = g.n;
    const double h = g.h;
    const double* v = s.values().data();

    ScalarField out(g);
    for (std::size_t flat = 0; flat < g.node_count(); ++flat) {
        const int ia = g.axis_index(flat, axis);
        double d = 0.0;
        switch (scheme) {
            case DiffScheme::Central:
                if (ia == 0)
                    d = (-3.0 * v[flat] + 4.0 * v[flat + stride] - v[flat + 2 * stride]) /
                        (2.0 * h);
                else if (ia == n - 1)
                    d = (3.0 * v[flat] - 4.0 * v[flat - stride] + v[flat - 2 * stride]) /
                        (2.0 * h);
                else
                    d = (v[flat + stride] - v[flat - stride]) / (2.0 * h);
                break;
            case DiffScheme::Forward:
                d = (ia == n - 1) ? 0.0 : (v[flat + stride] - v[flat]) / h;
                break;
            case DiffScheme::Backward:
                d = (ia == 0) ? 0.0 : (v[flat] - v[flat - stride]) / h;
                break;
        }
        out[flat] = d;
    }
    return out;
}

VectorField gradient(const ScalarField& s, const StencilConvention& conv) {
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(s.grid().dim));
    for (int a = 0; a < s.grid().dim; ++a)
        comps.push_back(diff_axis(s, a, conv.gradient));
    return VectorField(s.grid(), std::move(comps));
}

ScalarField divergence(const VectorField& v, const StencilConvention& conv) {
    ScalarField out = diff_axis(v.comp(0), 0, conv.divergence);
    for (int a = 1; a < v.grid().dim; ++a) {
        ScalarField d = diff_axis(v.comp(a), a, conv.divergence);
        for (std::size_t flat = 0; flat < out.size(); ++flat)
            out[flat] += d[flat];
    }
    return out;
}

CurlField curl(const VectorField& v) {
    if (v.grid().dim == 2) {
        ScalarField out = diff_axis(v.comp(1), 0, DiffScheme::Central);
        ScalarField d = diff_axis(v.comp(0), 1, DiffScheme::Central);
        for (std::size_t flat = 0; flat < out.size(); ++flat)
            out[flat] -= d[flat];
        return CurlField(std::move(out));
    }

    auto d = [&](int comp, int axis) {
        return diff_axis(v.comp(comp), axis, DiffScheme::Central);
    };
    ScalarField c1 = d(2, 1) - d(1, 2);
    ScalarField c2 = d(0, 2) - d(2, 0);
    ScalarField c3 = d(0, 1) - d(1, 0);
    std::vector<ScalarField> comps{std::move(c1), std::move(c2), std::move(c3)};
    return CurlField(VectorField(v.grid(), std::move(comps)));
}

ScalarField laplacian(const ScalarField& s) {
    const GridSpec& g = s.grid();
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double* v = s.values().data();

    ScalarField out(g);
    for (std::size_t flat = 0; flat < g.node_count(); ++flat) {
        bool interior = true;
        for (int a = 0; a < g.dim; ++a)
            if (g.is_boundary_index(g.axis_index(flat, a)))
                interior = false;
        if (!interior)
            continue;
        double acc = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const std::size_t stride = g.axis_stride(a);
            acc += v[flat + stride] - 2.0 * v[flat] + v[flat - stride];
        }
        out[flat] = acc * inv_h2;
    }
    return out;
}

VectorField laplacian(const VectorField& v) {
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(v.components()));
    for (int c = 0; c < v.components(); ++c)
        comps.push_back(laplacian(v.comp(c)));
    return VectorField(v.grid(), std::move(comps));
}

namespace {

// Central difference quotients of every component along every axis:
// entry (a, b) is d comp_a / d x_b. jacobian_det, expansion_tail and
// expansion_F all read from this one tensor so that their algebraic
// relation is exact in floating point, not merely to truncation order.
std::array<ScalarField, 9> quotient_tensor(const VectorField& v) {
    const GridSpec& g = v.grid();
    std::array<ScalarField, 9> t = {
        ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g),
        ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
    for (int a = 0; a < g.dim; ++a)
        for (int b = 0; b < g.dim; ++b)
            t[static_cast<std::size_t>(3 * a + b)] = diff_axis(v.comp(a), b, DiffScheme::Central);
    return t;
}

} // namespace

ScalarField jacobian_det(const Transformation& phi) {
    return jacobian_det(phi.positions());
}

ScalarField jacobian_det(const VectorField& positions) {
    const GridSpec& g = positions.grid();
    std::array<ScalarField, 9> m = quotient_tensor(positions);
    ScalarField out(g);
    if (g.dim == 2) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = m[0][i] * m[4][i] - m[1][i] * m[3][i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = m[0][i] * (m[4][i] * m[8][i] - m[5][i] * m[7][i]) -
                     m[1][i] * (m[3][i] * m[8][i] - m[5][i] * m[6][i]) +
                     m[2][i] * (m[3][i] * m[7][i] - m[4][i] * m[6][i]);
        }
    }
    return out;
}

ScalarField expansion_tail(const VectorField& u) {
    const GridSpec& g = u.grid();
    std::array<ScalarField, 9> q = quotient_tensor(u);
    ScalarField out(g);
    if (g.dim == 2) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = q[0][i] * q[4][i] - q[1][i] * q[3][i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = q[0][i] * q[4][i] + q[0][i] * q[8][i] + q[4][i] * q[8][i] -
                     q[1][i] * q[3][i] - q[2][i] * q[6][i] - q[5][i] * q[7][i];
        }
    }
    return out;
}

ScalarField expansion_F(const VectorField& u) {
    const GridSpec& g = u.grid();
    std::array<ScalarField, 9> q = quotient_tensor(u);
    ScalarField out(g);
    if (g.dim == 2) {
        // the 2D tail is already the full determinant of grad(u)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = -(q[0][i] * q[4][i] - q[1][i] * q[3][i]);
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            double det = q[0][i] * (q[4][i] * q[8][i] - q[5][i] * q[7][i]) -
                         q[1][i] * (q[3][i] * q[8][i] - q[5][i] * q[6][i]) +
                         q[2][i] * (q[3][i] * q[7][i] - q[4][i] * q[6][i]);
            double tail = q[0][i] * q[4][i] + q[0][i] * q[8][i] + q[4][i] * q[8][i] -
                          q[1][i] * q[3][i] - q[2][i] * q[6][i] - q[5][i] * q[7][i];
            out[i] = -(det + tail);
        }
    }
    return out;
}

} // namespace varmesh
