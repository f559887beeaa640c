#pragma once

// Shared helpers for the test binaries: analytic field samplers and
// seeded random field generators. Everything here is deterministic for a
// fixed seed.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "varmesh/field.hpp"
#include "varmesh/transform.hpp"

namespace testsupport {

using varmesh::GridSpec;
using varmesh::ScalarField;
using varmesh::Transformation;
using varmesh::VectorField;

inline ScalarField sample_scalar2(const GridSpec& g,
                                  const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            out.at(i, j) = f(g.coord(i), g.coord(j));
    return out;
}

inline ScalarField sample_scalar3(const GridSpec& g,
                                  const std::function<double(double, double, double)>& f) {
    ScalarField out(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k)
                out.at(i, j, k) = f(g.coord(i), g.coord(j), g.coord(k));
    return out;
}

inline VectorField sample_vector2(const GridSpec& g,
                                  const std::function<double(double, double)>& f1,
                                  const std::function<double(double, double)>& f2) {
    std::vector<ScalarField> comps{sample_scalar2(g, f1), sample_scalar2(g, f2)};
    return VectorField(g, std::move(comps));
}

inline VectorField sample_vector3(const GridSpec& g,
                                  const std::function<double(double, double, double)>& f1,
                                  const std::function<double(double, double, double)>& f2,
                                  const std::function<double(double, double, double)>& f3) {
    std::vector<ScalarField> comps{sample_scalar3(g, f1), sample_scalar3(g, f2),
                                   sample_scalar3(g, f3)};
    return VectorField(g, std::move(comps));
}

inline bool flat_is_boundary(const GridSpec& g, std::size_t flat) {
    for (int a = 0; a < g.dim; ++a)
        if (g.is_boundary_index(g.axis_index(flat, a)))
            return true;
    return false;
}

inline void zero_boundary(ScalarField& f) {
    const GridSpec& g = f.grid();
    for (std::size_t flat = 0; flat < f.size(); ++flat)
        if (flat_is_boundary(g, flat))
            f[flat] = 0.0;
}

inline void zero_boundary(VectorField& v) {
    for (int c = 0; c < v.components(); ++c)
        zero_boundary(v.comp(c));
}

/// Interior nodes uniform in [-amplitude, amplitude], boundary exactly 0.
inline ScalarField rough_zero_boundary_scalar(const GridSpec& g, std::mt19937_64& rng,
                                              double amplitude = 1.0) {
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    ScalarField out(g);
    for (std::size_t flat = 0; flat < out.size(); ++flat)
        out[flat] = flat_is_boundary(g, flat) ? 0.0 : dist(rng);
    return out;
}

inline VectorField rough_zero_boundary_vector(const GridSpec& g, std::mt19937_64& rng,
                                              double amplitude = 1.0) {
    VectorField out(g);
    for (int c = 0; c < g.dim; ++c)
        out.comp(c) = rough_zero_boundary_scalar(g, rng, amplitude);
    return out;
}

/// Random low-mode sine combination: smooth, boundary exactly zero.
inline ScalarField smooth_zero_boundary_scalar(const GridSpec& g, std::mt19937_64& rng,
                                               double amplitude = 1.0, int max_mode = 3) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double pi = 3.14159265358979323846;
    ScalarField out(g);
    if (g.dim == 2) {
        for (int m = 1; m <= max_mode; ++m)
            for (int p = 1; p <= max_mode; ++p) {
                double a = amplitude * dist(rng) / (m * m + p * p);
                for (int i = 0; i < g.n; ++i)
                    for (int j = 0; j < g.n; ++j)
                        out.at(i, j) +=
                            a * std::sin(m * pi * g.coord(i)) * std::sin(p * pi * g.coord(j));
            }
    } else {
        for (int m = 1; m <= max_mode; ++m)
            for (int p = 1; p <= max_mode; ++p)
                for (int q = 1; q <= max_mode; ++q) {
                    double a = amplitude * dist(rng) / (m * m + p * p + q * q);
                    for (int i = 0; i < g.n; ++i)
                        for (int j = 0; j < g.n; ++j)
                            for (int k = 0; k < g.n; ++k)
                                out.at(i, j, k) += a * std::sin(m * pi * g.coord(i)) *
                                                   std::sin(p * pi * g.coord(j)) *
                                                   std::sin(q * pi * g.coord(k));
                }
    }
    zero_boundary(out);
    return out;
}

inline VectorField smooth_zero_boundary_vector(const GridSpec& g, std::mt19937_64& rng,
                                               double amplitude = 1.0, int max_mode = 3) {
    VectorField out(g);
    for (int c = 0; c < g.dim; ++c)
        out.comp(c) = smooth_zero_boundary_scalar(g, rng, amplitude, max_mode);
    return out;
}

/// First Dirichlet eigenvector of the discrete Laplacian: product of
/// sin(pi x_a) over the axes, boundary zeroed exactly.
inline ScalarField first_eigenvector(const GridSpec& g) {
    const double pi = 3.14159265358979323846;
    ScalarField out(g);
    if (g.dim == 2) {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                out.at(i, j) = std::sin(pi * g.coord(i)) * std::sin(pi * g.coord(j));
    } else {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                for (int k = 0; k < g.n; ++k)
                    out.at(i, j, k) = std::sin(pi * g.coord(i)) * std::sin(pi * g.coord(j)) *
                                      std::sin(pi * g.coord(k));
    }
    zero_boundary(out);
    return out;
}

/// Scales v in place so that max_norm(v) == target (no-op for zero fields).
inline void scale_to_max_norm(VectorField& v, double target) {
    double m = varmesh::max_norm(v);
    if (m == 0.0)
        return;
    v = (target / m) * v;
}

} // namespace testsupport
