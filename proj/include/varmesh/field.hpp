#pragma once

#include <vector>

#include "varmesh/grid.hpp"

namespace varmesh {

/// One double per lattice node, flat storage in grid order.
class ScalarField {
public:
    /// Zero-filled field.
    explicit ScalarField(const GridSpec& grid);

    /// Takes ownership of `values`; size must match the grid and every
    /// value must be finite.
    ScalarField(const GridSpec& grid, std::vector<double> values);

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t flat) const { return values_[flat]; }
    double& operator[](std::size_t flat) { return values_[flat]; }

    double at(int i, int j) const;
    double at(int i, int j, int k) const;
    double& at(int i, int j);
    double& at(int i, int j, int k);

    const std::vector<double>& values() const { return values_; }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// dim scalar components on a shared lattice. Component c of a vector
/// field or transformation is the coordinate along axis c.
class VectorField {
public:
    explicit VectorField(const GridSpec& grid);
    VectorField(const GridSpec& grid, std::vector<ScalarField> components);

    const GridSpec& grid() const { return grid_; }
    int components() const { return static_cast<int>(comps_.size()); }

    const ScalarField& comp(int c) const { return comps_[static_cast<std::size_t>(c)]; }
    ScalarField& comp(int c) { return comps_[static_cast<std::size_t>(c)]; }

private:
    GridSpec grid_;
    std::vector<ScalarField> comps_;
};

// Node-weighted L2 norm, sqrt(h^dim * sum over every node), boundary
// included. Throws FieldError on non-finite values instead of quietly
// returning NaN.
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);

// Same weights, interior nodes only. Residual and cost functionals use
// this flavour because the constraints they measure live in the interior.
double l2_norm_interior(const ScalarField& f);
double l2_norm_interior(const VectorField& v);

double max_norm(const ScalarField& f);
double max_norm(const VectorField& v);

bool all_finite(const ScalarField& f);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double alpha, const ScalarField& f);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double alpha, const VectorField& v);

} // namespace varmesh
