#pragma once

#include <variant>

#include "varmesh/field.hpp"
#include "varmesh/transform.hpp"

namespace varmesh {

/// First-derivative quotient families. Central is second order at every
/// node (one-sided second-order rows on the faces). Forward and Backward
/// are the first-order summation-by-parts pair: Forward leaves the last
/// node of each line zero, Backward the first, so that for zero-boundary
/// u the discrete integration by parts <D+ u, v> = -<u, D- v> holds
/// exactly and the composition D- D+ reproduces the solver's Laplacian
/// stencil on interior nodes.
enum class DiffScheme { Central, Forward, Backward };

struct StencilConvention {
    DiffScheme gradient = DiffScheme::Central;
    DiffScheme divergence = DiffScheme::Central;

    static StencilConvention central() { return {}; }
    static StencilConvention matched_sbp() {
        return {DiffScheme::Forward, DiffScheme::Backward};
    }
};

/// Curl payload: a scalar in 2D, three components in 3D.
///
/// 2D:  dv2/dx1 - dv1/dx2.
/// 3D:  (d2 v3 - d3 v2,  d3 v1 - d1 v3,  d2 v1 - d1 v2).
///
/// The third 3D component is the negative of the textbook orientation.
/// Every consumer in this library uses this same layout, and the div-curl
/// right-hand-side assembly inverts exactly this convention, so it must
/// not be "fixed" in isolation.
class CurlField {
public:
    explicit CurlField(ScalarField s);
    explicit CurlField(VectorField v);

    /// Scalar zero in 2D, vector zero in 3D.
    static CurlField zero(const GridSpec& grid);

    bool is_scalar() const { return std::holds_alternative<ScalarField>(value_); }
    const GridSpec& grid() const;

    const ScalarField& scalar() const;
    const VectorField& vector() const;

private:
    std::variant<ScalarField, VectorField> value_;
};

double l2_norm(const CurlField& c);
double l2_norm_interior(const CurlField& c);
double max_norm(const CurlField& c);
CurlField operator-(const CurlField& a, const CurlField& b);
CurlField operator*(double alpha, const CurlField& c);

/// Difference quotient along one axis. Every differential operator in the
/// library is assembled from this primitive, which is what makes the
/// determinant expansion identity hold to roundoff rather than to O(h^2).
ScalarField diff_axis(const ScalarField& s, int axis, DiffScheme scheme);

VectorField gradient(const ScalarField& s,
                     const StencilConvention& conv = StencilConvention::central());
ScalarField divergence(const VectorField& v,
                       const StencilConvention& conv = StencilConvention::central());
CurlField curl(const VectorField& v);

/// Standard 2*dim+1-point stencil on interior nodes, zero on the
/// boundary. The solver realizes the Dirichlet identity rows itself.
ScalarField laplacian(const ScalarField& s);
VectorField laplacian(const VectorField& v);

/// Determinant of the central difference quotients of the positions.
ScalarField jacobian_det(const Transformation& phi);

/// Same determinant on a raw position field. Accepts maps that move the
/// boundary (a Transformation cannot), for diagnostics on candidate
/// targets before they are validated.
ScalarField jacobian_det(const VectorField& positions);

/// Second-order minors of the displacement gradient: in 3D the sum of the
/// three 2x2 principal minors of grad(u); in 2D its single minor det(grad u).
ScalarField expansion_tail(const VectorField& u);

/// F(u) with J(id + u) = 1 + div(u) - F(u): -(det grad u + tail) in 3D,
/// -det grad u in 2D, built from the same quotients as jacobian_det and
/// divergence.
ScalarField expansion_F(const VectorField& u);

} // namespace varmesh
