#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "varmesh/field.hpp"
#include "varmesh/poisson.hpp"

namespace varmesh {

/// The three norms of the smallness hypothesis, measured with the matched
/// one-sided stencil pair so the discrete Green identity is exact (central
/// norms would leave an O(h) gap and poison every chain test built here).
struct NormTriple {
    double u_l2 = 0.0;
    double grad_l2 = 0.0;
    double lap_l2 = 0.0;

    /// The epsilon of the smallness hypothesis: the triple is read
    /// componentwise, so its scale is the largest member.
    double max() const;
};

/// Throws FieldError unless u is exactly zero on the boundary (the discrete
/// surrogate for membership in H1_0).
NormTriple norm_triple(const VectorField& u);

/// |  |grad u|^2  -  |<u, lap u>|  | with compensated accumulation; zero up
/// to roundoff for zero-boundary fields because the forward/backward pair
/// sums by parts exactly.
double green_identity_gap(const VectorField& u);

struct BoundPair {
    double lhs;
    double rhs;
};

/// lhs = |grad u|^2, rhs = |u| * |lap u|. Cauchy-Schwarz applied to the
/// exact Green identity, so lhs <= rhs holds to roundoff; equality is tight
/// on Dirichlet eigenvectors.
BoundPair interpolation_check(const VectorField& u);

/// lhs = |u|^2, rhs = c * |grad u|^2, sharp on the first eigenvector when c
/// is the discrete constant from poincare_constant.
BoundPair poincare_check(const VectorField& u, double c);

struct BoundRow {
    int k;
    double bound_u;     // c^(1 + k/2) * eps^(2 + k)
    double bound_grad;  // c^(1/2 + k/2) * eps^(2 + k)
    double bound_lap;   // c^(k/2) * eps^(2 + k)
};

/// The analytic bound ladder: row k tightens row k-1 by one pass through
/// the chain, and the whole ladder collapses to zero exactly when
/// eps < min(1, 1/sqrt(c)).
struct BoundSequence {
    double epsilon;
    double c;
    bool convergent;
    std::vector<BoundRow> rows;
};

BoundSequence bound_sequence(double epsilon, double c, int k_max);

/// History of u_(m+1) = solve(lap v = grad F(u_m)), the Poisson reduction
/// of "div u = F(u), curl u = 0" with homogeneous data. Near zero the map
/// is quadratically contractive (F is at least quadratic in the first
/// derivatives), which is the computational content of the uniqueness
/// argument: the only small fixed point is u = 0.
struct FixedPointRun {
    std::vector<NormTriple> history;  // entry 0 is the seed
    bool diverged = false;            // an iterate outgrew the seed tenfold
};

FixedPointRun fixed_point_iteration(const VectorField& seed, int m_max,
                                    const SolverConfig& config = {});

struct ChainRow {
    std::string name;
    double lhs;
    double rhs;
    bool pass;
};

/// Every inequality of the norm chain evaluated on one field: the Green
/// identity, interpolation, the Poincare bound, their composition, the
/// density-from-Laplacian bound (also against c * eps^2 with eps the
/// measured triple maximum), and the interpolated gradient bound.
struct ChainReport {
    NormTriple norms;
    double c;
    double epsilon;
    std::vector<ChainRow> rows;
    bool all_pass;
};

ChainReport chain_report(const VectorField& u, double c);

/// CSV exports: one row per inequality / per ladder step, flags as 0/1.
void write_chain_csv(std::ostream& out, const ChainReport& report);
void write_bounds_csv(std::ostream& out, const BoundSequence& seq);

}  // namespace varmesh
