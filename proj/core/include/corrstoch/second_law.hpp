#pragma once

#include <vector>

#include "corrstoch/dynamics.hpp"
#include "corrstoch/prob.hpp"

namespace corrstoch {

/// A stochastic preparation folded with the system marginal into a single
/// d^2-dimensional distribution: entry (j, k), at lexicographic index
/// j * d + k, equals xi_jk * p_k. Reduces to vec(xi)/d for uniform p.
struct VectorizedPrep {
    ProbVec entries;
    StochMatrix xi;
    ProbVec p;
};

/// The d^2 x d^2 stochastic matrix realizing the process description on
/// vectorized preparations: column (j, k) is the normalized basis output
/// nu^(j,k) tensored with the uniform distribution. Columns whose system
/// outcome has zero marginal carry no weight from any valid preparation;
/// they are completed with the uniform distribution and listed in
/// flagged_columns.
struct LiftedMap {
    StochMatrix matrix;
    std::vector<Index> flagged_columns;
    Index d_system;
};

/// A stationary distribution of a stochastic matrix.
///
/// `unique` is false when the eigenvalue-1 multiplicity exceeds one
/// (numerical rank of M - I deficient by two or more at 1e-10); the
/// reported vector is then the limit of damped iteration from the uniform
/// starting point.
struct FixedPoint {
    ProbVec epsilon;
    double residual;
    bool unique;
};

/// Evaluation of an entropy-production bound: lhs = entropy change, rhs =
/// the fixed-point bound, slack = lhs - rhs. All entropic quantities in
/// nats; rhs and slack may be +/-infinity when the fixed point has zero
/// entries on indices where the distributions move (degenerate = true).
struct SecondLawReport {
    double lhs;
    double rhs;
    double slack;
    bool satisfied;
    bool degenerate;
    ProbVec epsilon;
    double residual;
    bool unique;
};

/// Tolerance below which slack is still counted as satisfying the bound
/// (accumulated rounding in entropies at dimension <= 64).
inline constexpr double kSlackTolerance = 1e-9;

VectorizedPrep vectorize_prep(const StochMatrix& xi, const ProbVec& p);

LiftedMap lift_theta(const ProcessMap& theta);

/// Stationary distribution of a square stochastic matrix. Uses a direct
/// linear solve on the simplex up to dimension 64, damped power iteration
/// from the uniform vector otherwise or when the fixed point is not unique
/// (tolerance 1e-12, at most 10^6 iterations). Throws ConvergenceError,
/// reporting the residual achieved, if the iteration fails to reach an L1
/// residual of 1e-10.
FixedPoint fixed_point(const StochMatrix& m);
FixedPoint fixed_point(const LiftedMap& lifted);

/// The entropy-production bound for a process with intermediate
/// correlations, evaluated at preparation xi:
///   H(q_up) - H(xi_up) >= -(q_up - xi_up) . ln(epsilon)
/// with q_up the predicted output tensored with the uniform distribution and
/// epsilon the fixed point of the lifted map. Indices where q_up and xi_up
/// agree contribute nothing to the rhs even when epsilon vanishes there;
/// an index where they differ and epsilon vanishes makes the rhs infinite
/// and sets degenerate.
SecondLawReport second_law_check(const ProcessMap& theta, const StochMatrix& xi);

/// The classical entropy-production bound for a plain stochastic map
/// relative to its fixed point e:
///   H(Lambda p) - H(p) >= -(Lambda p - p) . ln(e).
SecondLawReport spohn_check(const StochMatrix& lambda, const ProbVec& p);

/// kl(p, q) - kl(Mp, Mq), which is nonnegative: divergence contracts under
/// stochastic maps. An infinite kl(p, q) yields +infinity (the contracted
/// divergence can never be infinite while the original is finite).
double kl_contractivity_check(const StochMatrix& m, const ProbVec& p, const ProbVec& q);

}  // namespace corrstoch
