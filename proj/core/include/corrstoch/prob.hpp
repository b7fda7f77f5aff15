#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <vector>

#include "corrstoch/errors.hpp"

namespace corrstoch {

using Index = Eigen::Index;

/// Validation tolerances shared by the probability types.
namespace tol {
/// Entries in [-kNegClamp, 0) are treated as floating-point drift and
/// clamped to zero; anything more negative is rejected.
inline constexpr double kNegClamp = 1e-12;
/// Absolute tolerance on "sums to one" checks.
inline constexpr double kSumOne = 1e-9;
}  // namespace tol

/// Sequential left-to-right sum. Used for every normalization check so the
/// result does not depend on SIMD lane grouping.
double sequential_sum(const double* data, Index n);

/// A d-dimensional probability distribution.
///
/// Construction clamps entries in [-1e-12, 0) to zero, rejects anything more
/// negative, requires the total to be 1 within 1e-9 and then renormalizes by
/// the computed sum. Immutable afterwards.
class ProbVec {
public:
    explicit ProbVec(Eigen::VectorXd entries);
    ProbVec(std::initializer_list<double> entries);

    /// Builds a distribution from any nonnegative vector with positive total
    /// mass, dividing by the total. No "sums to one" precondition; this is
    /// the constructor for conditionals and empirical frequencies.
    static ProbVec normalized(Eigen::VectorXd entries);

    static ProbVec uniform(Index dim);
    static ProbVec point_mass(Index dim, Index i);

    Index dim() const { return v_.size(); }
    double operator[](Index i) const { return v_[i]; }
    const Eigen::VectorXd& values() const { return v_; }

    bool operator==(const ProbVec& other) const { return v_ == other.v_; }

private:
    struct Raw {};
    ProbVec(Eigen::VectorXd v, Raw) : v_(std::move(v)) {}
    Eigen::VectorXd v_;
};

/// A column-stochastic matrix: entry (i, j) is the probability of output i
/// given input basis state j, so every column is a distribution.
class StochMatrix {
public:
    explicit StochMatrix(Eigen::MatrixXd entries);

    static StochMatrix identity(Index d);
    /// The bit flip on dimension 2 (and its cyclic analogue for d > 2).
    static StochMatrix cyclic_shift(Index d);
    /// All columns equal to q: the map that discards its input.
    static StochMatrix constant_map(const ProbVec& q, Index d_in);

    Index d_out() const { return m_.rows(); }
    Index d_in() const { return m_.cols(); }
    double operator()(Index i, Index j) const { return m_(i, j); }
    const Eigen::MatrixXd& values() const { return m_; }
    ProbVec column(Index j) const;

private:
    Eigen::MatrixXd m_;
};

/// A sub-stochastic matrix: nonnegative entries, column sums anywhere in
/// [0, 1]. Models measure-and-prepare elements and other post-selecting
/// operations that succeed with probability equal to the column sum.
class SubStochMatrix {
public:
    explicit SubStochMatrix(Eigen::MatrixXd entries);
    SubStochMatrix(const StochMatrix& m) : m_(m.values()) {}

    /// The matrix unit E_{jk}: measure basis state k, prepare basis state j.
    static SubStochMatrix matrix_unit(Index d, Index j, Index k);

    Index d_out() const { return m_.rows(); }
    Index d_in() const { return m_.cols(); }
    double operator()(Index i, Index j) const { return m_(i, j); }
    const Eigen::MatrixXd& values() const { return m_; }

private:
    Eigen::MatrixXd m_;
};

/// A joint distribution over system x environment, indexed (s, e).
/// The total mass is 1 for a proper state; post-selecting operations
/// produce sub-normalized instances (see with_mass).
class JointDist {
public:
    /// Validates nonnegativity and total mass 1 within 1e-9, then
    /// renormalizes by the computed total.
    explicit JointDist(Eigen::MatrixXd entries);

    /// Accepts any nonnegative matrix with total mass <= 1 + 1e-9 without
    /// renormalizing. Used for post-selected (sub-normalized) states.
    static JointDist with_mass(Eigen::MatrixXd entries);

    /// The product state p (system) x t (environment).
    static JointDist product(const ProbVec& p, const ProbVec& t);
    /// Perfectly correlated state: mass p[s] at (s, s). Square by construction.
    static JointDist perfectly_correlated(const ProbVec& p);

    Index d_system() const { return m_.rows(); }
    Index d_env() const { return m_.cols(); }
    double operator()(Index s, Index e) const { return m_(s, e); }
    const Eigen::MatrixXd& values() const { return m_; }

    double total_mass() const;
    bool is_normalized() const;

private:
    struct Raw {};
    JointDist(Eigen::MatrixXd m, Raw) : m_(std::move(m)) {}
    Eigen::MatrixXd m_;
};

/// q = M p. Throws DimensionError on mismatch.
ProbVec apply(const StochMatrix& m, const ProbVec& p);

/// Recovers the unique linear map sending each input to its output.
///
/// Requires d linearly independent inputs (rank checked at 1e-10). Throws
/// RankDeficientError when the inputs do not span, and NotStochasticError
/// when the fitted map has negative entries or non-unit column sums: the
/// observed input/output behaviour is then not describable by a stochastic
/// map acting on the state alone.
StochMatrix infer_stochastic_map(const std::vector<ProbVec>& inputs,
                                 const std::vector<ProbVec>& outputs);

/// Marginal over the environment (row sums). Requires a normalized state.
ProbVec marginal_system(const JointDist& P);
/// Marginal over the system (column sums). Requires a normalized state.
ProbVec marginal_env(const JointDist& P);

/// Environment distribution conditioned on system outcome s: row s of P
/// divided by its mass. Throws ZeroMarginalError when that mass is zero.
ProbVec conditional_env_given_system(const JointDist& P, Index s);

/// True iff P equals the product of its marginals within tolerance in
/// max norm.
bool is_product(const JointDist& P, double tolerance);

/// Shannon entropy in nats, with 0 ln 0 = 0.
double entropy(const ProbVec& p);

/// Kullback-Leibler divergence sum_i p_i ln(p_i / q_i) in nats.
/// Terms with p_i = 0 contribute 0; p_i > 0 with q_i = 0 yields +infinity.
double kl(const ProbVec& p, const ProbVec& q);

double l1_distance(const ProbVec& a, const ProbVec& b);
double linf_distance(const ProbVec& a, const ProbVec& b);

}  // namespace corrstoch
