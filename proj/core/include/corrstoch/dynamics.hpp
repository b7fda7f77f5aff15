#pragma once

#include <vector>

#include "corrstoch/prob.hpp"

namespace corrstoch {

/// A stochastic map on the composite system x environment space.
///
/// The composite index is system-major: i = s * d_env + e. Columns are
/// output distributions over composite states.
class JointChannel {
public:
    JointChannel(StochMatrix gamma, Index d_system, Index d_env);

    /// Exchanges system and environment: (s, e) -> (e, s). Requires equal
    /// dimensions.
    static JointChannel swap(Index d);
    /// Controlled flip on bits: (s, e) -> (s xor e, e).
    static JointChannel cnot();
    static JointChannel identity(Index d_system, Index d_env);

    Index d_system() const { return d_system_; }
    Index d_env() const { return d_env_; }
    Index d_composite() const { return d_system_ * d_env_; }
    const StochMatrix& matrix() const { return gamma_; }

    Index composite_index(Index s, Index e) const { return s * d_env_ + e; }

    /// Applies the channel to a (possibly sub-normalized) joint state.
    Eigen::MatrixXd apply_raw(const Eigen::MatrixXd& joint) const;
    JointDist apply(const JointDist& P) const;

private:
    StochMatrix gamma_;
    Index d_system_;
    Index d_env_;
};

/// The process description built from basis experiments: for every
/// measure-k/prepare-j operation, the (sub-normalized) output distribution
/// of the machine. Together with the system marginal this predicts the
/// output for an arbitrary preparation.
class ProcessMap {
public:
    enum class MassCheck {
        /// Enforce that cell (j, k) carries mass p_k within 1e-9 (exact maps).
        Strict,
        /// Skip the mass consistency check (finite-sample estimates).
        Relaxed,
    };

    ProcessMap(std::vector<Eigen::VectorXd> basis_outputs, ProbVec marginal,
               MassCheck check = MassCheck::Strict);

    Index d_system() const { return marginal_.dim(); }
    const ProbVec& marginal() const { return marginal_; }
    MassCheck mass_check() const { return check_; }

    /// Output distribution (mass p_k) for the measure-k/prepare-j operation.
    const Eigen::VectorXd& basis_output(Index j, Index k) const;

private:
    std::vector<Eigen::VectorXd> basis_outputs_;  // index j * d + k
    ProbVec marginal_;
    MassCheck check_;
};

/// The map obtained by conditioning the environment on the observed system
/// state: column s is the machine output for input s with environment
/// conditioned on s. Well-defined as a matrix but does not predict the
/// dynamics of prepared inputs when system and environment are correlated.
StochMatrix naive_map(const JointChannel& gamma, const JointDist& P);

/// Maximum over system-outcome pairs (s, s') of the induced L1 distance
/// between the output maps built with the environment conditioned on s
/// versus s'. Zero iff the conditioned maps all agree.
double conditional_map_discrepancy(const JointChannel& gamma, const JointDist& P);

/// The reduced map when the joint state factorizes: column s is the output
/// of the channel on basis state s paired with environment state t.
StochMatrix product_case_map(const JointChannel& gamma, const ProbVec& t);

/// Applies a local operation to the system half of a joint state. With a
/// stochastic operation the environment marginal is untouched; with a
/// sub-stochastic one the result is sub-normalized (post-selection).
JointDist apply_preparation(const SubStochMatrix& xi, const JointDist& P);

/// System output of the machine after preparing with xi:
/// the system marginal of Gamma applied to (xi x I) P.
ProbVec process_output(const JointChannel& gamma, const JointDist& P,
                       const StochMatrix& xi);

/// Runs the d^2 basis experiments (measure k, prepare j) and records each
/// output distribution, building the full process description.
ProcessMap theta_from_basis(const JointChannel& gamma, const JointDist& P);

/// Predicts the output for an arbitrary stochastic preparation as the linear
/// combination of basis outputs weighted by the entries of xi.
ProbVec theta_apply(const ProcessMap& theta, const StochMatrix& xi);

}  // namespace corrstoch
