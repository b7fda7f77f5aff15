#pragma once

#include "corrstoch/dynamics.hpp"
#include "corrstoch/prob.hpp"
#include "corrstoch/sampler.hpp"

namespace corrstoch {

/// Draw from the flat Dirichlet distribution over the d-simplex
/// (exponential spacings, normalized). Full support with probability 1.
ProbVec random_prob_vec(Index d, SplitMix64& rng);

/// Column-stochastic matrix with independent flat-Dirichlet columns.
StochMatrix random_stoch_matrix(Index d_out, Index d_in, SplitMix64& rng);

/// Joint distribution drawn flat on the (d_S * d_E)-simplex.
JointDist random_joint_dist(Index d_system, Index d_env, SplitMix64& rng);

JointChannel random_joint_channel(Index d_system, Index d_env, SplitMix64& rng);

/// A full random experiment: channel, correlated joint state and a
/// stochastic preparation on the system.
struct RandomInstance {
    JointChannel gamma;
    JointDist P;
    StochMatrix xi;
};

RandomInstance random_instance(Index d_system, Index d_env, SplitMix64& rng);

}  // namespace corrstoch
