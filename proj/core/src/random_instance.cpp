#include "corrstoch/random_instance.hpp"

#include <cmath>

namespace corrstoch {

namespace {

Eigen::VectorXd exponential_spacings(Index d, SplitMix64& rng) {
    Eigen::VectorXd g(d);
    for (Index i = 0; i < d; ++i) {
        // 1 - u is in (0, 1], so the log is finite.
        g[i] = -std::log(1.0 - rng.next_double());
    }
    return g;
}

}  // namespace

ProbVec random_prob_vec(Index d, SplitMix64& rng) {
    return ProbVec::normalized(exponential_spacings(d, rng));
}

StochMatrix random_stoch_matrix(Index d_out, Index d_in, SplitMix64& rng) {
    Eigen::MatrixXd m(d_out, d_in);
    for (Index j = 0; j < d_in; ++j) {
        m.col(j) = random_prob_vec(d_out, rng).values();
    }
    return StochMatrix(std::move(m));
}

JointDist random_joint_dist(Index d_system, Index d_env, SplitMix64& rng) {
    const ProbVec flat = random_prob_vec(d_system * d_env, rng);
    Eigen::MatrixXd m(d_system, d_env);
    for (Index s = 0; s < d_system; ++s)
        for (Index e = 0; e < d_env; ++e) m(s, e) = flat[s * d_env + e];
    return JointDist(std::move(m));
}

JointChannel random_joint_channel(Index d_system, Index d_env, SplitMix64& rng) {
    const Index d = d_system * d_env;
    return JointChannel(random_stoch_matrix(d, d, rng), d_system, d_env);
}

RandomInstance random_instance(Index d_system, Index d_env, SplitMix64& rng) {
    JointChannel gamma = random_joint_channel(d_system, d_env, rng);
    JointDist P = random_joint_dist(d_system, d_env, rng);
    StochMatrix xi = random_stoch_matrix(d_system, d_system, rng);
    return RandomInstance{std::move(gamma), std::move(P), std::move(xi)};
}

}  // namespace corrstoch
