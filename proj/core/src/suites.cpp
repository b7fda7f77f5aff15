#include "corrstoch/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "corrstoch/dynamics.hpp"
#include "corrstoch/random_instance.hpp"
#include "corrstoch/sampler.hpp"
#include "corrstoch/second_law.hpp"

namespace corrstoch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr Index kDims[] = {2, 3, 5};
constexpr Index kJointDims[][2] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};

std::string describe_trial(const std::string& what, long trial, double value) {
    std::ostringstream os;
    os << what << " at trial " << trial << " (value " << value << ")";
    return os.str();
}

Eigen::VectorXd tensor_with_uniform(const ProbVec& q) {
    const Index d = q.dim();
    const double inv_d = 1.0 / static_cast<double>(d);
    Eigen::VectorXd v(d * d);
    for (Index a = 0; a < d; ++a)
        for (Index b = 0; b < d; ++b) v[a * d + b] = q[a] * inv_d;
    return v;
}

}  // namespace

SuiteResult suite_apply_validity(long trials, std::uint64_t seed) {
    SuiteResult r{"apply_validity", trials, 0, "max_sum_deviation", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index d = kDims[t % 3];
        const StochMatrix m = random_stoch_matrix(d, d, rng);
        const ProbVec p = random_prob_vec(d, rng);
        try {
            const ProbVec q = apply(m, p);
            const double dev =
                std::abs(sequential_sum(q.values().data(), q.dim()) - 1.0);
            r.metric = std::max(r.metric, dev);
        } catch (const Error& e) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial(e.what(), t, 0.0);
        }
    }
    return r;
}

SuiteResult suite_kl_contractivity(long trials, std::uint64_t seed) {
    SuiteResult r{"kl_contractivity", trials, 0, "min_contraction", kInf, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index d = kDims[t % 3];
        const StochMatrix m = random_stoch_matrix(d, d, rng);
        const ProbVec p = random_prob_vec(d, rng);
        const ProbVec q = random_prob_vec(d, rng);
        const double c = kl_contractivity_check(m, p, q);
        if (!(c >= -1e-9)) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("contraction below -1e-9", t, c);
        }
        r.metric = std::min(r.metric, c);
    }
    return r;
}

SuiteResult suite_kl_axioms(long trials, std::uint64_t seed) {
    SuiteResult r{"kl_axioms", trials, 0, "max_self_divergence", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index d = kDims[t % 3];
        const ProbVec p = random_prob_vec(d, rng);
        const ProbVec q = random_prob_vec(d, rng);

        const double self = kl(p, p);
        r.metric = std::max(r.metric, self);
        bool ok = self <= 1e-20;

        const double cross = kl(p, q);
        ok = ok && cross >= 0.0;
        // Indiscernibility both ways: distinct random draws must separate,
        // and a sub-1e-12 perturbation must not.
        ok = ok && ((l1_distance(p, q) <= 1e-12) == (cross <= 1e-20));
        Eigen::VectorXd nudged = p.values();
        nudged[0] += 1e-13;
        nudged[d - 1] -= 1e-13;
        const ProbVec pn = ProbVec::normalized(std::move(nudged));
        ok = ok && (l1_distance(p, pn) > 1e-12 || kl(p, pn) <= 1e-20);

        if (!ok) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("kl axiom violated", t, cross);
        }
    }
    return r;
}

SuiteResult suite_infer_roundtrip(long trials, std::uint64_t seed) {
    SuiteResult r{"infer_roundtrip", trials, 0, "max_entry_error", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index d = kDims[t % 3];
        const StochMatrix m = random_stoch_matrix(d, d, rng);
        std::vector<ProbVec> inputs, outputs;
        for (Index j = 0; j < d; ++j) {
            inputs.push_back(ProbVec::point_mass(d, j));
            outputs.push_back(m.column(j));
        }
        const StochMatrix back = infer_stochastic_map(inputs, outputs);
        const double err = (back.values() - m.values()).cwiseAbs().maxCoeff();
        r.metric = std::max(r.metric, err);
        if (!(err <= 1e-12)) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("roundtrip error above 1e-12", t, err);
        }
    }
    return r;
}

SuiteResult suite_marginal_consistency(long trials, std::uint64_t seed) {
    SuiteResult r{"marginal_consistency", trials, 0, "max_l1_error", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const auto& dims = kJointDims[t % 4];
        const JointDist P = random_joint_dist(dims[0], dims[1], rng);
        const ProbVec ps = marginal_system(P);
        Eigen::VectorXd mix = Eigen::VectorXd::Zero(dims[1]);
        for (Index s = 0; s < dims[0]; ++s) {
            mix += ps[s] * conditional_env_given_system(P, s).values();
        }
        const double err = (mix - marginal_env(P).values()).cwiseAbs().sum();
        r.metric = std::max(r.metric, err);
        if (!(err <= 1e-12)) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("marginal mismatch above 1e-12", t, err);
        }
    }
    return r;
}

SuiteResult suite_tomography_exactness(long trials, std::uint64_t seed) {
    SuiteResult r{"tomography_exactness", trials, 0, "max_l1_error", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const auto& dims = kJointDims[t % 4];
        const RandomInstance inst = random_instance(dims[0], dims[1], rng);
        const ProcessMap theta = theta_from_basis(inst.gamma, inst.P);
        const ProbVec predicted = theta_apply(theta, inst.xi);
        const ProbVec direct = process_output(inst.gamma, inst.P, inst.xi);
        const double err = l1_distance(predicted, direct);
        r.metric = std::max(r.metric, err);
        if (!(err <= 1e-12)) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("prediction error above 1e-12", t, err);
        }
    }
    return r;
}

SuiteResult suite_product_reduction(long trials, std::uint64_t seed) {
    SuiteResult r{"product_reduction", trials, 0, "max_error", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const auto& dims = kJointDims[t % 4];
        const JointChannel gamma = random_joint_channel(dims[0], dims[1], rng);
        const ProbVec p = random_prob_vec(dims[0], rng);
        const ProbVec env = random_prob_vec(dims[1], rng);
        const JointDist P = JointDist::product(p, env);
        const StochMatrix xi = random_stoch_matrix(dims[0], dims[0], rng);

        const ProcessMap theta = theta_from_basis(gamma, P);
        const StochMatrix reduced = product_case_map(gamma, env);
        double err = l1_distance(theta_apply(theta, xi), apply(reduced, apply(xi, p)));
        err = std::max(err, conditional_map_discrepancy(gamma, P));
        err = std::max(err,
                       (naive_map(gamma, P).values() - reduced.values()).cwiseAbs().maxCoeff());
        r.metric = std::max(r.metric, err);
        if (!(err <= 1e-12)) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("product reduction error above 1e-12", t, err);
        }
    }
    return r;
}

SuiteResult suite_theta_linearity(long trials, std::uint64_t seed) {
    SuiteResult r{"theta_linearity", trials, 0, "max_l1_error", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const auto& dims = kJointDims[t % 4];
        const RandomInstance inst = random_instance(dims[0], dims[1], rng);
        const StochMatrix xi2 = random_stoch_matrix(dims[0], dims[0], rng);
        const double alpha = rng.next_double();
        const ProcessMap theta = theta_from_basis(inst.gamma, inst.P);

        const StochMatrix mix(alpha * inst.xi.values() + (1.0 - alpha) * xi2.values());
        const Eigen::VectorXd combo = alpha * theta_apply(theta, inst.xi).values() +
                                      (1.0 - alpha) * theta_apply(theta, xi2).values();
        const double err = (theta_apply(theta, mix).values() - combo).cwiseAbs().sum();
        r.metric = std::max(r.metric, err);
        if (!(err <= 1e-12)) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("linearity error above 1e-12", t, err);
        }
    }
    return r;
}

SuiteResult suite_naive_map_failure() {
    SuiteResult r{"naive_map_failure", 1, 0, "min_prediction_gap", 0.0, ""};
    const JointChannel cnot = JointChannel::cnot();
    const JointDist half = JointDist::perfectly_correlated(ProbVec::uniform(2));
    const StochMatrix ident = StochMatrix::identity(2);
    const StochMatrix flip = StochMatrix::cyclic_shift(2);

    const ProcessMap theta = theta_from_basis(cnot, half);
    const ProbVec q_ident = theta_apply(theta, ident);
    const ProbVec q_flip = theta_apply(theta, flip);

    // Both preparations feed the machine the same marginal...
    const ProbVec p = marginal_system(half);
    const double same_input = l1_distance(apply(ident, p), apply(flip, p));
    // ...but the naive state-to-state map predicts one output for it, while
    // the true process outputs differ by the full L1 diameter.
    const StochMatrix naive = naive_map(cnot, half);
    const ProbVec naive_pred = apply(naive, apply(flip, p));
    const double gap = l1_distance(naive_pred, q_flip);
    const double swap_disc =
        conditional_map_discrepancy(JointChannel::swap(2), half);

    bool ok = same_input <= 1e-15;
    ok = ok && l1_distance(q_ident, ProbVec::point_mass(2, 0)) <= 1e-12;
    ok = ok && l1_distance(q_flip, ProbVec::point_mass(2, 1)) <= 1e-12;
    ok = ok && gap >= 1.0 && std::abs(gap - 2.0) <= 1e-12;
    ok = ok && std::abs(swap_disc - 2.0) <= 1e-12;
    r.metric = gap;
    if (!ok) {
        r.failures = 1;
        r.detail = "controlled-flip counterexample did not reproduce";
    }
    return r;
}

SuiteResult suite_env_marginal_invariance(long trials, std::uint64_t seed) {
    SuiteResult r{"env_marginal_invariance", trials, 0, "max_l1_error", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const auto& dims = kJointDims[t % 4];
        const JointDist P = random_joint_dist(dims[0], dims[1], rng);
        const StochMatrix xi = random_stoch_matrix(dims[0], dims[0], rng);
        const JointDist prepared = apply_preparation(SubStochMatrix(xi), P);
        const double err = l1_distance(marginal_env(prepared), marginal_env(P));
        r.metric = std::max(r.metric, err);
        if (!(err <= 1e-12)) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("environment marginal moved", t, err);
        }
    }
    return r;
}

SuiteResult suite_lift_validity(long trials, std::uint64_t seed) {
    SuiteResult r{"lift_validity", trials, 0, "max_defect", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const auto& dims = kJointDims[t % 4];
        const RandomInstance inst = random_instance(dims[0], dims[1], rng);
        const Index d = dims[0];
        const ProcessMap theta = theta_from_basis(inst.gamma, inst.P);
        const LiftedMap lifted = lift_theta(theta);

        // Column sums of the lift, recomputed from the basis outputs so the
        // constructor's renormalization cannot mask a defect.
        double defect = 0.0;
        for (Index j = 0; j < d; ++j) {
            for (Index k = 0; k < d; ++k) {
                const Eigen::VectorXd& out = theta.basis_output(j, k);
                const double mass = sequential_sum(out.data(), out.size());
                if (mass == 0.0) continue;
                double colsum = 0.0;
                for (Index a = 0; a < d; ++a)
                    for (Index b = 0; b < d; ++b)
                        colsum += (out[a] / mass) * (1.0 / static_cast<double>(d));
                defect = std::max(defect, std::abs(colsum - 1.0));
            }
        }

        const FixedPoint fp = fixed_point(lifted);
        bool ok = defect <= 1e-12 && fp.residual <= 1e-10;

        // Fixed point factorizes as e x uniform.
        Eigen::VectorXd e_sys = Eigen::VectorXd::Zero(d);
        for (Index a = 0; a < d; ++a)
            for (Index b = 0; b < d; ++b) e_sys[a] += fp.epsilon[a * d + b];
        double structure = 0.0;
        for (Index a = 0; a < d; ++a)
            for (Index b = 0; b < d; ++b)
                structure = std::max(structure,
                                     std::abs(fp.epsilon[a * d + b] -
                                              e_sys[a] / static_cast<double>(d)));
        ok = ok && structure <= 1e-10;

        // The lift agrees with the process on every preparation.
        const VectorizedPrep prep = vectorize_prep(inst.xi, theta.marginal());
        const Eigen::VectorXd lifted_out = lifted.matrix.values() * prep.entries.values();
        const Eigen::VectorXd direct = tensor_with_uniform(theta_apply(theta, inst.xi));
        const double consistency = (lifted_out - direct).cwiseAbs().sum();
        ok = ok && consistency <= 1e-12;

        r.metric = std::max({r.metric, defect, structure, consistency});
        if (!ok) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("lift defect", t, r.metric);
        }
    }
    return r;
}

SuiteResult suite_second_law(long trials, std::uint64_t seed) {
    SuiteResult r{"second_law", trials, 0, "min_slack", kInf, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const auto& dims = kJointDims[t % 4];
        const RandomInstance inst = random_instance(dims[0], dims[1], rng);
        const ProcessMap theta = theta_from_basis(inst.gamma, inst.P);
        const SecondLawReport rep = second_law_check(theta, inst.xi);
        const bool ok = rep.satisfied && (rep.slack == kInf ? rep.degenerate : true);
        if (std::isfinite(rep.slack)) r.metric = std::min(r.metric, rep.slack);
        if (!ok) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("bound violated", t, rep.slack);
        }
    }
    return r;
}

SuiteResult suite_second_law_equality(long trials, std::uint64_t seed) {
    SuiteResult r{"second_law_equality", trials, 0, "max_abs_slack", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const auto& dims = kJointDims[t % 4];
        const Index d = dims[0];
        // Uniform system marginal makes the fixed point reachable by a
        // constant-column preparation.
        Eigen::MatrixXd joint(d, dims[1]);
        for (Index s = 0; s < d; ++s) {
            joint.row(s) =
                random_prob_vec(dims[1], rng).values().transpose() / static_cast<double>(d);
        }
        const JointDist P((joint));
        const JointChannel gamma = random_joint_channel(d, dims[1], rng);
        const ProcessMap theta = theta_from_basis(gamma, P);

        const FixedPoint fp = fixed_point(lift_theta(theta));
        Eigen::VectorXd e_sys = Eigen::VectorXd::Zero(d);
        for (Index a = 0; a < d; ++a)
            for (Index b = 0; b < d; ++b) e_sys[a] += fp.epsilon[a * d + b];
        const StochMatrix xi_fix =
            StochMatrix::constant_map(ProbVec::normalized(std::move(e_sys)), d);

        const SecondLawReport rep = second_law_check(theta, xi_fix);
        const double dev = std::abs(rep.slack);
        r.metric = std::max(r.metric, dev);
        if (!(dev <= 1e-9)) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("slack at fixed point above 1e-9", t, dev);
        }
    }
    return r;
}

SuiteResult suite_spohn(long trials, std::uint64_t seed) {
    SuiteResult r{"spohn_bound", trials, 0, "min_slack", kInf, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index d = kDims[t % 3];
        const StochMatrix lambda = random_stoch_matrix(d, d, rng);
        const ProbVec p = random_prob_vec(d, rng);
        const SecondLawReport rep = spohn_check(lambda, p);
        if (std::isfinite(rep.slack)) r.metric = std::min(r.metric, rep.slack);
        if (!rep.satisfied) {
            ++r.failures;
            if (r.detail.empty()) r.detail = describe_trial("bound violated", t, rep.slack);
        }
    }
    return r;
}

SuiteResult suite_uniform_reduction(long trials, std::uint64_t seed) {
    SuiteResult r{"uniform_reduction", trials, 0, "bitwise_mismatches", 0.0, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index d = kDims[t % 3];
        const StochMatrix xi = random_stoch_matrix(d, d, rng);
        const VectorizedPrep prep = vectorize_prep(xi, ProbVec::uniform(d));

        // The literal construction: row-major vec(xi) scaled by 1/d.
        const double inv_d = 1.0 / static_cast<double>(d);
        Eigen::VectorXd flat(d * d);
        for (Index j = 0; j < d; ++j)
            for (Index k = 0; k < d; ++k) flat[j * d + k] = xi(j, k) * inv_d;
        const ProbVec expected(flat);

        bool identical = true;
        for (Index i = 0; i < d * d; ++i) {
            if (prep.entries[i] != expected[i]) identical = false;
        }
        if (!identical) {
            ++r.failures;
            r.metric += 1.0;
            if (r.detail.empty()) r.detail = describe_trial("not bitwise equal", t, 0.0);
        }
    }
    return r;
}

SuiteResult suite_sampler_determinism(std::uint64_t seed, long samples) {
    SuiteResult r{"sampler_determinism", 1, 0, "mismatched_cells", 0.0, ""};
    SplitMix64 rng(seed);
    const RandomInstance inst = random_instance(2, 3, rng);
    const RunConfig cfg(samples, seed, 2, 3);
    const EmpiricalProcess a = estimate_process(inst.gamma, inst.P, cfg);
    const EmpiricalProcess b = estimate_process(inst.gamma, inst.P, cfg);
    if (a.counts != b.counts || a.accepted != b.accepted) {
        r.failures = 1;
        r.detail = "repeated run with fixed seed differed";
    }
    return r;
}

SuiteResult suite_sampler_consistency(long seeds, long samples, std::uint64_t seed) {
    SuiteResult r{"sampler_consistency", 0, 0, "cell_pass_fraction", 1.0, ""};
    SplitMix64 rng(seed);
    const RandomInstance inst = random_instance(2, 2, rng);
    const ProcessMap exact = theta_from_basis(inst.gamma, inst.P);
    const Index d = 2;

    long cells = 0, cell_failures = 0, mass_failures = 0;
    for (long s = 0; s < seeds; ++s) {
        const RunConfig cfg(samples, seed + 1000 + static_cast<std::uint64_t>(s), d, d);
        const EmpiricalProcess emp = estimate_process(inst.gamma, inst.P, cfg);
        for (Index j = 0; j < d; ++j) {
            for (Index k = 0; k < d; ++k) {
                ++cells;
                const auto acc = emp.accepted_at(j, k);
                if (acc == 0) {
                    ++cell_failures;
                    continue;
                }
                const Eigen::VectorXd& exact_out = exact.basis_output(j, k);
                const double mass = sequential_sum(exact_out.data(), exact_out.size());
                bool ok = true;
                for (Index a = 0; a < d; ++a) {
                    const double qhat = static_cast<double>(emp.histogram(j, k)[a]) /
                                        static_cast<double>(acc);
                    const double q = exact_out[a] / mass;
                    // Binomial concentration with the variance bound 1/4.
                    if (std::abs(qhat - q) >
                        5.0 * std::sqrt(0.25 / static_cast<double>(acc))) {
                        ok = false;
                    }
                }
                if (!ok) ++cell_failures;
            }
        }
        // Column-wise acceptance totals concentrate at d * N * p_k.
        const ProbVec p = exact.marginal();
        for (Index k = 0; k < d; ++k) {
            std::int64_t col_acc = 0;
            for (Index j = 0; j < d; ++j) col_acc += emp.accepted_at(j, k);
            const double expect = static_cast<double>(d) *
                                  static_cast<double>(samples) * p[k];
            const double sigma = std::sqrt(static_cast<double>(d) *
                                           static_cast<double>(samples) * p[k] *
                                           (1.0 - p[k]));
            if (std::abs(static_cast<double>(col_acc) - expect) > 5.0 * sigma) {
                ++mass_failures;
            }
        }
    }
    r.trials = cells;
    const double pass_fraction =
        1.0 - static_cast<double>(cell_failures) / static_cast<double>(cells);
    r.metric = pass_fraction;
    if (pass_fraction < 0.99) {
        r.failures = cell_failures;
        r.detail = "cell pass fraction below 99%";
    }
    if (mass_failures > std::max(1L, seeds / 100)) {
        ++r.failures;
        if (r.detail.empty()) r.detail = "acceptance totals drifted beyond 5 sigma";
    }
    return r;
}

std::vector<SuiteResult> run_all_suites(long trials, std::uint64_t seed, long samples) {
    std::vector<SuiteResult> out;
    out.push_back(suite_apply_validity(trials, seed));
    out.push_back(suite_kl_contractivity(std::max(trials, 1000L), seed + 1));
    out.push_back(suite_kl_axioms(trials, seed + 2));
    out.push_back(suite_infer_roundtrip(trials, seed + 3));
    out.push_back(suite_marginal_consistency(trials, seed + 4));
    out.push_back(suite_tomography_exactness(std::max(trials, 100L), seed + 5));
    out.push_back(suite_product_reduction(trials, seed + 6));
    out.push_back(suite_theta_linearity(trials, seed + 7));
    out.push_back(suite_naive_map_failure());
    out.push_back(suite_env_marginal_invariance(trials, seed + 8));
    out.push_back(suite_lift_validity(trials, seed + 9));
    out.push_back(suite_second_law(std::max(trials, 500L), seed + 10));
    out.push_back(suite_second_law_equality(trials, seed + 11));
    out.push_back(suite_spohn(std::max(trials, 500L), seed + 12));
    out.push_back(suite_uniform_reduction(trials, seed + 13));
    out.push_back(suite_sampler_determinism(seed + 14, samples));
    out.push_back(suite_sampler_consistency(20, samples, seed + 15));
    return out;
}

}  // namespace corrstoch
