#include "corrstoch/sampler.hpp"

#include <string>

namespace corrstoch {

RunConfig::RunConfig(std::int64_t samples_, std::uint64_t seed_, Index d_system_,
                     Index d_env_)
    : samples(samples_), seed(seed_), d_system(d_system_), d_env(d_env_) {
    if (samples < 1) {
        throw ConfigError("samples", "samples must be >= 1, got " + std::to_string(samples));
    }
    if (d_system < 1 || d_env < 1) {
        throw ConfigError("dims", "dimensions must be positive");
    }
}

std::pair<Index, Index> sample_joint(const JointDist& P, SplitMix64& rng) {
    const double u = rng.next_double();
    double acc = 0.0;
    for (Index s = 0; s < P.d_system(); ++s) {
        for (Index e = 0; e < P.d_env(); ++e) {
            acc += P(s, e);
            if (u < acc) return {s, e};
        }
    }
    // u landed past the accumulated total (rounding); return the last cell.
    return {P.d_system() - 1, P.d_env() - 1};
}

namespace {

Index sample_column(const StochMatrix& m, Index col, SplitMix64& rng) {
    const double u = rng.next_double();
    double acc = 0.0;
    for (Index i = 0; i < m.d_out(); ++i) {
        acc += m(i, col);
        if (u < acc) return i;
    }
    return m.d_out() - 1;
}

}  // namespace

BasisRunResult simulate_basis_run(const JointChannel& gamma, const JointDist& P,
                                  Index j, Index k, SplitMix64& rng) {
    const auto [s, e] = sample_joint(P, rng);
    if (s != k) return {false, -1};
    const Index out = sample_column(gamma.matrix(), gamma.composite_index(j, e), rng);
    return {true, out / gamma.d_env()};
}

EmpiricalProcess estimate_process(const JointChannel& gamma, const JointDist& P,
                                  const RunConfig& cfg) {
    if (gamma.d_system() != cfg.d_system || gamma.d_env() != cfg.d_env ||
        P.d_system() != cfg.d_system || P.d_env() != cfg.d_env) {
        throw DimensionError("estimate_process: config dimensions do not match instance");
    }
    const Index d = cfg.d_system;
    EmpiricalProcess emp;
    emp.d_system = d;
    emp.samples = cfg.samples;
    emp.seed = cfg.seed;
    emp.counts.assign(d * d, std::vector<std::int64_t>(d, 0));
    emp.accepted.assign(d * d, 0);

    for (Index j = 0; j < d; ++j) {
        for (Index k = 0; k < d; ++k) {
            SplitMix64 rng = cell_substream(cfg.seed, j, k, d);
            auto& hist = emp.counts[j * d + k];
            std::int64_t acc = 0;
            for (std::int64_t n = 0; n < cfg.samples; ++n) {
                const BasisRunResult r = simulate_basis_run(gamma, P, j, k, rng);
                if (r.accepted) {
                    ++acc;
                    ++hist[r.output];
                }
            }
            emp.accepted[j * d + k] = acc;
        }
    }
    return emp;
}

ProcessMap reconstruct_theta(const EmpiricalProcess& emp) {
    const Index d = emp.d_system;
    const double n = static_cast<double>(emp.samples);
    std::vector<Eigen::VectorXd> outputs;
    outputs.reserve(d * d);
    Eigen::VectorXd marginal = Eigen::VectorXd::Zero(d);
    for (Index j = 0; j < d; ++j) {
        for (Index k = 0; k < d; ++k) {
            if (emp.accepted_at(j, k) == 0) {
                throw ZeroAcceptanceError("reconstruct_theta: cell (" + std::to_string(j) +
                                          "," + std::to_string(k) + ") accepted no runs");
            }
            Eigen::VectorXd out(d);
            for (Index a = 0; a < d; ++a) {
                out[a] = static_cast<double>(emp.histogram(j, k)[a]) / n;
            }
            outputs.push_back(std::move(out));
            marginal[k] += static_cast<double>(emp.accepted_at(j, k)) / n;
        }
    }
    marginal /= static_cast<double>(d);
    return ProcessMap(std::move(outputs), ProbVec::normalized(std::move(marginal)),
                      ProcessMap::MassCheck::Relaxed);
}

}  // namespace corrstoch
