#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "corrstoch/dynamics.hpp"
#include "corrstoch/prob.hpp"

namespace corrstoch {

/// SplitMix64 generator. Chosen over the standard-library engines because
/// the algorithm is a few lines of fixed integer arithmetic, so streams are
/// bit-reproducible across platforms and language ports.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Derives the independent substream for tomography cell (j, k): the master
/// seed plus the cell index j * d + k, passed through one SplitMix64 output
/// step. Part of the wire-level reproducibility contract.
inline SplitMix64 cell_substream(std::uint64_t master_seed, Index j, Index k, Index d) {
    SplitMix64 mix(master_seed + static_cast<std::uint64_t>(j * d + k));
    return SplitMix64(mix.next_u64());
}

struct RunConfig {
    std::int64_t samples;
    std::uint64_t seed;
    Index d_system;
    Index d_env;

    RunConfig(std::int64_t samples_, std::uint64_t seed_, Index d_system_, Index d_env_);
};

/// Raw counts from the basis-preparation experiments: for each cell (j, k),
/// a histogram over system outputs of the accepted runs and the number of
/// runs that passed post-selection, out of `samples` runs per cell.
struct EmpiricalProcess {
    Index d_system;
    std::int64_t samples;
    std::uint64_t seed;
    /// Indexed j * d + k; each entry holds d_system output counts.
    std::vector<std::vector<std::int64_t>> counts;
    /// Indexed j * d + k.
    std::vector<std::int64_t> accepted;

    const std::vector<std::int64_t>& histogram(Index j, Index k) const {
        return counts[j * d_system + k];
    }
    std::int64_t accepted_at(Index j, Index k) const {
        return accepted[j * d_system + k];
    }
};

/// Draws a pair (s, e) with probability P(s, e) by inverse-CDF walk in
/// system-major order, consuming one uniform deviate.
std::pair<Index, Index> sample_joint(const JointDist& P, SplitMix64& rng);

struct BasisRunResult {
    bool accepted;
    /// System index of the machine output; -1 when the run was rejected.
    Index output;
};

/// One run of the measure-k/prepare-j experiment: draw (s, e) from P,
/// reject unless s = k, otherwise set the system to j and sample the
/// machine's composite output, reporting its system index.
BasisRunResult simulate_basis_run(const JointChannel& gamma, const JointDist& P,
                                  Index j, Index k, SplitMix64& rng);

/// Runs `cfg.samples` basis runs for every cell (j, k), each cell on its own
/// derived substream, so the result is independent of execution order and
/// bit-identical for a fixed seed.
EmpiricalProcess estimate_process(const JointChannel& gamma, const JointDist& P,
                                  const RunConfig& cfg);

/// Point estimate of the process description: cell (j, k) gets the vector
/// counts / N (equivalently, acceptance rate times the normalized
/// histogram); the marginal estimate averages acceptance rates over j.
/// Throws ZeroAcceptanceError, naming the cell, if any cell accepted no runs.
ProcessMap reconstruct_theta(const EmpiricalProcess& emp);

}  // namespace corrstoch
