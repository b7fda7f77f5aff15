#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrstoch/prob.hpp"

namespace corrstoch {

/// Outcome of one seeded property suite.
struct SuiteResult {
    std::string name;
    long trials = 0;
    long failures = 0;
    /// Suite-specific extremum over all trials (worst slack, largest error,
    /// ...), named by metric_name.
    std::string metric_name;
    double metric = 0.0;
    /// Description of the first failure, empty when all trials passed.
    std::string detail;

    bool passed() const { return failures == 0; }
};

// prob-core properties
SuiteResult suite_apply_validity(long trials, std::uint64_t seed);
SuiteResult suite_kl_contractivity(long trials, std::uint64_t seed);
SuiteResult suite_kl_axioms(long trials, std::uint64_t seed);
SuiteResult suite_infer_roundtrip(long trials, std::uint64_t seed);
SuiteResult suite_marginal_consistency(long trials, std::uint64_t seed);

// correlated-dynamics properties
SuiteResult suite_tomography_exactness(long trials, std::uint64_t seed);
SuiteResult suite_product_reduction(long trials, std::uint64_t seed);
SuiteResult suite_theta_linearity(long trials, std::uint64_t seed);
SuiteResult suite_naive_map_failure();
SuiteResult suite_env_marginal_invariance(long trials, std::uint64_t seed);

// second-law properties
SuiteResult suite_lift_validity(long trials, std::uint64_t seed);
SuiteResult suite_second_law(long trials, std::uint64_t seed);
SuiteResult suite_second_law_equality(long trials, std::uint64_t seed);
SuiteResult suite_spohn(long trials, std::uint64_t seed);
SuiteResult suite_uniform_reduction(long trials, std::uint64_t seed);

// sampler properties
SuiteResult suite_sampler_determinism(std::uint64_t seed, long samples);
SuiteResult suite_sampler_consistency(long seeds, long samples, std::uint64_t seed);

/// Every suite above with a shared trial count and seed; the sampler suites
/// run with `samples` draws per cell and a reduced seed count so the whole
/// battery stays interactive.
std::vector<SuiteResult> run_all_suites(long trials, std::uint64_t seed, long samples);

}  // namespace corrstoch
