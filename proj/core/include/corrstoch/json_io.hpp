#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "corrstoch/dynamics.hpp"
#include "corrstoch/prob.hpp"
#include "corrstoch/sampler.hpp"
#include "corrstoch/second_law.hpp"

namespace corrstoch {

using json = nlohmann::json;

// Wire formats. Matrices are written as arrays of rows with an explicit
// "convention": "column-stochastic" tag and explicit dimensions; composite
// objects declare the system-major index layout. Doubles survive a
// serialize/parse round trip bit-exactly.

json to_json(const ProbVec& p);
ProbVec prob_vec_from_json(const json& j);

json to_json(const StochMatrix& m);
StochMatrix stoch_matrix_from_json(const json& j);

json to_json(const JointDist& P);
JointDist joint_dist_from_json(const json& j);

json to_json(const JointChannel& gamma);
JointChannel joint_channel_from_json(const json& j);

json to_json(const ProcessMap& theta);
ProcessMap process_map_from_json(const json& j);

/// lhs/rhs/slack may be infinite; they are encoded as the strings "+inf"
/// and "-inf" so the document stays valid JSON.
json to_json(const SecondLawReport& report);

json to_json(const EmpiricalProcess& emp);
EmpiricalProcess empirical_process_from_json(const json& j);

/// One row per cell: j, k, accepted, samples, then the output histogram.
std::string empirical_to_csv(const EmpiricalProcess& emp);

}  // namespace corrstoch
