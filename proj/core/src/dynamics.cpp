#include "corrstoch/dynamics.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace corrstoch {

namespace {

// Flattens a joint (s, e) matrix into the system-major composite vector.
Eigen::VectorXd vec_system_major(const Eigen::MatrixXd& joint) {
    const Index dS = joint.rows(), dE = joint.cols();
    Eigen::VectorXd v(dS * dE);
    for (Index s = 0; s < dS; ++s)
        for (Index e = 0; e < dE; ++e) v[s * dE + e] = joint(s, e);
    return v;
}

Eigen::MatrixXd unvec_system_major(const Eigen::VectorXd& v, Index dS, Index dE) {
    Eigen::MatrixXd joint(dS, dE);
    for (Index s = 0; s < dS; ++s)
        for (Index e = 0; e < dE; ++e) joint(s, e) = v[s * dE + e];
    return joint;
}

Eigen::VectorXd system_mass(const Eigen::MatrixXd& joint) {
    return joint.rowwise().sum();
}

}  // namespace

JointChannel::JointChannel(StochMatrix gamma, Index d_system, Index d_env)
    : gamma_(std::move(gamma)), d_system_(d_system), d_env_(d_env) {
    if (d_system_ < 1 || d_env_ < 1) {
        throw DimensionError("JointChannel: dimensions must be positive");
    }
    const Index d = d_system_ * d_env_;
    if (gamma_.d_in() != d || gamma_.d_out() != d) {
        throw DimensionError("JointChannel: matrix is " +
                             std::to_string(gamma_.d_out()) + "x" +
                             std::to_string(gamma_.d_in()) + ", expected " +
                             std::to_string(d) + "x" + std::to_string(d));
    }
}

JointChannel JointChannel::swap(Index d) {
    const Index n = d * d;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Index s = 0; s < d; ++s)
        for (Index e = 0; e < d; ++e) m(e * d + s, s * d + e) = 1.0;
    return JointChannel(StochMatrix(std::move(m)), d, d);
}

JointChannel JointChannel::cnot() {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    for (Index s = 0; s < 2; ++s)
        for (Index e = 0; e < 2; ++e) m((s ^ e) * 2 + e, s * 2 + e) = 1.0;
    return JointChannel(StochMatrix(std::move(m)), 2, 2);
}

JointChannel JointChannel::identity(Index d_system, Index d_env) {
    return JointChannel(StochMatrix::identity(d_system * d_env), d_system, d_env);
}

Eigen::MatrixXd JointChannel::apply_raw(const Eigen::MatrixXd& joint) const {
    if (joint.rows() != d_system_ || joint.cols() != d_env_) {
        throw DimensionError("JointChannel::apply_raw: joint state has wrong shape");
    }
    Eigen::VectorXd out = gamma_.values() * vec_system_major(joint);
    return unvec_system_major(out, d_system_, d_env_);
}

JointDist JointChannel::apply(const JointDist& P) const {
    return JointDist(apply_raw(P.values()));
}

ProcessMap::ProcessMap(std::vector<Eigen::VectorXd> basis_outputs, ProbVec marginal,
                       MassCheck check)
    : basis_outputs_(std::move(basis_outputs)),
      marginal_(std::move(marginal)),
      check_(check) {
    const Index d = marginal_.dim();
    if (static_cast<Index>(basis_outputs_.size()) != d * d) {
        throw DimensionError("ProcessMap: expected d^2 basis outputs");
    }
    for (Index j = 0; j < d; ++j) {
        for (Index k = 0; k < d; ++k) {
            Eigen::VectorXd& out = basis_outputs_[j * d + k];
            if (out.size() != d) {
                throw DimensionError("ProcessMap: basis output has wrong dimension");
            }
            for (Index a = 0; a < d; ++a) {
                if (out[a] < 0.0) {
                    if (out[a] < -tol::kNegClamp) {
                        throw InvalidDistribution("ProcessMap: negative basis output entry");
                    }
                    out[a] = 0.0;
                }
            }
            if (check_ == MassCheck::Strict) {
                const double mass = sequential_sum(out.data(), out.size());
                if (std::abs(mass - marginal_[k]) > tol::kSumOne) {
                    throw InvalidDistribution(
                        "ProcessMap: cell (" + std::to_string(j) + "," +
                        std::to_string(k) + ") has mass " + std::to_string(mass) +
                        ", expected marginal " + std::to_string(marginal_[k]));
                }
            }
        }
    }
}

const Eigen::VectorXd& ProcessMap::basis_output(Index j, Index k) const {
    const Index d = d_system();
    if (j < 0 || j >= d || k < 0 || k >= d) {
        throw DimensionError("ProcessMap::basis_output: indices out of range");
    }
    return basis_outputs_[j * d + k];
}

namespace {

// Output map with the environment conditioned on system outcome s_cond:
// column s is the channel output for basis input s against that fixed
// environment state.
Eigen::MatrixXd conditioned_output_map(const JointChannel& gamma,
                                       const JointDist& P, Index s_cond) {
    const Index dS = gamma.d_system();
    const ProbVec env = conditional_env_given_system(P, s_cond);
    Eigen::MatrixXd map(dS, dS);
    for (Index s = 0; s < dS; ++s) {
        Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(dS, gamma.d_env());
        joint.row(s) = env.values().transpose();
        map.col(s) = system_mass(gamma.apply_raw(joint));
    }
    return map;
}

}  // namespace

StochMatrix naive_map(const JointChannel& gamma, const JointDist& P) {
    const Index dS = gamma.d_system();
    if (P.d_system() != dS || P.d_env() != gamma.d_env()) {
        throw DimensionError("naive_map: joint state does not match channel");
    }
    Eigen::MatrixXd m(dS, dS);
    for (Index s = 0; s < dS; ++s) {
        const ProbVec env = conditional_env_given_system(P, s);
        Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(dS, gamma.d_env());
        joint.row(s) = env.values().transpose();
        m.col(s) = system_mass(gamma.apply_raw(joint));
    }
    return StochMatrix(std::move(m));
}

double conditional_map_discrepancy(const JointChannel& gamma, const JointDist& P) {
    const Index dS = gamma.d_system();
    if (P.d_system() != dS || P.d_env() != gamma.d_env()) {
        throw DimensionError("conditional_map_discrepancy: joint state does not match channel");
    }
    std::vector<Eigen::MatrixXd> maps;
    maps.reserve(dS);
    for (Index s = 0; s < dS; ++s) {
        maps.push_back(conditioned_output_map(gamma, P, s));
    }
    double worst = 0.0;
    for (Index a = 0; a < dS; ++a) {
        for (Index b = a + 1; b < dS; ++b) {
            // Induced L1 norm: max column-wise L1 difference.
            const Eigen::MatrixXd diff = (maps[a] - maps[b]).cwiseAbs();
            worst = std::max(worst, diff.colwise().sum().maxCoeff());
        }
    }
    return worst;
}

StochMatrix product_case_map(const JointChannel& gamma, const ProbVec& t) {
    if (t.dim() != gamma.d_env()) {
        throw DimensionError("product_case_map: environment state has dimension " +
                             std::to_string(t.dim()) + ", channel expects " +
                             std::to_string(gamma.d_env()));
    }
    const Index dS = gamma.d_system();
    Eigen::MatrixXd m(dS, dS);
    for (Index s = 0; s < dS; ++s) {
        Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(dS, gamma.d_env());
        joint.row(s) = t.values().transpose();
        m.col(s) = system_mass(gamma.apply_raw(joint));
    }
    return StochMatrix(std::move(m));
}

JointDist apply_preparation(const SubStochMatrix& xi, const JointDist& P) {
    if (xi.d_in() != P.d_system() || xi.d_out() != P.d_system()) {
        throw DimensionError("apply_preparation: operation does not act on the system dimension");
    }
    return JointDist::with_mass(xi.values() * P.values());
}

ProbVec process_output(const JointChannel& gamma, const JointDist& P,
                       const StochMatrix& xi) {
    if (P.d_system() != gamma.d_system() || P.d_env() != gamma.d_env()) {
        throw DimensionError("process_output: joint state does not match channel");
    }
    const JointDist prepared = apply_preparation(SubStochMatrix(xi), P);
    return ProbVec(system_mass(gamma.apply_raw(prepared.values())));
}

ProcessMap theta_from_basis(const JointChannel& gamma, const JointDist& P) {
    if (P.d_system() != gamma.d_system() || P.d_env() != gamma.d_env()) {
        throw DimensionError("theta_from_basis: joint state does not match channel");
    }
    const Index d = gamma.d_system();
    std::vector<Eigen::VectorXd> outputs;
    outputs.reserve(d * d);
    for (Index j = 0; j < d; ++j) {
        for (Index k = 0; k < d; ++k) {
            // (E_jk x I) P places the mass of system outcome k at system
            // state j; the channel then acts on that sub-normalized state.
            Eigen::MatrixXd prepared = Eigen::MatrixXd::Zero(d, gamma.d_env());
            prepared.row(j) = P.values().row(k);
            outputs.push_back(system_mass(gamma.apply_raw(prepared)));
        }
    }
    return ProcessMap(std::move(outputs), marginal_system(P));
}

ProbVec theta_apply(const ProcessMap& theta, const StochMatrix& xi) {
    const Index d = theta.d_system();
    if (xi.d_in() != d || xi.d_out() != d) {
        throw DimensionError("theta_apply: preparation does not act on the system dimension");
    }
    Eigen::VectorXd q = Eigen::VectorXd::Zero(d);
    for (Index j = 0; j < d; ++j)
        for (Index k = 0; k < d; ++k) q += xi(j, k) * theta.basis_output(j, k);
    if (theta.mass_check() == ProcessMap::MassCheck::Strict) return ProbVec(std::move(q));
    return ProbVec::normalized(std::move(q));
}

}  // namespace corrstoch
