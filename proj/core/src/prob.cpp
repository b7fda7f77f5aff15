#include "corrstoch/prob.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace corrstoch {

double sequential_sum(const double* data, Index n) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += data[i];
    return s;
}

namespace {

// Clamps drift-sized negatives to zero in place; throws on anything worse.
void clamp_nonnegative(Eigen::VectorXd& v, const char* what) {
    for (Index i = 0; i < v.size(); ++i) {
        if (v[i] < 0.0) {
            if (v[i] < -tol::kNegClamp) {
                throw InvalidDistribution(std::string(what) + ": entry " +
                                          std::to_string(i) + " is " +
                                          std::to_string(v[i]) + " < 0");
            }
            v[i] = 0.0;
        }
    }
}

void clamp_nonnegative(Eigen::MatrixXd& m, const char* what) {
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (m(i, j) < 0.0) {
                if (m(i, j) < -tol::kNegClamp) {
                    throw InvalidDistribution(
                        std::string(what) + ": entry (" + std::to_string(i) +
                        "," + std::to_string(j) + ") is " +
                        std::to_string(m(i, j)) + " < 0");
                }
                m(i, j) = 0.0;
            }
        }
    }
}

}  // namespace

ProbVec::ProbVec(Eigen::VectorXd entries) : v_(std::move(entries)) {
    if (v_.size() == 0) throw InvalidDistribution("ProbVec: empty vector");
    clamp_nonnegative(v_, "ProbVec");
    const double sum = sequential_sum(v_.data(), v_.size());
    if (std::abs(sum - 1.0) > tol::kSumOne) {
        throw InvalidDistribution("ProbVec: entries sum to " +
                                  std::to_string(sum) + ", expected 1");
    }
    if (sum != 1.0) v_ /= sum;
}

ProbVec::ProbVec(std::initializer_list<double> entries)
    : ProbVec(Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
          entries.begin(), static_cast<Index>(entries.size())))) {}

ProbVec ProbVec::normalized(Eigen::VectorXd entries) {
    if (entries.size() == 0) throw InvalidDistribution("ProbVec: empty vector");
    clamp_nonnegative(entries, "ProbVec");
    const double sum = sequential_sum(entries.data(), entries.size());
    if (sum <= 0.0) {
        throw InvalidDistribution("ProbVec: cannot normalize zero mass");
    }
    if (sum != 1.0) entries /= sum;
    return ProbVec(std::move(entries), Raw{});
}

ProbVec ProbVec::uniform(Index dim) {
    return ProbVec(Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim)));
}

ProbVec ProbVec::point_mass(Index dim, Index i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v[i] = 1.0;
    return ProbVec(std::move(v), Raw{});
}

StochMatrix::StochMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() == 0 || m_.cols() == 0) {
        throw InvalidDistribution("StochMatrix: empty matrix");
    }
    clamp_nonnegative(m_, "StochMatrix");
    for (Index j = 0; j < m_.cols(); ++j) {
        Eigen::VectorXd col = m_.col(j);
        const double sum = sequential_sum(col.data(), col.size());
        if (std::abs(sum - 1.0) > tol::kSumOne) {
            throw InvalidDistribution("StochMatrix: column " +
                                      std::to_string(j) + " sums to " +
                                      std::to_string(sum) + ", expected 1");
        }
        if (sum != 1.0) m_.col(j) /= sum;
    }
}

StochMatrix StochMatrix::identity(Index d) {
    return StochMatrix(Eigen::MatrixXd::Identity(d, d));
}

StochMatrix StochMatrix::cyclic_shift(Index d) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (Index j = 0; j < d; ++j) m((j + 1) % d, j) = 1.0;
    return StochMatrix(std::move(m));
}

StochMatrix StochMatrix::constant_map(const ProbVec& q, Index d_in) {
    Eigen::MatrixXd m(q.dim(), d_in);
    for (Index j = 0; j < d_in; ++j) m.col(j) = q.values();
    return StochMatrix(std::move(m));
}

ProbVec StochMatrix::column(Index j) const {
    return ProbVec(m_.col(j));
}

SubStochMatrix::SubStochMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() == 0 || m_.cols() == 0) {
        throw InvalidDistribution("SubStochMatrix: empty matrix");
    }
    clamp_nonnegative(m_, "SubStochMatrix");
    for (Index j = 0; j < m_.cols(); ++j) {
        Eigen::VectorXd col = m_.col(j);
        const double sum = sequential_sum(col.data(), col.size());
        if (sum > 1.0 + tol::kSumOne) {
            throw InvalidDistribution("SubStochMatrix: column " +
                                      std::to_string(j) + " sums to " +
                                      std::to_string(sum) + " > 1");
        }
    }
}

SubStochMatrix SubStochMatrix::matrix_unit(Index d, Index j, Index k) {
    if (j < 0 || j >= d || k < 0 || k >= d) {
        throw DimensionError("matrix_unit: indices out of range");
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    m(j, k) = 1.0;
    return SubStochMatrix(std::move(m));
}

JointDist::JointDist(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() == 0 || m_.cols() == 0) {
        throw InvalidDistribution("JointDist: empty matrix");
    }
    clamp_nonnegative(m_, "JointDist");
    const double sum = sequential_sum(m_.data(), m_.size());
    if (std::abs(sum - 1.0) > tol::kSumOne) {
        throw InvalidDistribution("JointDist: total mass " +
                                  std::to_string(sum) + ", expected 1");
    }
    if (sum != 1.0) m_ /= sum;
}

JointDist JointDist::with_mass(Eigen::MatrixXd entries) {
    if (entries.rows() == 0 || entries.cols() == 0) {
        throw InvalidDistribution("JointDist: empty matrix");
    }
    clamp_nonnegative(entries, "JointDist");
    const double sum = sequential_sum(entries.data(), entries.size());
    if (sum > 1.0 + tol::kSumOne) {
        throw InvalidDistribution("JointDist: total mass " +
                                  std::to_string(sum) + " > 1");
    }
    return JointDist(std::move(entries), Raw{});
}

JointDist JointDist::product(const ProbVec& p, const ProbVec& t) {
    return JointDist(p.values() * t.values().transpose());
}

JointDist JointDist::perfectly_correlated(const ProbVec& p) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p.dim(), p.dim());
    for (Index s = 0; s < p.dim(); ++s) m(s, s) = p[s];
    return JointDist(std::move(m));
}

double JointDist::total_mass() const {
    return sequential_sum(m_.data(), m_.size());
}

bool JointDist::is_normalized() const {
    return std::abs(total_mass() - 1.0) <= tol::kSumOne;
}

ProbVec apply(const StochMatrix& m, const ProbVec& p) {
    if (m.d_in() != p.dim()) {
        throw DimensionError("apply: matrix expects dimension " +
                             std::to_string(m.d_in()) + ", state has " +
                             std::to_string(p.dim()));
    }
    return ProbVec(m.values() * p.values());
}

StochMatrix infer_stochastic_map(const std::vector<ProbVec>& inputs,
                                 const std::vector<ProbVec>& outputs) {
    if (inputs.empty() || inputs.size() != outputs.size()) {
        throw DimensionError("infer_stochastic_map: need matching nonempty input/output lists");
    }
    const Index d_in = inputs.front().dim();
    const Index d_out = outputs.front().dim();
    if (static_cast<Index>(inputs.size()) != d_in) {
        throw DimensionError("infer_stochastic_map: need exactly d linearly independent inputs");
    }
    Eigen::MatrixXd P(d_in, d_in);
    Eigen::MatrixXd Q(d_out, d_in);
    for (Index j = 0; j < d_in; ++j) {
        if (inputs[j].dim() != d_in || outputs[j].dim() != d_out) {
            throw DimensionError("infer_stochastic_map: inconsistent dimensions");
        }
        P.col(j) = inputs[j].values();
        Q.col(j) = outputs[j].values();
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    if (sv.size() == 0 || sv[sv.size() - 1] <= 1e-10 * std::max(1.0, smax)) {
        throw RankDeficientError("infer_stochastic_map: inputs are linearly dependent");
    }

    // Solve M P = Q as P^T M^T = Q^T.
    Eigen::MatrixXd Mt = P.transpose().fullPivLu().solve(Q.transpose());
    try {
        return StochMatrix(Mt.transpose());
    } catch (const InvalidDistribution& e) {
        throw NotStochasticError(
            std::string("infer_stochastic_map: fitted map is not stochastic; the observed "
                        "dynamics is not describable by a stochastic map (") +
            e.what() + ")");
    }
}

ProbVec marginal_system(const JointDist& P) {
    return ProbVec(P.values().rowwise().sum());
}

ProbVec marginal_env(const JointDist& P) {
    return ProbVec(P.values().colwise().sum().transpose());
}

ProbVec conditional_env_given_system(const JointDist& P, Index s) {
    if (s < 0 || s >= P.d_system()) {
        throw DimensionError("conditional_env_given_system: index out of range");
    }
    Eigen::VectorXd row = P.values().row(s).transpose();
    const double mass = sequential_sum(row.data(), row.size());
    if (mass <= 0.0) {
        throw ZeroMarginalError("conditional_env_given_system: system outcome " +
                                std::to_string(s) + " has zero probability");
    }
    return ProbVec::normalized(std::move(row));
}

bool is_product(const JointDist& P, double tolerance) {
    const Eigen::VectorXd p = P.values().rowwise().sum();
    const Eigen::VectorXd t = P.values().colwise().sum().transpose();
    return (P.values() - p * t.transpose()).cwiseAbs().maxCoeff() <= tolerance;
}

double entropy(const ProbVec& p) {
    double h = 0.0;
    for (Index i = 0; i < p.dim(); ++i) {
        const double x = p[i];
        if (x > 0.0) h -= x * std::log(x);
    }
    return h;
}

double kl(const ProbVec& p, const ProbVec& q) {
    if (p.dim() != q.dim()) {
        throw DimensionError("kl: dimension mismatch");
    }
    double d = 0.0;
    for (Index i = 0; i < p.dim(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
        d += p[i] * std::log(p[i] / q[i]);
    }
    return d;
}

double l1_distance(const ProbVec& a, const ProbVec& b) {
    if (a.dim() != b.dim()) throw DimensionError("l1_distance: dimension mismatch");
    return (a.values() - b.values()).cwiseAbs().sum();
}

double linf_distance(const ProbVec& a, const ProbVec& b) {
    if (a.dim() != b.dim()) throw DimensionError("linf_distance: dimension mismatch");
    return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace corrstoch
