#include "corrstoch/second_law.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace corrstoch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Iteration with the half-lazy map (M + I)/2, which shares the fixed points
// of M, cannot cycle, and from the uniform start converges to the canonical
// stationary vector. Successive-change tolerance 5e-13 bounds the residual
// of M itself by 1e-12.
Eigen::VectorXd damped_iteration(const Eigen::MatrixXd& m, Index max_iters,
                                 double* achieved) {
    const Index n = m.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    double delta = kInf;
    for (Index it = 0; it < max_iters; ++it) {
        Eigen::VectorXd w = 0.5 * (m * v + v);
        delta = (w - v).cwiseAbs().sum();
        v = std::move(w);
        if (delta <= 5e-13) break;
    }
    *achieved = 2.0 * delta;
    return v;
}

}  // namespace

VectorizedPrep vectorize_prep(const StochMatrix& xi, const ProbVec& p) {
    const Index d = p.dim();
    if (xi.d_in() != d || xi.d_out() != d) {
        throw DimensionError("vectorize_prep: preparation does not act on dimension " +
                             std::to_string(d));
    }
    Eigen::VectorXd v(d * d);
    for (Index j = 0; j < d; ++j)
        for (Index k = 0; k < d; ++k) v[j * d + k] = xi(j, k) * p[k];
    return VectorizedPrep{ProbVec(std::move(v)), xi, p};
}

LiftedMap lift_theta(const ProcessMap& theta) {
    const Index d = theta.d_system();
    const double inv_d = 1.0 / static_cast<double>(d);
    Eigen::MatrixXd m(d * d, d * d);
    std::vector<Index> flagged;
    for (Index j = 0; j < d; ++j) {
        for (Index k = 0; k < d; ++k) {
            const Index col = j * d + k;
            const Eigen::VectorXd& out = theta.basis_output(j, k);
            const double mass = sequential_sum(out.data(), out.size());
            if (mass == 0.0) {
                // Zero-marginal cell: no valid preparation puts weight on
                // this column, so complete it with the uniform distribution.
                m.col(col).setConstant(inv_d * inv_d);
                flagged.push_back(col);
                continue;
            }
            for (Index a = 0; a < d; ++a) {
                const double nu_a = out[a] / mass;
                for (Index b = 0; b < d; ++b) m(a * d + b, col) = nu_a * inv_d;
            }
        }
    }
    return LiftedMap{StochMatrix(std::move(m)), std::move(flagged), d};
}

FixedPoint fixed_point(const StochMatrix& m) {
    if (m.d_in() != m.d_out()) {
        throw DimensionError("fixed_point: matrix must be square");
    }
    const Index n = m.d_in();
    const Eigen::MatrixXd a = m.values() - Eigen::MatrixXd::Identity(n, n);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > 1e-10 * std::max(1.0, smax)) ++rank;
    }
    const Index nullity = n - rank;
    const bool unique = nullity <= 1;

    Eigen::VectorXd v;
    double iter_residual = 0.0;
    bool solved = false;
    if (unique && n <= 64) {
        // Direct solve on the simplex: stationarity rows plus normalization.
        Eigen::MatrixXd sys(n + 1, n);
        sys.topRows(n) = a;
        sys.row(n).setOnes();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
        rhs[n] = 1.0;
        v = sys.colPivHouseholderQr().solve(rhs);
        solved = v.minCoeff() >= -1e-9;
    }
    if (!solved) {
        v = damped_iteration(m.values(), 1000000, &iter_residual);
    }

    ProbVec eps = ProbVec::normalized(std::move(v));
    const double residual = (m.values() * eps.values() - eps.values()).cwiseAbs().sum();
    if (residual > 1e-10) {
        throw ConvergenceError("fixed_point: iteration stalled, residual achieved " +
                               std::to_string(residual));
    }
    return FixedPoint{std::move(eps), residual, unique};
}

FixedPoint fixed_point(const LiftedMap& lifted) {
    return fixed_point(lifted.matrix);
}

namespace {

// rhs = -sum_i (q_i - p_i) ln(eps_i) under the degenerate-support
// conventions: an index where q and p agree contributes nothing even when
// eps vanishes there; an index where they differ while eps vanishes makes
// the sum infinite with the sign of the difference. When both signs of
// infinity occur the divergence from eps is infinite on both sides and the
// bound is vacuous; we report -infinity.
double bound_rhs(const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                 const ProbVec& eps, bool* degenerate) {
    double finite = 0.0;
    bool pos_inf = false, neg_inf = false;
    for (Index i = 0; i < q.size(); ++i) {
        const double diff = q[i] - p[i];
        if (diff == 0.0) continue;
        if (eps[i] > 0.0) {
            finite -= diff * std::log(eps[i]);
        } else {
            *degenerate = true;
            (diff > 0.0 ? pos_inf : neg_inf) = true;
        }
    }
    if (neg_inf) return -kInf;
    if (pos_inf) return kInf;
    return finite;
}

SecondLawReport make_report(double lhs, const Eigen::VectorXd& q_up,
                            const Eigen::VectorXd& xi_up, FixedPoint fp) {
    bool degenerate = false;
    const double rhs = bound_rhs(q_up, xi_up, fp.epsilon, &degenerate);
    const double slack = lhs - rhs;
    const bool satisfied = slack >= -kSlackTolerance;
    return SecondLawReport{lhs,        rhs,
                           slack,      satisfied,
                           degenerate, std::move(fp.epsilon),
                           fp.residual, fp.unique};
}

}  // namespace

SecondLawReport second_law_check(const ProcessMap& theta, const StochMatrix& xi) {
    const Index d = theta.d_system();
    const VectorizedPrep prep = vectorize_prep(xi, theta.marginal());
    const ProbVec q = theta_apply(theta, xi);

    const double inv_d = 1.0 / static_cast<double>(d);
    Eigen::VectorXd q_up_raw(d * d);
    for (Index a = 0; a < d; ++a)
        for (Index b = 0; b < d; ++b) q_up_raw[a * d + b] = q[a] * inv_d;
    const ProbVec q_up(q_up_raw);

    FixedPoint fp = fixed_point(lift_theta(theta));
    const double lhs = entropy(q_up) - entropy(prep.entries);
    return make_report(lhs, q_up.values(), prep.entries.values(), std::move(fp));
}

SecondLawReport spohn_check(const StochMatrix& lambda, const ProbVec& p) {
    if (lambda.d_in() != lambda.d_out()) {
        throw DimensionError("spohn_check: map must be square");
    }
    if (lambda.d_in() != p.dim()) {
        throw DimensionError("spohn_check: state dimension does not match map");
    }
    FixedPoint fp = fixed_point(lambda);
    const ProbVec q = apply(lambda, p);
    const double lhs = entropy(q) - entropy(p);
    return make_report(lhs, q.values(), p.values(), std::move(fp));
}

double kl_contractivity_check(const StochMatrix& m, const ProbVec& p, const ProbVec& q) {
    if (m.d_in() != p.dim() || p.dim() != q.dim()) {
        throw DimensionError("kl_contractivity_check: dimension mismatch");
    }
    const double before = kl(p, q);
    if (std::isinf(before)) return kInf;
    return before - kl(apply(m, p), apply(m, q));
}

}  // namespace corrstoch
