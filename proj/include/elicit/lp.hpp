#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "elicit/types.hpp"

namespace elicit {

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    Vec x;
    double objective = 0.0;
};

namespace detail {

/// Dense two-phase primal simplex on standard form: min c^T x, A x = b, x >= 0.
/// Bland's rule throughout; sized for the handful-of-variables problems that
/// arise from simplex-polytope feasibility queries.
class StandardSimplex {
  public:
    StandardSimplex(Mat a, Vec b, Vec c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
        for (Eigen::Index i = 0; i < b_.size(); ++i) {
            if (b_[i] < 0) {
                a_.row(i) = -a_.row(i);
                b_[i] = -b_[i];
            }
        }
    }

    LpResult solve() {
        const Eigen::Index m = a_.rows(), n = a_.cols();
        // Phase 1 tableau with artificial variables.
        Mat t(m, n + m);
        t.leftCols(n) = a_;
        t.rightCols(m) = Mat::Identity(m, m);
        Vec rhs = b_;
        std::vector<Eigen::Index> basis(m);
        for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

        Vec phase1_cost = Vec::Zero(n + m);
        phase1_cost.tail(m).setOnes();
        if (!run(t, rhs, basis, phase1_cost)) return {LpResult::Status::Unbounded, {}, 0.0};
        double art = 0;
        for (Eigen::Index i = 0; i < m; ++i)
            if (basis[i] >= n) art += rhs[i];
        if (art > 1e-8) return {LpResult::Status::Infeasible, {}, 0.0};

        // Pivot leftover artificials out of the basis when possible.
        for (Eigen::Index i = 0; i < m; ++i) {
            if (basis[i] < n) continue;
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < n; ++j)
                if (std::abs(t(i, j)) > 1e-9) {
                    enter = j;
                    break;
                }
            if (enter >= 0) pivot(t, rhs, basis, i, enter);
            // Otherwise the row is redundant; the artificial stays at zero.
        }

        Vec phase2_cost = Vec::Zero(n + m);
        phase2_cost.head(n) = c_;
        // Forbid re-entry of artificials.
        for (Eigen::Index j = n; j < n + m; ++j) phase2_cost[j] = 1e30;
        if (!run(t, rhs, basis, phase2_cost)) return {LpResult::Status::Unbounded, {}, 0.0};

        Vec x = Vec::Zero(n);
        for (Eigen::Index i = 0; i < m; ++i)
            if (basis[i] < n) x[basis[i]] = rhs[i];
        return {LpResult::Status::Optimal, x, c_.dot(x)};
    }

  private:
    static void pivot(Mat& t, Vec& rhs, std::vector<Eigen::Index>& basis, Eigen::Index row,
                      Eigen::Index col) {
        const double pv = t(row, col);
        t.row(row) /= pv;
        rhs[row] /= pv;
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
            if (i == row) continue;
            const double f = t(i, col);
            if (f == 0.0) continue;
            t.row(i) -= f * t.row(row);
            rhs[i] -= f * rhs[row];
        }
        basis[row] = col;
    }

    // Returns false on unboundedness.
    static bool run(Mat& t, Vec& rhs, std::vector<Eigen::Index>& basis, const Vec& cost) {
        const Eigen::Index m = t.rows(), nn = t.cols();
        for (long iter = 0; iter < 20000; ++iter) {
            Vec y(m);
            for (Eigen::Index i = 0; i < m; ++i) y[i] = cost[basis[i]];
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < nn; ++j) {
                const double reduced = cost[j] - y.dot(t.col(j));
                if (reduced < -1e-9) {
                    enter = j;  // Bland: first improving column
                    break;
                }
            }
            if (enter < 0) return true;
            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m; ++i) {
                if (t(i, enter) > 1e-11) {
                    const double ratio = rhs[i] / t(i, enter);
                    if (ratio < best - 1e-12 ||
                        (ratio < best + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false;
            pivot(t, rhs, basis, leave, enter);
        }
        return true;  // iteration cap; treat current vertex as final
    }

    Mat a_;
    Vec b_;
    Vec c_;
};

}  // namespace detail

/// General-form LP: min c^T x with A_eq x = b_eq, A_ub x <= b_ub and
/// per-variable sign freedom. Free variables are split internally.
struct LpProblem {
    Vec c;
    Mat a_eq;  // may have zero rows
    Vec b_eq;
    Mat a_ub;
    Vec b_ub;
    std::vector<bool> free_var;  // defaults to all nonnegative
};

inline LpResult solve_lp(const LpProblem& prob) {
    const Eigen::Index n = prob.c.size();
    const Eigen::Index me = prob.a_eq.rows(), mu = prob.a_ub.rows();
    Eigen::Index cols = 0;
    std::vector<Eigen::Index> pos(n), neg(n, -1);
    for (Eigen::Index j = 0; j < n; ++j) {
        pos[j] = cols++;
        if (j < static_cast<Eigen::Index>(prob.free_var.size()) && prob.free_var[j])
            neg[j] = cols++;
    }
    const Eigen::Index slack0 = cols;
    cols += mu;

    Mat a = Mat::Zero(me + mu, cols);
    Vec b(me + mu), c = Vec::Zero(cols);
    for (Eigen::Index j = 0; j < n; ++j) {
        c[pos[j]] = prob.c[j];
        if (neg[j] >= 0) c[neg[j]] = -prob.c[j];
        for (Eigen::Index i = 0; i < me; ++i) {
            a(i, pos[j]) = prob.a_eq(i, j);
            if (neg[j] >= 0) a(i, neg[j]) = -prob.a_eq(i, j);
        }
        for (Eigen::Index i = 0; i < mu; ++i) {
            a(me + i, pos[j]) = prob.a_ub(i, j);
            if (neg[j] >= 0) a(me + i, neg[j]) = -prob.a_ub(i, j);
        }
    }
    for (Eigen::Index i = 0; i < me; ++i) b[i] = prob.b_eq[i];
    for (Eigen::Index i = 0; i < mu; ++i) {
        a(me + i, slack0 + i) = 1.0;
        b[me + i] = prob.b_ub[i];
    }

    LpResult raw = detail::StandardSimplex(a, b, c).solve();
    if (raw.status != LpResult::Status::Optimal) return raw;
    Vec x(n);
    for (Eigen::Index j = 0; j < n; ++j)
        x[j] = raw.x[pos[j]] - (neg[j] >= 0 ? raw.x[neg[j]] : 0.0);
    return {LpResult::Status::Optimal, x, raw.objective};
}

/// One linear constraint <p, w> (= or <=) offset over the simplex.
struct LinearConstraint {
    Vec normal;
    double offset = 0.0;
};

/// Searches the simplex for a distribution meeting all equalities and
/// clearing every inequality strictly, by maximizing the minimum slack.
/// Inequalities are <p, w> <= offset; positivity must be passed explicitly
/// (normal = -e_i, offset = 0) when relative interiority is wanted.
inline std::optional<Distribution> lp_feasible_strict(
    int n, const std::vector<LinearConstraint>& equalities,
    const std::vector<LinearConstraint>& inequalities, double strictness_margin) {
    // Variables: p_1..p_n (>= 0), t (free). Maximize t subject to
    // <p, w_i> + t <= offset_i for each strict constraint.
    const Eigen::Index nv = n + 1;
    LpProblem prob;
    prob.c = Vec::Zero(nv);
    prob.c[n] = -1.0;  // max t
    prob.free_var.assign(nv, false);
    prob.free_var[n] = true;

    const Eigen::Index me = 1 + static_cast<Eigen::Index>(equalities.size());
    prob.a_eq = Mat::Zero(me, nv);
    prob.b_eq = Vec::Zero(me);
    prob.a_eq.row(0).head(n).setOnes();
    prob.b_eq[0] = 1.0;
    for (size_t i = 0; i < equalities.size(); ++i) {
        prob.a_eq.row(1 + i).head(n) = equalities[i].normal;
        prob.b_eq[1 + i] = equalities[i].offset;
    }
    const Eigen::Index mu = static_cast<Eigen::Index>(inequalities.size());
    prob.a_ub = Mat::Zero(mu, nv);
    prob.b_ub = Vec::Zero(mu);
    for (Eigen::Index i = 0; i < mu; ++i) {
        prob.a_ub.row(i).head(n) = inequalities[i].normal;
        prob.a_ub(i, n) = 1.0;
        prob.b_ub[i] = inequalities[i].offset;
    }

    LpResult res = solve_lp(prob);
    if (res.status != LpResult::Status::Optimal) return std::nullopt;
    if (-res.objective < strictness_margin) return std::nullopt;
    Vec p = res.x.head(n);
    p = p.cwiseMax(0.0);
    return Distribution(p);
}

}  // namespace elicit
