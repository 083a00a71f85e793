#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "elicit/geometry.hpp"
#include "elicit/types.hpp"

namespace elicit {

enum class Smoothness { differentiable, strongly_convex, nonsmooth_demo };

struct OptimalReportSet {
    Vec representative;
    bool is_unique = true;
    std::optional<std::pair<double, double>> interval;  // d = 1 flat argmin
    double opt_value = 0.0;
};

struct OptimizerConfig {
    double grad_tol = 1e-9;
    long max_iters = 100000;
    double flat_tol = 1e-10;
    double multistart_radius = 10.0;
    int multistarts = 8;
    unsigned seed = 7;
};

/// Surrogate loss oracle: convex componentwise, L: R^d -> R^n with Jacobian.
class SurrogateLoss {
  public:
    virtual ~SurrogateLoss() = default;
    virtual int d() const = 0;
    virtual int n() const = 0;
    virtual Vec value(const Vec& u) const = 0;
    virtual Mat jacobian(const Vec& u) const = 0;  // n x d
    virtual Smoothness smoothness() const { return Smoothness::differentiable; }
    virtual double convexity_modulus() const { return 0.0; }
    virtual bool differentiable_at(const Vec&) const { return true; }
    virtual std::optional<OptimalReportSet> analytic_minimizer(const Distribution&) const {
        return std::nullopt;
    }
    virtual std::string name() const = 0;
};

inline double expected_loss(const SurrogateLoss& s, const Distribution& p, const Vec& u) {
    return p.probs().dot(s.value(u));
}

inline Vec expected_gradient(const SurrogateLoss& s, const Distribution& p, const Vec& u) {
    return s.jacobian(u).transpose() * p.probs();
}

namespace detail {

inline Mat fd_hessian(const SurrogateLoss& s, const Distribution& p, const Vec& u,
                      double step = 1e-5) {
    const int d = s.d();
    Mat h(d, d);
    for (int j = 0; j < d; ++j) {
        Vec up = u, um = u;
        up[j] += step;
        um[j] -= step;
        h.col(j) = (expected_gradient(s, p, up) - expected_gradient(s, p, um)) / (2 * step);
    }
    return 0.5 * (h + h.transpose());
}

/// Damped Newton with Armijo backtracking from a single start point.
/// Returns the best point found; convergence is judged by the caller.
inline Vec newton_descend(const SurrogateLoss& s, const Distribution& p, Vec u,
                          const OptimizerConfig& cfg) {
    const int d = s.d();
    for (long it = 0; it < cfg.max_iters; ++it) {
        Vec g = expected_gradient(s, p, u);
        if (g.norm() <= cfg.grad_tol) return u;
        Mat h = fd_hessian(s, p, u);
        std::vector<Vec> directions;
        Eigen::LDLT<Mat> ldlt(h + 1e-10 * Mat::Identity(d, d));
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            Vec nstep = -ldlt.solve(g);
            if (nstep.allFinite() && g.dot(nstep) < 0 && nstep.norm() < 1e6)
                directions.push_back(nstep);
        }
        directions.push_back(-g);
        const double f0 = expected_loss(s, p, u);
        bool moved = false;
        for (const Vec& step : directions) {
            const double slope = g.dot(step);
            double t = 1.0;
            for (int ls = 0; ls < 60 && !moved; ++ls) {
                if (expected_loss(s, p, u + t * step) <= f0 + 1e-4 * t * slope) {
                    u += t * step;
                    moved = true;
                }
                t *= 0.5;
            }
            if (moved) break;
        }
        if (!moved) return u;  // stalled; caller restarts
    }
    return u;
}

/// Recover the flat argmin segment around u* for d = 1 by doubling
/// expansion then bisection on the loss level.
inline std::pair<double, double> flat_interval_1d(const SurrogateLoss& s, const Distribution& p,
                                                  double ustar, double opt, double flat_tol) {
    // A point counts as inside when the loss sits at the optimum and the
    // gradient vanishes; the gradient grows linearly off a quadratic bottom
    // while the loss grows only quadratically, so this pins edges sharply.
    auto inside = [&](double x) {
        Vec u(1);
        u[0] = x;
        return expected_loss(s, p, u) <= opt + flat_tol &&
               std::abs(expected_gradient(s, p, u)[0]) <= 2e-9;
    };
    auto edge = [&](double dir) {
        double step = 1e-6, last_in = ustar;
        while (step < 1e6 && inside(ustar + dir * step)) {
            last_in = ustar + dir * step;
            step *= 2;
        }
        double lo = last_in, hi = ustar + dir * step;
        for (int i = 0; i < 80; ++i) {
            double mid = 0.5 * (lo + hi);
            (inside(mid) ? lo : hi) = mid;
        }
        return lo;
    };
    double right = edge(+1.0), left = edge(-1.0);
    return {left, right};
}

}  // namespace detail

/// Minimize <p, L(u)> over R^d. Differentiable losses run damped Newton with
/// multi-start; nonsmooth built-ins must provide their analytic argmin.
inline OptimalReportSet minimize(const SurrogateLoss& s, const Distribution& p,
                                 const OptimizerConfig& cfg = {}) {
    if (s.smoothness() == Smoothness::nonsmooth_demo) {
        auto a = s.analytic_minimizer(p);
        if (!a) throw NonDifferentiable("nonsmooth loss without analytic argmin");
        return *a;
    }
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(-cfg.multistart_radius, cfg.multistart_radius);
    Vec best = Vec::Zero(s.d());
    best = detail::newton_descend(s, p, best, cfg);
    double best_g = expected_gradient(s, p, best).norm();
    for (int k = 0; k < cfg.multistarts && best_g > cfg.grad_tol; ++k) {
        Vec u0(s.d());
        for (int i = 0; i < s.d(); ++i) u0[i] = unif(rng);
        Vec cand = detail::newton_descend(s, p, u0, cfg);
        double g = expected_gradient(s, p, cand).norm();
        if (g < best_g || (g <= cfg.grad_tol &&
                           expected_loss(s, p, cand) < expected_loss(s, p, best) - 1e-12)) {
            best = cand;
            best_g = g;
        }
    }
    if (best_g > cfg.grad_tol)
        throw NoConvergence("gradient norm " + std::to_string(best_g) + " after multistart");

    OptimalReportSet out;
    out.representative = best;
    out.opt_value = expected_loss(s, p, best);
    if (s.d() == 1) {
        auto [a, b] = detail::flat_interval_1d(s, p, best[0], out.opt_value, cfg.flat_tol);
        if (b - a > 1e-8) {
            out.interval = {a, b};
            out.is_unique = false;
            Vec mid(1);
            mid[0] = 0.5 * (a + b);
            out.representative = mid;
        } else {
            out.interval = {best[0], best[0]};
        }
    }
    return out;
}

/// The level set {p in simplex : jacobian(u)^T p = 0}.
inline SimplexPolytope level_set(const SurrogateLoss& s, const Vec& u, double rank_tol = 1e-9) {
    if (!s.differentiable_at(u))
        throw NonDifferentiable(s.name() + " has a kink at the requested point");
    return simplex_section(LinearMapOnSimplex(s.jacobian(u)), rank_tol);
}

struct ComponentArgminReport {
    int component = 0;
    bool pass = false;
    Vec representative;
    std::string message;
};

/// Necessary-style evidence for compact nonempty componentwise argmins:
/// minimize each component, then require strict loss increase at
/// probe_radius along every axis direction beyond the found argmin.
inline std::vector<ComponentArgminReport> validate_assumption1(const SurrogateLoss& s,
                                                               double probe_radius = 5.0) {
    std::vector<ComponentArgminReport> out;
    for (int y = 0; y < s.n(); ++y) {
        ComponentArgminReport rep;
        rep.component = y;
        try {
            OptimalReportSet m = minimize(s, Distribution::vertex(s.n(), y));
            rep.representative = m.representative;
            double lo = m.representative[0], hi = m.representative[0];
            if (s.d() == 1 && m.interval) {
                lo = m.interval->first;
                hi = m.interval->second;
            }
            bool ok = true;
            for (int i = 0; i < s.d() && ok; ++i) {
                for (double sign : {-1.0, 1.0}) {
                    Vec u = m.representative;
                    if (s.d() == 1) u[0] = (sign > 0 ? hi : lo);
                    u[i] += sign * probe_radius;
                    if (s.value(u)[y] <= m.opt_value + 1e-9) {
                        ok = false;
                        rep.message = "loss not increasing along axis " + std::to_string(i);
                        break;
                    }
                }
            }
            rep.pass = ok;
        } catch (const NoConvergence& e) {
            rep.pass = false;
            rep.message = e.what();
        }
        out.push_back(rep);
    }
    return out;
}

// --------------------------------------------------------------------------
// Built-in losses.

/// d=1, n=2 (outcome 0 is y=+1): L(u)_y = (1 - u y)^2 + |u|. Nonsmooth at 0;
/// carries its closed-form argmin.
class CuspLoss : public SurrogateLoss {
  public:
    int d() const override { return 1; }
    int n() const override { return 2; }
    Smoothness smoothness() const override { return Smoothness::nonsmooth_demo; }
    bool differentiable_at(const Vec& u) const override { return std::abs(u[0]) > 1e-12; }
    Vec value(const Vec& u) const override {
        Vec v(2);
        v[0] = (1 - u[0]) * (1 - u[0]) + std::abs(u[0]);
        v[1] = (1 + u[0]) * (1 + u[0]) + std::abs(u[0]);
        return v;
    }
    Mat jacobian(const Vec& u) const override {
        const double sg = u[0] > 0 ? 1.0 : -1.0;
        Mat j(2, 1);
        j(0, 0) = -2 * (1 - u[0]) + sg;
        j(1, 0) = 2 * (1 + u[0]) + sg;
        return j;
    }
    std::optional<OptimalReportSet> analytic_minimizer(const Distribution& p) const override {
        // <p, L(u)> = 1 - 2(2 p1 - 1) u + u^2 + |u|.
        const double a = 2 * p[0] - 1;
        double ustar = 0.0;
        if (a > 0.5) ustar = a - 0.5;
        if (a < -0.5) ustar = a + 0.5;
        OptimalReportSet out;
        out.representative = Vec::Constant(1, ustar);
        out.interval = {{ustar, ustar}};
        out.opt_value = 1 - 2 * a * ustar + ustar * ustar + std::abs(ustar);
        return out;
    }
    std::string name() const override { return "cusp"; }
};

/// d=1, n=2: L(u)_y = (1 - u y)^2; argmin 2 p1 - 1.
class SmoothCuspLoss : public SurrogateLoss {
  public:
    int d() const override { return 1; }
    int n() const override { return 2; }
    Smoothness smoothness() const override { return Smoothness::strongly_convex; }
    double convexity_modulus() const override { return 2.0; }
    Vec value(const Vec& u) const override {
        Vec v(2);
        v[0] = (1 - u[0]) * (1 - u[0]);
        v[1] = (1 + u[0]) * (1 + u[0]);
        return v;
    }
    Mat jacobian(const Vec& u) const override {
        Mat j(2, 1);
        j(0, 0) = -2 * (1 - u[0]);
        j(1, 0) = 2 * (1 + u[0]);
        return j;
    }
    std::optional<OptimalReportSet> analytic_minimizer(const Distribution& p) const override {
        OptimalReportSet out;
        const double ustar = 2 * p[0] - 1;
        out.representative = Vec::Constant(1, ustar);
        out.interval = {{ustar, ustar}};
        Vec u(1);
        u[0] = ustar;
        out.opt_value = p.probs().dot(value(u));
        return out;
    }
    std::string name() const override { return "smooth_cusp"; }
};

/// d=2, n=3 quadratic triple whose Jacobian drops rank only at the origin.
class CeLoss : public SurrogateLoss {
  public:
    int d() const override { return 2; }
    int n() const override { return 3; }
    Smoothness smoothness() const override { return Smoothness::strongly_convex; }
    double convexity_modulus() const override { return 2.0; }
    Vec value(const Vec& u) const override {
        const double a = u[0], b = u[1];
        Vec v(3);
        v[0] = 2 * a * a + a + 2 * b * b + 2 * b;
        v[1] = a * a + a + b * b + 2 * b;
        v[2] = 3 * a * a - a + b * b - 2 * b;
        return v;
    }
    Mat jacobian(const Vec& u) const override {
        const double a = u[0], b = u[1];
        Mat j(3, 2);
        j << 4 * a + 1, 4 * b + 2, 2 * a + 1, 2 * b + 2, 6 * a - 1, 2 * b - 2;
        return j;
    }
    std::string name() const override { return "ce"; }
};

/// Huber function with unit threshold.
inline double huber(double t) { return std::abs(t) <= 1 ? 0.5 * t * t : std::abs(t) - 0.5; }
inline double huber_grad(double t) { return std::abs(t) <= 1 ? t : (t > 0 ? 1.0 : -1.0); }

/// d=1, n=3 ordinal surrogate: L(x) = (f(x-2), x^2/2, f(x+2)), f Huber.
class OrdinalHuberLoss : public SurrogateLoss {
  public:
    int d() const override { return 1; }
    int n() const override { return 3; }
    Vec value(const Vec& u) const override {
        const double x = u[0];
        Vec v(3);
        v[0] = huber(x - 2);
        v[1] = 0.5 * x * x;
        v[2] = huber(x + 2);
        return v;
    }
    Mat jacobian(const Vec& u) const override {
        const double x = u[0];
        Mat j(3, 1);
        j(0, 0) = huber_grad(x - 2);
        j(1, 0) = x;
        j(2, 0) = huber_grad(x + 2);
        return j;
    }
    std::string name() const override { return "ordinal_huber"; }
};

/// d=1, n=2: L(u) = (f(u-2), f(u+2)), f Huber; flat argmin at even odds.
class HuberPairLoss : public SurrogateLoss {
  public:
    int d() const override { return 1; }
    int n() const override { return 2; }
    Vec value(const Vec& u) const override {
        Vec v(2);
        v[0] = huber(u[0] - 2);
        v[1] = huber(u[0] + 2);
        return v;
    }
    Mat jacobian(const Vec& u) const override {
        Mat j(2, 1);
        j(0, 0) = huber_grad(u[0] - 2);
        j(1, 0) = huber_grad(u[0] + 2);
        return j;
    }
    std::string name() const override { return "huber_pair"; }
};

/// d=n-1 quadratic with <p, L(u)> = sum_j p_j (u_j-1)^2 + (1-p_j) u_j^2;
/// unique argmin (p_1, ..., p_{n-1}).
class UniversalLoss : public SurrogateLoss {
  public:
    explicit UniversalLoss(int outcomes) : n_(outcomes) {
        if (outcomes < 2) throw std::invalid_argument("universal loss needs n >= 2");
    }
    int d() const override { return n_ - 1; }
    int n() const override { return n_; }
    Smoothness smoothness() const override { return Smoothness::strongly_convex; }
    double convexity_modulus() const override { return 2.0; }
    Vec value(const Vec& u) const override {
        const double ss = u.squaredNorm();
        Vec v = Vec::Constant(n_, ss);
        for (int y = 0; y < n_ - 1; ++y) v[y] += 1.0 - 2.0 * u[y];
        return v;
    }
    Mat jacobian(const Vec& u) const override {
        Mat j(n_, n_ - 1);
        for (int y = 0; y < n_; ++y) {
            j.row(y) = 2.0 * u.transpose();
            if (y < n_ - 1) j(y, y) -= 2.0;
        }
        return j;
    }
    std::optional<OptimalReportSet> analytic_minimizer(const Distribution& p) const override {
        OptimalReportSet out;
        out.representative = p.probs().head(n_ - 1);
        out.opt_value = p.probs().dot(value(out.representative));
        return out;
    }
    std::string name() const override { return "universal"; }

  private:
    int n_;
};

/// Integral of a monotone piecewise-linear gradient: the constructed 1-d
/// surrogate. Gradients extend linearly with tail_slope beyond the end knots.
class PiecewiseQuad1d : public SurrogateLoss {
  public:
    PiecewiseQuad1d(std::vector<double> knots, std::vector<Vec> grads, double tail_slope = 1.0)
        : knots_(std::move(knots)), grads_(std::move(grads)), tail_(tail_slope) {
        if (knots_.size() < 2 || knots_.size() != grads_.size())
            throw std::invalid_argument("piecewise surrogate needs matched knots and gradients");
        for (size_t i = 1; i < knots_.size(); ++i)
            if (knots_[i] <= knots_[i - 1])
                throw std::invalid_argument("knots must be strictly increasing");
        nn_ = static_cast<int>(grads_[0].size());
        // Component values at knots by trapezoid accumulation from knot 0.
        cum_.assign(knots_.size(), Vec::Zero(nn_));
        for (size_t i = 1; i < knots_.size(); ++i) {
            const double h = knots_[i] - knots_[i - 1];
            cum_[i] = cum_[i - 1] + 0.5 * h * (grads_[i - 1] + grads_[i]);
        }
    }

    int d() const override { return 1; }
    int n() const override { return nn_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<Vec>& gradients() const { return grads_; }
    double tail_slope() const { return tail_; }

    Vec gradient_at(double x) const {
        if (x <= knots_.front()) return grads_.front().array() + tail_ * (x - knots_.front());
        if (x >= knots_.back()) return grads_.back().array() + tail_ * (x - knots_.back());
        const size_t i = segment(x);
        const double t = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
        return (1 - t) * grads_[i] + t * grads_[i + 1];
    }

    Vec value(const Vec& u) const override {
        const double x = u[0];
        if (x <= knots_.front()) {
            const double h = knots_.front() - x;
            return cum_.front() - h * grads_.front() + Vec::Constant(nn_, 0.5 * tail_ * h * h);
        }
        if (x >= knots_.back()) {
            const double h = x - knots_.back();
            return cum_.back() + h * grads_.back() + Vec::Constant(nn_, 0.5 * tail_ * h * h);
        }
        const size_t i = segment(x);
        const double h = x - knots_[i];
        Vec g = gradient_at(x);
        return cum_[i] + 0.5 * h * (grads_[i] + g);
    }

    Mat jacobian(const Vec& u) const override { return gradient_at(u[0]); }

    std::string name() const override { return "piecewise_quadratic_1d"; }

  private:
    size_t segment(double x) const {
        size_t i = 0;
        while (i + 2 < knots_.size() && x >= knots_[i + 1]) ++i;
        return i;
    }
    std::vector<double> knots_;
    std::vector<Vec> grads_;
    std::vector<Vec> cum_;
    double tail_;
    int nn_ = 0;
};

}  // namespace elicit
