#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "elicit/elicitation.hpp"
#include "elicit/links.hpp"
#include "elicit/surrogates.hpp"
#include "elicit/targets.hpp"

namespace elicit {

struct CalibrationConfig {
    double radius = 10.0;
    int grid_1d = 4001;
    int grid_2d = 201;  // per axis; the d = 2 grid is quadratic in this
    double gap_tol = 1e-6;
    double tie_tol = 1e-9;
    long budget = 40000000;
    OptimizerConfig opt;
};

struct WitnessPoint {
    Vec u;
    int report = 0;
    double loss = 0.0;
};

/// Restricted-infimum probe at one distribution. restricted_value is an
/// estimate from above: only points with a wrongly-linked report are ever
/// evaluated, so a reported zero gap is sound while a positive gap is
/// resolution-qualified.
struct CalibrationProbe {
    Vec p;
    std::vector<int> gamma_set;
    double opt_value = 0.0;
    double restricted_value = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    bool violated = false;
    std::vector<WitnessPoint> witness;
};

namespace detail {

inline bool contains(const std::vector<int>& set, int r) {
    return std::find(set.begin(), set.end(), r) != set.end();
}

struct RestrictedSearch {
    const SurrogateLoss& s;
    const LinkFunction& link;
    const Distribution& p;
    const std::vector<int>& gamma_set;
    CalibrationProbe& probe;
    long evals = 0;
    long budget;

    bool feasible(const Vec& u) { return !contains(gamma_set, link.apply(u)); }

    double eval(const Vec& u) {
        if (++evals > budget) throw SearchBudgetExceeded("calibration probe budget exhausted");
        const double v = expected_loss(s, p, u);
        if (v < probe.restricted_value) {
            probe.restricted_value = v;
            probe.witness.push_back({u, link.apply(u), v});
        }
        return v;
    }

    /// Walk from a feasible point toward target until feasibility flips,
    /// bisecting the transition; evaluates the approach as witnesses.
    void refine_toward(Vec from, const Vec& target) {
        if (feasible(target)) {
            eval(target);
            return;
        }
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 70; ++i) {
            const double mid = 0.5 * (lo + hi);
            Vec u = from + mid * (target - from);
            if (feasible(u)) {
                lo = mid;
                eval(u);
            } else {
                hi = mid;
            }
        }
    }

    /// Golden-section on the (convex) expected loss over [a, b], evaluating
    /// only feasible points; infeasible probes shrink the bracket too.
    void golden_1d(double a, double b) {
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        auto val = [&](double x) {
            Vec u(1);
            u[0] = x;
            return feasible(u) ? eval(u) : std::numeric_limits<double>::infinity();
        };
        double f1 = val(x1), f2 = val(x2);
        for (int i = 0; i < 120 && b - a > 1e-12; ++i) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = val(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = val(x2);
            }
        }
    }
};

}  // namespace detail

/// Calibration gap at p: opt_value from the unrestricted minimizer,
/// restricted_value over the box where the link disagrees with gamma(p),
/// searched by dense grid plus bisection refinement toward the optimum.
inline CalibrationProbe gap(const SurrogateLoss& s, const TargetLoss& t, const LinkFunction& link,
                            const Distribution& p, const CalibrationConfig& cfg = {}) {
    CalibrationProbe probe;
    probe.p = p.probs();
    probe.gamma_set = gamma(t, p, cfg.tie_tol);

    OptimalReportSet opt = minimize(s, p, cfg.opt);
    probe.opt_value = opt.opt_value;

    detail::RestrictedSearch search{s, link, p, probe.gamma_set, probe, 0, cfg.budget};
    const double r = cfg.radius;
    Vec best;
    double best_val = std::numeric_limits<double>::infinity();

    if (s.d() == 1) {
        const int g = cfg.grid_1d;
        double spacing = 2 * r / (g - 1);
        for (int i = 0; i < g; ++i) {
            Vec u(1);
            u[0] = -r + i * spacing;
            if (!search.feasible(u)) continue;
            const double v = search.eval(u);
            if (v < best_val) {
                best_val = v;
                best = u;
            }
        }
        if (std::isfinite(best_val)) {
            search.golden_1d(std::max(-r, best[0] - spacing), std::min(r, best[0] + spacing));
            search.refine_toward(best, opt.representative);
            if (opt.interval) {
                Vec a(1), b(1);
                a[0] = opt.interval->first;
                b[0] = opt.interval->second;
                search.refine_toward(best, a);
                search.refine_toward(best, b);
            }
        }
    } else if (s.d() == 2) {
        const int g = cfg.grid_2d;
        double spacing = 2 * r / (g - 1);
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) {
                Vec u(2);
                u[0] = -r + i * spacing;
                u[1] = -r + j * spacing;
                if (!search.feasible(u)) continue;
                const double v = search.eval(u);
                if (v < best_val) {
                    best_val = v;
                    best = u;
                }
            }
        }
        if (std::isfinite(best_val)) {
            // Coordinate descent with shrinking steps, feasibility-gated.
            Vec cur = best;
            double cur_val = best_val;
            for (double step = spacing; step > 1e-9; step *= 0.5) {
                bool improved = true;
                while (improved) {
                    improved = false;
                    for (int axis = 0; axis < 2; ++axis) {
                        for (double sg : {-1.0, 1.0}) {
                            Vec u = cur;
                            u[axis] += sg * step;
                            if (u.lpNorm<Eigen::Infinity>() > r || !search.feasible(u)) continue;
                            const double v = search.eval(u);
                            if (v < cur_val - 1e-15) {
                                cur = u;
                                cur_val = v;
                                improved = true;
                            }
                        }
                    }
                }
            }
            search.refine_toward(cur, opt.representative);
        }
    } else {
        throw DimensionOverflow("calibration search implemented for d <= 2");
    }

    // Keep the tail of the improving sequence; earlier entries carry no
    // information beyond the approach already visible in the tail.
    const size_t keep = 48;
    if (probe.witness.size() > keep)
        probe.witness.erase(probe.witness.begin(),
                            probe.witness.end() - static_cast<long>(keep));

    probe.gap = probe.restricted_value - probe.opt_value;
    probe.violated = std::isfinite(probe.restricted_value) && probe.gap <= cfg.gap_tol;
    return probe;
}

struct SweepResult {
    std::vector<CalibrationProbe> probes;
    double min_interior_gap = std::numeric_limits<double>::infinity();
    int violations = 0;
};

/// Probes the lattice plus cell vertices and boundary barycenters. Interior
/// distributions are those with a singleton gamma set.
inline SweepResult sweep(const SurrogateLoss& s, const TargetLoss& t, const LinkFunction& link,
                         double resolution, const CalibrationConfig& cfg = {}) {
    SweepResult out;
    for (const auto& p : probe_points(t, resolution)) {
        CalibrationProbe probe = gap(s, t, link, p, cfg);
        if (probe.violated) ++out.violations;
        if (probe.gamma_set.size() == 1 && std::isfinite(probe.gap))
            out.min_interior_gap = std::min(out.min_interior_gap, probe.gap);
        out.probes.push_back(std::move(probe));
    }
    return out;
}

/// Empirical check of the minimizing-sequence equivalence: the sequence
/// approaches the optimal value iff it approaches the argmin set.
inline bool minimizing_sequence_check(const SurrogateLoss& s, const Distribution& p,
                                      const std::vector<Vec>& sequence,
                                      const OptimizerConfig& cfg = {}) {
    if (sequence.empty()) return true;
    OptimalReportSet opt = minimize(s, p, cfg);
    const Vec& last = sequence.back();
    const bool loss_conv = std::abs(expected_loss(s, p, last) - opt.opt_value) <= 1e-8;
    double dist;
    if (s.d() == 1 && opt.interval) {
        const double x = last[0];
        dist = std::max({opt.interval->first - x, x - opt.interval->second, 0.0});
    } else {
        dist = (last - opt.representative).norm();
    }
    const bool dist_conv = dist <= 1e-4;
    return loss_conv == dist_conv;
}

}  // namespace elicit
