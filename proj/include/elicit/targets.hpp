#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "elicit/geometry.hpp"
#include "elicit/lp.hpp"
#include "elicit/types.hpp"

namespace elicit {

/// Discrete target loss: k reports scored against n outcomes.
struct TargetLoss {
    Mat loss;  // k x n, entry (r, y)
    std::vector<std::string> labels;

    TargetLoss(Mat l, std::vector<std::string> lbl = {}) : loss(std::move(l)), labels(std::move(lbl)) {
        if (loss.rows() < 2 || loss.cols() < 2 || !loss.allFinite())
            throw std::invalid_argument("target loss needs k >= 2, n >= 2, finite entries");
        if (labels.empty())
            for (Eigen::Index r = 0; r < loss.rows(); ++r)
                labels.push_back(std::to_string(r + 1));
        if (static_cast<Eigen::Index>(labels.size()) != loss.rows())
            throw std::invalid_argument("label count mismatch");
    }

    int k() const { return static_cast<int>(loss.rows()); }
    int n() const { return static_cast<int>(loss.cols()); }
    double expected(const Distribution& p, int r) const { return loss.row(r).dot(p.probs()); }
};

/// All reports whose expected loss is within tie_tol of the minimum.
inline std::vector<int> gamma(const TargetLoss& t, const Distribution& p, double tie_tol = 1e-9) {
    Vec vals = t.loss * p.probs();
    const double best = vals.minCoeff();
    std::vector<int> out;
    for (int r = 0; r < t.k(); ++r)
        if (vals[r] <= best + tie_tol) out.push_back(r);
    return out;
}

struct TargetCell {
    int report = 0;
    SimplexPolytope polytope;
};

/// The cell where report r is optimal: <p, l(r) - l(r')> <= 0 for all r'.
inline TargetCell cell(const TargetLoss& t, int r) {
    std::vector<LinearConstraint> ineqs;
    for (int r2 = 0; r2 < t.k(); ++r2) {
        if (r2 == r) continue;
        ineqs.push_back({(t.loss.row(r) - t.loss.row(r2)).transpose(), 0.0});
    }
    return {r, make_polytope(t.n(), {}, std::move(ineqs))};
}

/// One LP witness per report where it beats every other by the margin;
/// throws RedundantReport for the first report with no such witness.
inline std::vector<Distribution> validate_nonredundant(const TargetLoss& t,
                                                       double margin = 1e-6) {
    std::vector<Distribution> witnesses;
    for (int r = 0; r < t.k(); ++r) {
        std::vector<LinearConstraint> ineqs;
        for (int r2 = 0; r2 < t.k(); ++r2) {
            if (r2 == r) continue;
            ineqs.push_back({(t.loss.row(r) - t.loss.row(r2)).transpose(), 0.0});
        }
        auto w = lp_feasible_strict(t.n(), {}, ineqs, margin);
        if (!w) throw RedundantReport(r);
        witnesses.push_back(*w);
    }
    return witnesses;
}

struct OrderabilityCertificate {
    bool ordered = false;
    std::vector<int> enumeration;  // path order when ordered
    std::vector<std::pair<int, int>> intersection_edges;
};

/// Intersection graph on reports: edge (r, r2) when some p in the relative
/// interior of the simplex ties the two reports while strictly beating the
/// rest. Ordered iff the graph is a single path through all reports.
inline OrderabilityCertificate orderability(const TargetLoss& t, double margin = 1e-6) {
    OrderabilityCertificate cert;
    const int k = t.k(), n = t.n();
    std::vector<std::vector<int>> adj(k);
    for (int r = 0; r < k; ++r) {
        for (int r2 = r + 1; r2 < k; ++r2) {
            std::vector<LinearConstraint> eqs = {
                {(t.loss.row(r) - t.loss.row(r2)).transpose(), 0.0}};
            std::vector<LinearConstraint> ineqs;
            for (int r3 = 0; r3 < k; ++r3) {
                if (r3 == r || r3 == r2) continue;
                ineqs.push_back({(t.loss.row(r) - t.loss.row(r3)).transpose(), 0.0});
            }
            for (int i = 0; i < n; ++i) {
                Vec e = Vec::Zero(n);
                e[i] = -1.0;
                ineqs.push_back({e, 0.0});  // p_i strictly positive
            }
            if (lp_feasible_strict(n, eqs, ineqs, margin)) {
                cert.intersection_edges.emplace_back(r, r2);
                adj[r].push_back(r2);
                adj[r2].push_back(r);
            }
        }
    }

    int ends = 0, start = -1;
    bool degrees_ok = true;
    for (int r = 0; r < k; ++r) {
        if (adj[r].size() == 1) {
            ++ends;
            if (start < 0) start = r;
        } else if (adj[r].size() != 2) {
            degrees_ok = false;
        }
    }
    if (k == 2) {
        degrees_ok = !adj[0].empty();
        ends = 2;
        start = 0;
    }
    if (degrees_ok && ends == 2 && start >= 0) {
        std::vector<int> path = {start};
        std::vector<bool> seen(k, false);
        seen[start] = true;
        int cur = start;
        while (true) {
            int next = -1;
            for (int nb : adj[cur])
                if (!seen[nb]) {
                    next = nb;
                    break;
                }
            if (next < 0) break;
            seen[next] = true;
            path.push_back(next);
            cur = next;
        }
        if (static_cast<int>(path.size()) == k) {
            cert.ordered = true;
            cert.enumeration = std::move(path);
        }
    }
    return cert;
}

}  // namespace elicit
