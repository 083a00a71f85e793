#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "elicit/grid.hpp"
#include "elicit/surrogates.hpp"
#include "elicit/targets.hpp"

namespace elicit {

/// Shared boundary of two target cells as a polytope.
inline SimplexPolytope cell_boundary(const TargetLoss& t, int r1, int r2) {
    std::vector<LinearConstraint> eqs = {{(t.loss.row(r1) - t.loss.row(r2)).transpose(), 0.0}};
    std::vector<LinearConstraint> ineqs;
    for (int r3 = 0; r3 < t.k(); ++r3) {
        if (r3 == r1 || r3 == r2) continue;
        ineqs.push_back({(t.loss.row(r1) - t.loss.row(r3)).transpose(), 0.0});
    }
    return make_polytope(t.n(), std::move(eqs), std::move(ineqs));
}

struct AtlasEntry {
    Distribution p;
    Vec u;                               // Gamma representative at p
    std::vector<int> gamma_set;          // target optimal set at p
    std::vector<Distribution> corners;   // vertices of the level set at u
};

struct ReportAtlas {
    std::vector<AtlasEntry> entries;
    double resolution = 0.0;
    double corner_tie_tol = 1e-7;
};

struct AtlasConfig {
    double tie_tol = 1e-9;
    double corner_tie_tol = 1e-7;  // corners sit exactly on ties
    double rank_tol = 1e-9;
    OptimizerConfig opt;
};

/// Lattice at the given resolution plus the target's cell vertices and
/// boundary barycenters, deduplicated; the shared probe set for atlases and
/// calibration sweeps.
inline std::vector<Distribution> probe_points(const TargetLoss& t, double resolution) {
    std::vector<Distribution> probes;
    const int denom = std::max(1, static_cast<int>(std::lround(1.0 / resolution)));
    for_each_grid_point(t.n(), denom, [&](const Distribution& p) { probes.push_back(p); });
    for (int r = 0; r < t.k(); ++r)
        for (const auto& v : cell(t, r).polytope.vertices) probes.push_back(v);
    for (int r1 = 0; r1 < t.k(); ++r1) {
        for (int r2 = r1 + 1; r2 < t.k(); ++r2) {
            SimplexPolytope b = cell_boundary(t, r1, r2);
            if (b.empty()) continue;
            Vec mid = Vec::Zero(t.n());
            for (const auto& v : b.vertices) mid += v.probs();
            probes.emplace_back(mid / static_cast<double>(b.vertices.size()));
        }
    }
    std::vector<Distribution> out;
    for (const auto& p : probes) {
        bool dup = false;
        for (const auto& q : out)
            if ((q.probs() - p.probs()).lpNorm<Eigen::Infinity>() < 1e-12) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(p);
    }
    return out;
}

/// Samples optimal reports over the lattice at the given resolution plus the
/// target's cell vertices and boundary barycenters, recording the level-set
/// corners and their target optimal sets.
inline ReportAtlas build_atlas(const SurrogateLoss& s, const TargetLoss& t, double resolution,
                               const AtlasConfig& cfg = {}) {
    ReportAtlas atlas;
    atlas.resolution = resolution;
    atlas.corner_tie_tol = cfg.corner_tie_tol;

    for (const auto& p : probe_points(t, resolution)) {
        AtlasEntry entry{p, Vec(), gamma(t, p, cfg.tie_tol), {}};
        try {
            OptimalReportSet opt = minimize(s, p, cfg.opt);
            entry.u = opt.representative;
        } catch (const NoConvergence& e) {
            throw NoConvergence(std::string(e.what()) + " at a sampled distribution");
        }
        entry.corners = level_set(s, entry.u, cfg.rank_tol).vertices;
        atlas.entries.push_back(std::move(entry));
    }
    return atlas;
}

struct ViolationCertificate {
    Vec u;
    Vec p, q;  // conflicting level-set corners
    std::vector<int> gamma_p, gamma_q;
};

struct ElicitationVerdict {
    enum class Claim { IE, StrongIE };
    Claim claim = Claim::IE;
    bool violated = false;
    double resolution = 0.0;
    std::optional<ViolationCertificate> certificate;
};

namespace detail {

inline std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace detail

/// IE at a report u holds iff some target report is optimal at every corner
/// of the level set; scans all atlas entries for a counterexample.
inline ElicitationVerdict check_ie(const ReportAtlas& atlas, const TargetLoss& t) {
    ElicitationVerdict v;
    v.claim = ElicitationVerdict::Claim::IE;
    v.resolution = atlas.resolution;
    for (const auto& entry : atlas.entries) {
        if (entry.corners.empty()) continue;
        std::vector<std::vector<int>> gs;
        for (const auto& c : entry.corners) gs.push_back(gamma(t, c, atlas.corner_tie_tol));
        std::vector<int> common = gs[0];
        for (size_t i = 1; i < gs.size(); ++i) common = detail::intersect_sorted(common, gs[i]);
        if (!common.empty()) continue;
        v.violated = true;
        ViolationCertificate cert;
        cert.u = entry.u;
        // Prefer a corner pair with pairwise-empty intersection for replay.
        size_t bi = 0, bj = gs.size() > 1 ? 1 : 0;
        for (size_t i = 0; i < gs.size(); ++i)
            for (size_t j = i + 1; j < gs.size(); ++j)
                if (detail::intersect_sorted(gs[i], gs[j]).empty()) {
                    bi = i;
                    bj = j;
                    goto found;
                }
    found:
        cert.p = entry.corners[bi].probs();
        cert.q = entry.corners[bj].probs();
        cert.gamma_p = gs[bi];
        cert.gamma_q = gs[bj];
        v.certificate = cert;
        return v;
    }
    return v;
}

/// Strong IE at u requires every corner of the level set to share one
/// identical target optimal set.
inline ElicitationVerdict check_strong_ie(const ReportAtlas& atlas, const TargetLoss& t) {
    ElicitationVerdict v;
    v.claim = ElicitationVerdict::Claim::StrongIE;
    v.resolution = atlas.resolution;
    for (const auto& entry : atlas.entries) {
        if (entry.corners.empty()) continue;
        std::vector<int> first = gamma(t, entry.corners[0], atlas.corner_tie_tol);
        for (size_t i = 1; i < entry.corners.size(); ++i) {
            std::vector<int> gi = gamma(t, entry.corners[i], atlas.corner_tie_tol);
            if (gi == first) continue;
            v.violated = true;
            ViolationCertificate cert;
            cert.u = entry.u;
            cert.p = entry.corners[0].probs();
            cert.q = entry.corners[i].probs();
            cert.gamma_p = first;
            cert.gamma_q = gi;
            v.certificate = cert;
            return v;
        }
    }
    return v;
}

/// Standalone replay of a violation certificate: corner membership in the
/// recomputed level set and the claimed conflict of target optimal sets.
inline bool replay_certificate(const ElicitationVerdict& v, const SurrogateLoss& s,
                               const TargetLoss& t, double tie_tol = 1e-7) {
    if (!v.violated || !v.certificate) return false;
    const auto& c = *v.certificate;
    SimplexPolytope ls = level_set(s, c.u);
    if (distance_to_polytope(ls, c.p) > 1e-8 || distance_to_polytope(ls, c.q) > 1e-8)
        return false;
    std::vector<int> gp = gamma(t, Distribution(c.p), tie_tol);
    std::vector<int> gq = gamma(t, Distribution(c.q), tie_tol);
    if (v.claim == ElicitationVerdict::Claim::StrongIE) return gp != gq;
    return detail::intersect_sorted(gp, gq).empty();
}

/// Level sets swept across Gamma(p); for d = 1 flat argmins the interval is
/// sampled at 32 points. Diagnostic output for figures and link sanity.
inline std::vector<SimplexPolytope> level_set_bundle(const SurrogateLoss& s, const Distribution& p,
                                                     const OptimizerConfig& cfg = {}) {
    OptimalReportSet opt = minimize(s, p, cfg);
    std::vector<SimplexPolytope> out;
    if (s.d() == 1 && opt.interval && opt.interval->second - opt.interval->first > 1e-8) {
        const auto [a, b] = *opt.interval;
        const int samples = 32;
        for (int i = 0; i < samples; ++i) {
            Vec u(1);
            u[0] = a + (b - a) * i / (samples - 1.0);
            out.push_back(level_set(s, u));
        }
    } else {
        out.push_back(level_set(s, opt.representative));
    }
    return out;
}

}  // namespace elicit
