#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "elicit/elicitation.hpp"
#include "elicit/surrogates.hpp"
#include "elicit/targets.hpp"

namespace elicit {

/// Total deterministic map from surrogate predictions to target reports.
class LinkFunction {
  public:
    virtual ~LinkFunction() = default;
    virtual int apply(const Vec& u) const = 0;
    virtual std::string kind() const = 0;
};

/// d = 1 link: sorted boundary intervals separate open regions mapped to
/// consecutive reports of the orderability enumeration (either orientation).
class IntervalLink : public LinkFunction {
  public:
    struct Boundary {
        double lo = 0.0, hi = 0.0;  // degenerate when lo == hi
        int report = 0;             // stored choice from the two adjacent reports
    };

    // boundaries sorted ascending in u; region_reports has one more entry,
    // region_reports[i] covering u between boundaries i-1 and i.
    IntervalLink(std::vector<Boundary> boundaries, std::vector<int> region_reports,
                 bool ascending)
        : boundaries_(std::move(boundaries)),
          regions_(std::move(region_reports)),
          ascending_(ascending) {
        if (regions_.size() != boundaries_.size() + 1)
            throw std::invalid_argument("interval link needs one region per gap");
        for (size_t i = 1; i < boundaries_.size(); ++i)
            if (boundaries_[i].lo <= boundaries_[i - 1].hi)
                throw std::invalid_argument("boundary intervals must be disjoint and sorted");
    }

    int apply(const Vec& u) const override {
        const double x = u[0];
        for (size_t i = 0; i < boundaries_.size(); ++i) {
            if (x < boundaries_[i].lo) return regions_[i];
            if (x <= boundaries_[i].hi) return boundaries_[i].report;
        }
        return regions_.back();
    }
    std::string kind() const override { return "interval"; }

    const std::vector<Boundary>& boundaries() const { return boundaries_; }
    const std::vector<int>& region_reports() const { return regions_; }
    bool ascending() const { return ascending_; }

  private:
    std::vector<Boundary> boundaries_;
    std::vector<int> regions_;
    bool ascending_;
};

/// Nearest-atlas projection link: each atlas entry carries a label valid for
/// every corner of its level set; apply returns the label of the nearest
/// sampled optimal report.
class ProjectionLink : public LinkFunction {
  public:
    ProjectionLink(std::vector<Vec> reports, std::vector<int> labels)
        : reports_(std::move(reports)), labels_(std::move(labels)) {
        if (reports_.empty() || reports_.size() != labels_.size())
            throw std::invalid_argument("projection link needs labeled reports");
    }

    int apply(const Vec& u) const override {
        double best = std::numeric_limits<double>::infinity();
        size_t arg = 0;
        for (size_t i = 0; i < reports_.size(); ++i) {
            const double d2 = (reports_[i] - u).squaredNorm();
            if (d2 < best) {
                best = d2;
                arg = i;
            }
        }
        return labels_[arg];
    }
    std::string kind() const override { return "projection"; }

    const std::vector<Vec>& reports() const { return reports_; }
    const std::vector<int>& labels() const { return labels_; }

  private:
    std::vector<Vec> reports_;
    std::vector<int> labels_;
};

/// Arbitrary callable link; used for analytic demo links.
class FunctionLink : public LinkFunction {
  public:
    FunctionLink(std::function<int(const Vec&)> fn, std::string label)
        : fn_(std::move(fn)), label_(std::move(label)) {}
    int apply(const Vec& u) const override { return fn_(u); }
    std::string kind() const override { return label_; }

  private:
    std::function<int(const Vec&)> fn_;
    std::string label_;
};

/// Link via the level set of u itself: report a target report optimal at
/// every corner of the current level set when one exists, else fall back to
/// the first corner's best report. Total wherever level sets are nonempty;
/// empty level sets map to the report optimal for the nearest vertex guess.
inline std::shared_ptr<LinkFunction> make_level_set_link(const SurrogateLoss* s,
                                                         const TargetLoss* t,
                                                         double tie_tol = 1e-7) {
    auto fn = [s, t, tie_tol](const Vec& u) -> int {
        SimplexPolytope ls = level_set(*s, u);
        if (ls.empty()) return 0;
        std::vector<int> common = gamma(*t, ls.vertices[0], tie_tol);
        for (size_t i = 1; i < ls.vertices.size() && !common.empty(); ++i) {
            std::vector<int> gi = gamma(*t, ls.vertices[i], tie_tol);
            std::vector<int> merged;
            std::set_intersection(common.begin(), common.end(), gi.begin(), gi.end(),
                                  std::back_inserter(merged));
            if (!merged.empty()) common = merged;
        }
        if (common.empty()) common = gamma(*t, ls.vertices[0], tie_tol);
        return common.front();
    };
    return std::make_shared<FunctionLink>(fn, "level_set");
}

/// The sign/abstain link paired with the cusp loss: negative reports the
/// down class, positive the up class, zero abstains. Report indexing follows
/// the three-report abstain target (down, abstain, up).
inline std::shared_ptr<LinkFunction> make_sign_abstain_link() {
    auto fn = [](const Vec& u) -> int {
        if (u[0] < 0) return 0;
        if (u[0] > 0) return 2;
        return 1;
    };
    return std::make_shared<FunctionLink>(fn, "sign_abstain");
}

/// Builds the 1-d interval link: one boundary interval per consecutive cell
/// pair of the enumeration, located as Gamma at a relative-interior point of
/// the shared cell boundary.
inline IntervalLink build_interval_link(const SurrogateLoss& s, const TargetLoss& t,
                                        const OrderabilityCertificate& cert,
                                        const OptimizerConfig& cfg = {},
                                        double hausdorff_tol = 1e-6) {
    if (s.d() != 1) throw std::invalid_argument("interval links need d = 1");
    if (!cert.ordered) throw NotOrderable("target has no path enumeration");
    const int k = t.k();
    const auto& order = cert.enumeration;

    struct Raw {
        double lo, hi;
        int left, right;  // enumeration-consecutive reports
    };
    std::vector<Raw> raw;
    for (int j = 0; j + 1 < k; ++j) {
        const int r1 = order[j], r2 = order[j + 1];
        // Relative-interior point of the shared boundary.
        std::vector<LinearConstraint> eqs = {
            {(t.loss.row(r1) - t.loss.row(r2)).transpose(), 0.0}};
        std::vector<LinearConstraint> ineqs;
        for (int r3 = 0; r3 < k; ++r3) {
            if (r3 == r1 || r3 == r2) continue;
            ineqs.push_back({(t.loss.row(r1) - t.loss.row(r3)).transpose(), 0.0});
        }
        for (int i = 0; i < t.n(); ++i) {
            Vec e = Vec::Zero(t.n());
            e[i] = -1.0;
            ineqs.push_back({e, 0.0});
        }
        auto p = lp_feasible_strict(t.n(), eqs, ineqs, 1e-6);
        if (!p) throw NotOrderable("no relative-interior boundary point between consecutive cells");

        OptimalReportSet opt = minimize(s, *p, cfg);
        double lo = opt.representative[0], hi = lo;
        if (opt.interval) {
            lo = opt.interval->first;
            hi = opt.interval->second;
        }
        Vec mid(1);
        mid[0] = 0.5 * (lo + hi);
        SimplexPolytope ls = level_set(s, mid);
        SimplexPolytope bd = cell_boundary(t, r1, r2);
        if (hausdorff_distance(ls, bd) > hausdorff_tol)
            throw BoundaryLevelSetMismatch("level set at the boundary report differs from the cell boundary");
        raw.push_back({lo, hi, r1, r2});
    }

    bool ascending = true;
    if (k >= 2) {
        // Orientation from the optimal reports inside the two end cells.
        auto witnesses = validate_nonredundant(t);
        const double u_first = minimize(s, witnesses[order.front()], cfg).representative[0];
        const double u_last = minimize(s, witnesses[order.back()], cfg).representative[0];
        ascending = u_first < u_last;
    }

    std::vector<IntervalLink::Boundary> bounds;
    std::vector<int> regions;
    std::vector<Raw> sorted = raw;
    std::sort(sorted.begin(), sorted.end(), [](const Raw& a, const Raw& b) { return a.lo < b.lo; });
    // Regions along increasing u follow the enumeration in the detected
    // orientation; boundary report tie-break is the smaller report index.
    for (const auto& r : sorted)
        bounds.push_back({r.lo, r.hi, std::min(r.left, r.right)});
    for (int j = 0; j <= k - 1; ++j)
        regions.push_back(ascending ? order[j] : order[k - 1 - j]);
    return IntervalLink(std::move(bounds), std::move(regions), ascending);
}

/// Projection link from a strong-IE-clean atlas; labels are the smallest
/// report optimal at every corner of each entry's level set.
inline ProjectionLink build_projection_link(const TargetLoss& t, const ReportAtlas& atlas,
                                            const ElicitationVerdict& strong_ie) {
    if (strong_ie.claim != ElicitationVerdict::Claim::StrongIE || strong_ie.violated)
        throw StrongIERequired("projection link needs a clean strong-IE verdict");
    std::vector<Vec> reports;
    std::vector<int> labels;
    for (const auto& e : atlas.entries) {
        std::vector<int> common = e.gamma_set;
        for (const auto& c : e.corners) {
            std::vector<int> gi = gamma(t, c, atlas.corner_tie_tol);
            std::vector<int> merged;
            std::set_intersection(common.begin(), common.end(), gi.begin(), gi.end(),
                                  std::back_inserter(merged));
            common = merged;
        }
        if (common.empty()) throw StrongIERequired("atlas entry with no common optimal report");
        reports.push_back(e.u);
        labels.push_back(common.front());
    }
    return ProjectionLink(std::move(reports), std::move(labels));
}

}  // namespace elicit
