#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "elicit/elicitation.hpp"
#include "elicit/targets.hpp"

namespace elicit {

/// Ternary (n = 3) diagram writer: shaded target cells, cell boundaries,
/// and optional surrogate level-set overlays.
class TernarySvg {
  public:
    TernarySvg(double size = 480.0) : size_(size) {
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_ + 2 * margin_
              << "\" height=\"" << size_ + 2 * margin_ << "\">\n";
    }

    void add_triangle() {
        auto a = project(vec3(1, 0, 0)), b = project(vec3(0, 1, 0)), c = project(vec3(0, 0, 1));
        body_ << "<polygon points=\"" << pts({a, b, c})
              << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1.5\"/>\n";
    }

    void add_cell(const SimplexPolytope& cell, const std::string& fill,
                  const std::string& label = "") {
        if (cell.vertices.size() < 3) return;
        std::vector<std::pair<double, double>> proj;
        for (const auto& v : cell.vertices) proj.push_back(project(v.probs()));
        sort_ccw(proj);
        body_ << "<polygon points=\"" << pts(proj) << "\" fill=\"" << fill
              << "\" fill-opacity=\"0.35\" stroke=\"none\"/>\n";
        if (!label.empty()) {
            double cx = 0, cy = 0;
            for (auto& q : proj) {
                cx += q.first;
                cy += q.second;
            }
            cx /= proj.size();
            cy /= proj.size();
            body_ << "<text x=\"" << cx << "\" y=\"" << cy
                  << "\" font-size=\"16\" text-anchor=\"middle\" fill=\"#222\">" << label
                  << "</text>\n";
        }
    }

    void add_segment_polytope(const SimplexPolytope& seg, const std::string& stroke,
                              double width = 2.5) {
        if (seg.vertices.empty()) return;
        if (seg.vertices.size() == 1) {
            auto q = project(seg.vertices[0].probs());
            body_ << "<circle cx=\"" << q.first << "\" cy=\"" << q.second
                  << "\" r=\"3\" fill=\"" << stroke << "\"/>\n";
            return;
        }
        // Extreme pair for segments (affine dimension 1).
        size_t bi = 0, bj = 1;
        double best = -1;
        for (size_t i = 0; i < seg.vertices.size(); ++i)
            for (size_t j = i + 1; j < seg.vertices.size(); ++j) {
                double d = (seg.vertices[i].probs() - seg.vertices[j].probs()).norm();
                if (d > best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        auto a = project(seg.vertices[bi].probs()), b = project(seg.vertices[bj].probs());
        body_ << "<line x1=\"" << a.first << "\" y1=\"" << a.second << "\" x2=\"" << b.first
              << "\" y2=\"" << b.second << "\" stroke=\"" << stroke << "\" stroke-width=\""
              << width << "\"/>\n";
    }

    std::string finish() {
        body_ << "</svg>\n";
        return body_.str();
    }

  private:
    static Vec vec3(double a, double b, double c) {
        Vec v(3);
        v << a, b, c;
        return v;
    }

    std::pair<double, double> project(const Vec& p) const {
        // Corners: outcome 1 lower left, 2 lower right, 3 top.
        const double x = p[1] + 0.5 * p[2];
        const double y = 0.8660254037844386 * p[2];
        return {margin_ + x * size_, margin_ + size_ - y * size_};
    }

    static void sort_ccw(std::vector<std::pair<double, double>>& proj) {
        double cx = 0, cy = 0;
        for (auto& q : proj) {
            cx += q.first;
            cy += q.second;
        }
        cx /= proj.size();
        cy /= proj.size();
        std::sort(proj.begin(), proj.end(), [&](const auto& a, const auto& b) {
            return std::atan2(a.second - cy, a.first - cx) < std::atan2(b.second - cy, b.first - cx);
        });
    }

    static std::string pts(const std::vector<std::pair<double, double>>& proj) {
        std::ostringstream out;
        for (const auto& q : proj) out << q.first << "," << q.second << " ";
        return out.str();
    }

    double size_;
    double margin_ = 24.0;
    std::ostringstream body_;
};

/// Target cells plus boundaries; optionally overlays surrogate level sets at
/// the atlas's sampled reports.
inline std::string render_target(const TargetLoss& t, const ReportAtlas* atlas = nullptr) {
    if (t.n() != 3) throw DimensionOverflow("SVG rendering is for n = 3");
    static const char* fills[] = {"#e8b04a", "#6fb06a", "#7a86c8", "#c87a7a", "#9a7ac8"};
    TernarySvg svg;
    for (int r = 0; r < t.k(); ++r)
        svg.add_cell(cell(t, r).polytope, fills[r % 5], t.labels[r]);
    for (int r1 = 0; r1 < t.k(); ++r1)
        for (int r2 = r1 + 1; r2 < t.k(); ++r2) {
            SimplexPolytope b = cell_boundary(t, r1, r2);
            if (!b.empty() && b.affine_dim() >= 1) svg.add_segment_polytope(b, "#e06040", 3.0);
        }
    if (atlas) {
        for (const auto& e : atlas->entries) {
            SimplexPolytope ls;
            ls.dim_ambient = 3;
            ls.vertices = e.corners;
            if (!ls.vertices.empty()) svg.add_segment_polytope(ls, "#3b6fd4", 1.5);
        }
    }
    svg.add_triangle();
    return svg.finish();
}

}  // namespace elicit
