#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "elicit/elicitation.hpp"
#include "elicit/links.hpp"
#include "elicit/lp.hpp"
#include "elicit/surrogates.hpp"
#include "elicit/targets.hpp"

namespace elicit {

struct BoundaryCheck {
    int position = 0;  // boundary between enumeration slots position-1 and position
    int left_report = 0, right_report = 0;
    double max_vertex_residual = 0.0;  // |<p, v>| over boundary vertices
    double left_sign = 0.0, right_sign = 0.0;  // <p', v> at interior witnesses
    bool pass = false;
};

struct Construction1d {
    PiecewiseQuad1d surrogate;
    IntervalLink link;
    std::vector<int> enumeration;
    std::vector<double> betas;  // scale per interior knot
    std::vector<BoundaryCheck> certificates;
};

namespace detail {

/// Scaling LP: beta_j >= 1 with beta_j d_j <= beta_{j+1} d_{j+1}
/// componentwise, minimizing the total scale. Empty optional on infeasible.
inline std::optional<std::vector<double>> solve_betas(const std::vector<Vec>& d) {
    const int m = static_cast<int>(d.size());  // betas for d_2..d_k
    LpProblem prob;
    prob.c = Vec::Ones(m);
    prob.a_eq = Mat(0, m);
    prob.b_eq = Vec(0);
    std::vector<Vec> rows;
    std::vector<double> rhs;
    for (int j = 0; j < m; ++j) {
        Vec row = Vec::Zero(m);
        row[j] = -1.0;
        rows.push_back(row);
        rhs.push_back(-1.0);  // beta_j >= 1
    }
    const int n = static_cast<int>(d[0].size());
    for (int j = 0; j + 1 < m; ++j) {
        for (int y = 0; y < n; ++y) {
            Vec row = Vec::Zero(m);
            row[j] = d[j][y];
            row[j + 1] = -d[j + 1][y];
            rows.push_back(row);
            rhs.push_back(0.0);
        }
    }
    prob.a_ub = Mat(rows.size(), m);
    prob.b_ub = Vec(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        prob.a_ub.row(i) = rows[i].transpose();
        prob.b_ub[i] = rhs[i];
    }
    LpResult res = solve_lp(prob);
    if (res.status != LpResult::Status::Optimal) return std::nullopt;
    std::vector<double> betas(res.x.data(), res.x.data() + m);
    for (double& b : betas) b = std::max(b, 1.0);
    return betas;
}

}  // namespace detail

/// Per-boundary replay of the construction's sign structure: the interior
/// gradient knot vanishes on the shared cell boundary and separates the two
/// adjacent cells by sign.
inline std::vector<BoundaryCheck> boundary_certificate(const TargetLoss& t,
                                                       const std::vector<int>& order,
                                                       const std::vector<Vec>& interior_knots) {
    const int k = t.k();
    auto witnesses = validate_nonredundant(t);
    std::vector<BoundaryCheck> out;
    for (int j = 1; j < k; ++j) {
        const Vec& v = interior_knots[j - 1];  // knot at x = j+1, scale of d_{j+1}
        BoundaryCheck chk;
        chk.position = j;
        chk.left_report = order[j - 1];
        chk.right_report = order[j];
        SimplexPolytope bd = cell_boundary(t, order[j - 1], order[j]);
        for (const auto& vert : bd.vertices)
            chk.max_vertex_residual =
                std::max(chk.max_vertex_residual, std::abs(v.dot(vert.probs())));
        chk.left_sign = v.dot(witnesses[order[j - 1]].probs());
        chk.right_sign = v.dot(witnesses[order[j]].probs());
        // The left cell's argmin sits below the knot, so its witness sees a
        // positive gradient there; mirrored for the right cell.
        chk.pass = chk.max_vertex_residual <= 1e-9 && chk.left_sign > 0 && chk.right_sign < 0;
        if (!chk.pass)
            throw CertificateFailure("boundary " + std::to_string(j) + " fails the sign check");
        out.push_back(chk);
    }
    return out;
}

/// Convex differentiable 1-d surrogate for an orderable target: interior
/// gradient knots are LP-scaled boundary normals, padded so the end cells see
/// strictly signed gradients, integrated into a piecewise-quadratic loss.
/// Report r_j owns x in [j, j+1); the link floors and clamps.
inline Construction1d construct(const TargetLoss& t, double ie_resolution = 0.1) {
    validate_nonredundant(t);
    OrderabilityCertificate cert = orderability(t);
    if (!cert.ordered) throw NotOrderable("intersection graph is not a path");
    const int k = t.k();

    std::vector<int> order = cert.enumeration;
    std::vector<Vec> d;
    for (int j = 1; j < k; ++j) d.push_back((t.loss.row(order[j]) - t.loss.row(order[j - 1])).transpose());
    auto betas = detail::solve_betas(d);
    if (!betas) {
        std::reverse(order.begin(), order.end());
        d.clear();
        for (int j = 1; j < k; ++j)
            d.push_back((t.loss.row(order[j]) - t.loss.row(order[j - 1])).transpose());
        betas = detail::solve_betas(d);
        if (!betas) throw ScalingInfeasible("no monotone scaling in either enumeration direction");
    }

    std::vector<Vec> interior;  // knot at x = j+1 for j = 1..k-1
    for (int j = 0; j + 1 < k; ++j) interior.push_back((*betas)[j] * d[j]);

    // Padding knots with strict signs on the end cells.
    double c1 = 0.0, c2 = 0.0;
    for (const auto& vert : cell(t, order.front()).polytope.vertices)
        c1 = std::max(c1, interior.front().dot(vert.probs()));
    for (const auto& vert : cell(t, order.back()).polytope.vertices)
        c2 = std::max(c2, -interior.back().dot(vert.probs()));
    c1 += 1.0;
    c2 += 1.0;
    Vec v_left = interior.front().array() - c1;
    Vec v_right = interior.back().array() + c2;

    std::vector<double> knots;
    std::vector<Vec> grads;
    knots.push_back(1.0);
    grads.push_back(v_left);
    for (int j = 0; j + 1 < k; ++j) {
        knots.push_back(j + 2.0);
        grads.push_back(interior[j]);
    }
    knots.push_back(k + 1.0);
    grads.push_back(v_right);
    PiecewiseQuad1d surrogate(knots, grads, 1.0);

    std::vector<IntervalLink::Boundary> bounds;
    std::vector<int> regions;
    for (int j = 0; j + 1 < k; ++j) {
        const double x = j + 2.0;
        bounds.push_back({x, x, std::min(order[j], order[j + 1])});
    }
    for (int j = 0; j < k; ++j) regions.push_back(order[j]);
    IntervalLink link(bounds, regions, true);

    Construction1d out{std::move(surrogate), std::move(link), order, *betas,
                       boundary_certificate(t, order, interior)};

    ReportAtlas atlas = build_atlas(out.surrogate, t, ie_resolution);
    if (check_ie(atlas, t).violated)
        throw CertificateFailure("constructed surrogate fails the corner IE check");
    return out;
}

}  // namespace elicit
