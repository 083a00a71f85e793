#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "elicit/lp.hpp"
#include "elicit/types.hpp"

namespace elicit {

/// Polytope inside the probability simplex, kept in both representations:
/// vertex list plus the defining equalities <p,w> = c and inequalities
/// <p,w> <= c. The simplex constraints (p >= 0, sum = 1) are implicit.
struct SimplexPolytope {
    int dim_ambient = 0;
    std::vector<Distribution> vertices;
    std::vector<LinearConstraint> equalities;
    std::vector<LinearConstraint> inequalities;

    bool empty() const { return vertices.empty(); }

    /// Rank of the vertex difference matrix.
    int affine_dim() const {
        if (vertices.size() <= 1) return vertices.empty() ? -1 : 0;
        Mat diffs(dim_ambient, static_cast<Eigen::Index>(vertices.size()) - 1);
        for (size_t i = 1; i < vertices.size(); ++i)
            diffs.col(i - 1) = vertices[i].probs() - vertices[0].probs();
        Eigen::ColPivHouseholderQR<Mat> qr(diffs);
        qr.setThreshold(1e-8);
        return static_cast<int>(qr.rank());
    }

    /// H-form membership, tolerance on every constraint including the simplex.
    bool satisfies(const Vec& p, double tol = 1e-9) const {
        if (std::abs(p.sum() - 1.0) > tol || (p.array() < -tol).any()) return false;
        for (const auto& e : equalities)
            if (std::abs(e.normal.dot(p) - e.offset) > tol) return false;
        for (const auto& q : inequalities)
            if (q.normal.dot(p) - q.offset > tol) return false;
        return true;
    }
};

namespace detail {

/// Squared distance from x to the convex hull of the columns of v, by
/// enumerating support subsets; exact for the small vertex counts used here.
inline double dist_to_hull(const Mat& v, const Vec& x) {
    const Eigen::Index m = v.cols();
    if (m == 0) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    if (m > 20) throw DimensionOverflow("hull distance: too many vertices");
    for (unsigned long mask = 1; mask < (1ul << m); ++mask) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < m; ++j)
            if (mask & (1ul << j)) idx.push_back(j);
        const Eigen::Index s = static_cast<Eigen::Index>(idx.size());
        // Minimize ||V_S w - x|| subject to sum w = 1 via the affine
        // parametrization w = e_0 + N t with N spanning {sum = 0}.
        Mat vs(v.rows(), s);
        for (Eigen::Index j = 0; j < s; ++j) vs.col(j) = v.col(idx[j]);
        Vec w;
        if (s == 1) {
            w = Vec::Ones(1);
        } else {
            Mat nmat = Mat::Zero(s, s - 1);
            for (Eigen::Index j = 0; j < s - 1; ++j) {
                nmat(j, j) = 1.0;
                nmat(j + 1, j) = -1.0;
            }
            Vec base = Vec::Zero(s);
            base[0] = 1.0;
            Mat a = vs * nmat;
            Vec rhs = x - vs * base;
            Vec t = a.colPivHouseholderQr().solve(rhs);
            w = base + nmat * t;
        }
        if ((w.array() < -1e-10).any()) continue;
        best = std::min(best, (vs * w - x).norm());
    }
    return best;
}

}  // namespace detail

inline double distance_to_polytope(const SimplexPolytope& poly, const Vec& x) {
    if (poly.vertices.empty()) return std::numeric_limits<double>::infinity();
    Mat v(poly.dim_ambient, static_cast<Eigen::Index>(poly.vertices.size()));
    for (size_t j = 0; j < poly.vertices.size(); ++j) v.col(j) = poly.vertices[j].probs();
    return detail::dist_to_hull(v, x);
}

/// Hausdorff distance between two convex polytopes, attained at vertices.
inline double hausdorff_distance(const SimplexPolytope& a, const SimplexPolytope& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    double h = 0.0;
    for (const auto& v : a.vertices) h = std::max(h, distance_to_polytope(b, v.probs()));
    for (const auto& v : b.vertices) h = std::max(h, distance_to_polytope(a, v.probs()));
    return h;
}

/// Orthonormal basis of ker(m^T) in R^n, i.e. the distributions' side of the
/// first-order condition m^T p = 0. Singular values below rank_tol times the
/// largest count as zero.
inline Mat kernel_basis(const LinearMapOnSimplex& m, double rank_tol = 1e-9) {
    const Eigen::Index n = m.matrix.rows();
    Eigen::JacobiSVD<Mat> svd(m.matrix, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? sv[0] * rank_tol : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff && sv[i] > 0.0) ++rank;
    return svd.matrixU().rightCols(n - rank);
}

/// Vertex enumeration for {p in simplex : equalities hold, inequalities hold}
/// by intersecting facet subsets that complete the equality system to full
/// rank. Facets are the nonnegativity constraints plus the inequalities.
inline std::vector<Distribution> enumerate_vertices(
    int n, const std::vector<LinearConstraint>& equalities,
    const std::vector<LinearConstraint>& inequalities) {
    if (n > 12) throw DimensionOverflow("vertex enumeration limited to n <= 12");

    std::vector<Vec> facet_normals;
    std::vector<double> facet_offsets;
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e[i] = -1.0;
        facet_normals.push_back(e);  // -p_i <= 0
        facet_offsets.push_back(0.0);
    }
    for (const auto& q : inequalities) {
        facet_normals.push_back(q.normal);
        facet_offsets.push_back(q.offset);
    }
    const int nf = static_cast<int>(facet_normals.size());

    Mat eq(1 + equalities.size(), n);
    Vec eq_rhs(1 + equalities.size());
    eq.row(0).setOnes();
    eq_rhs[0] = 1.0;
    for (size_t i = 0; i < equalities.size(); ++i) {
        eq.row(1 + i) = equalities[i].normal.transpose();
        eq_rhs[1 + i] = equalities[i].offset;
    }
    Eigen::ColPivHouseholderQR<Mat> eq_qr(eq.transpose());
    eq_qr.setThreshold(1e-10);
    const int s = static_cast<int>(eq_qr.rank());
    const int need = n - s;

    std::vector<Distribution> out;
    std::vector<int> pick(need);
    auto try_subset = [&](const std::vector<int>& subset) {
        Mat a(eq.rows() + need, n);
        Vec b(eq.rows() + need);
        a.topRows(eq.rows()) = eq;
        b.head(eq.rows()) = eq_rhs;
        for (int j = 0; j < need; ++j) {
            a.row(eq.rows() + j) = facet_normals[subset[j]].transpose();
            b[eq.rows() + j] = facet_offsets[subset[j]];
        }
        Eigen::ColPivHouseholderQR<Mat> qr(a);
        qr.setThreshold(1e-10);
        if (static_cast<int>(qr.rank()) < n) return;
        Vec p = qr.solve(b);
        if ((a * p - b).lpNorm<Eigen::Infinity>() > 1e-8) return;
        // Feasibility against every constraint.
        if ((p.array() < -1e-9).any()) return;
        for (int f = n; f < nf; ++f)
            if (facet_normals[f].dot(p) - facet_offsets[f] > 1e-9) return;
        for (const auto& v : out)
            if ((v.probs() - p).lpNorm<Eigen::Infinity>() < 1e-9) return;
        out.emplace_back(p.cwiseMax(0.0));
    };

    // Iterate over all size-`need` subsets of facets.
    if (need == 0) {
        try_subset({});
    } else {
        for (int i = 0; i < need; ++i) pick[i] = i;
        while (pick[0] <= nf - need) {
            try_subset(pick);
            int i = need - 1;
            while (i >= 0 && pick[i] == nf - need + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < need; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return out;
}

inline SimplexPolytope make_polytope(int n, std::vector<LinearConstraint> equalities,
                                     std::vector<LinearConstraint> inequalities) {
    SimplexPolytope poly;
    poly.dim_ambient = n;
    poly.vertices = enumerate_vertices(n, equalities, inequalities);
    poly.equalities = std::move(equalities);
    poly.inequalities = std::move(inequalities);
    return poly;
}

/// The level-set polytope {p in simplex : m^T p = 0}.
inline SimplexPolytope simplex_section(const LinearMapOnSimplex& m, double rank_tol = 1e-9) {
    const int n = m.n();
    if (n > 12) throw DimensionOverflow("simplex_section limited to n <= 12");
    // Keep one equality per independent column of m; dependent columns add
    // nothing and degrade the facet-subset rank computation.
    Mat k = kernel_basis(m, rank_tol);
    const int rank = n - static_cast<int>(k.cols());
    std::vector<LinearConstraint> eqs;
    Eigen::JacobiSVD<Mat> svd(m.matrix, Eigen::ComputeFullU);
    for (int i = 0; i < rank; ++i) {
        // Left singular vectors of m spanning range(m) give an equivalent,
        // well-conditioned equality system for m^T p = 0.
        eqs.push_back({svd.matrixU().col(i), 0.0});
    }
    return make_polytope(n, std::move(eqs), {});
}

}  // namespace elicit
