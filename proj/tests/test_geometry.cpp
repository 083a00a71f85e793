#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "elicit/geometry.hpp"
#include "elicit/grid.hpp"

using namespace elicit;

namespace {

Mat rows3x2(double a1, double a2, double b1, double b2, double c1, double c2) {
    Mat m(3, 2);
    m << a1, a2, b1, b2, c1, c2;
    return m;
}

bool has_vertex(const SimplexPolytope& poly, std::initializer_list<double> coords, double tol) {
    Vec target(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (double c : coords) target[i++] = c;
    for (const auto& v : poly.vertices)
        if ((v.probs() - target).lpNorm<Eigen::Infinity>() <= tol) return true;
    return false;
}

}  // namespace

TEST_CASE("kernel dimensions") {
    // Rank-1 map: all rows proportional.
    Mat degenerate = rows3x2(1, 2, 1, 2, -1, -2);
    CHECK(kernel_basis(LinearMapOnSimplex(degenerate)).cols() == 2);

    CHECK(kernel_basis(LinearMapOnSimplex(Mat::Zero(3, 2))).cols() == 3);

    Mat generic = rows3x2(5, 6, 3, 4, 5, 0);
    CHECK(kernel_basis(LinearMapOnSimplex(generic)).cols() == 1);
}

TEST_CASE("kernel basis is orthonormal and annihilated") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        Mat m(4, 2);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = g(rng);
        Mat k = kernel_basis(LinearMapOnSimplex(m));
        CHECK((k.transpose() * k - Mat::Identity(k.cols(), k.cols())).norm() < 1e-12);
        CHECK((m.transpose() * k).norm() <= 1e-9 * m.norm());
    }
}

TEST_CASE("simplex sections") {
    SUBCASE("rank-1 map cuts a segment") {
        SimplexPolytope seg = simplex_section(LinearMapOnSimplex(rows3x2(1, 2, 1, 2, -1, -2)));
        REQUIRE(seg.vertices.size() == 2);
        CHECK(has_vertex(seg, {0.5, 0.0, 0.5}, 1e-9));
        CHECK(has_vertex(seg, {0.0, 0.5, 0.5}, 1e-9));
        CHECK(seg.affine_dim() == 1);
    }
    SUBCASE("single column") {
        Mat col(3, 1);
        col << 1, -1, -1;
        SimplexPolytope seg = simplex_section(LinearMapOnSimplex(col));
        REQUIRE(seg.vertices.size() == 2);
        CHECK(has_vertex(seg, {0.5, 0.5, 0.0}, 1e-9));
        CHECK(has_vertex(seg, {0.5, 0.0, 0.5}, 1e-9));
    }
    SUBCASE("trivial kernel is empty") {
        SimplexPolytope empty = simplex_section(LinearMapOnSimplex(Mat::Identity(3, 3)));
        CHECK(empty.empty());
    }
    SUBCASE("scale limit") {
        CHECK_THROWS_AS(simplex_section(LinearMapOnSimplex(Mat::Identity(13, 2))),
                        DimensionOverflow);
    }
}

TEST_CASE("section vertices satisfy defining system") {
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 30; ++trial) {
        Mat m(3, 1);
        m << g(rng), g(rng), g(rng);
        SimplexPolytope poly = simplex_section(LinearMapOnSimplex(m));
        for (const auto& v : poly.vertices) {
            CHECK(std::abs(v.probs().sum() - 1.0) <= 1e-9);
            CHECK(v.probs().minCoeff() >= -1e-12);
            CHECK(std::abs(m.col(0).dot(v.probs())) <= 1e-8);
        }
    }
}

TEST_CASE("grid oracle agreement for a rational section") {
    Mat col(3, 1);
    col << 1, -1, -1;  // p1 = 1/2
    LinearMapOnSimplex m(col);
    SimplexPolytope hull = simplex_section(m);
    for_each_grid_point(3, 200, [&](const Distribution& p) {
        const double resid = std::abs(m.apply_transpose(p.probs())[0]);
        const double dist = distance_to_polytope(hull, p.probs());
        if (resid <= 1e-9) CHECK(dist <= 1e-6);
        if (dist > 1e-6) CHECK(resid > 1e-9);
    });
}

TEST_CASE("strict feasibility LP") {
    SUBCASE("open simplex") {
        std::vector<LinearConstraint> pos;
        for (int i = 0; i < 3; ++i) {
            Vec e = Vec::Zero(3);
            e[i] = -1;
            pos.push_back({e, 0.0});
        }
        auto p = lp_feasible_strict(3, {}, pos, 1e-6);
        REQUIRE(p);
        CHECK(p->probs().minCoeff() > 1e-6);
    }
    SUBCASE("equality plus tail mass") {
        Vec eq(3);
        eq << 1, -1, 0;  // p1 = p2
        Vec tail(3);
        tail << 0, 0, -1;  // p3 >= 0.9
        auto p = lp_feasible_strict(3, {{eq, 0.0}}, {{tail, -0.9}}, 1e-6);
        REQUIRE(p);
        CHECK(std::abs((*p)[0] - (*p)[1]) <= 1e-9);
        CHECK((*p)[2] >= 0.9);
    }
    SUBCASE("contradiction") {
        Vec e1(3);
        e1 << -1, 0, 0;  // p1 >= 0.6
        Vec e2(3);
        e2 << 1, 0, 0;  // p1 <= 0.4
        CHECK_FALSE(lp_feasible_strict(3, {}, {{e1, -0.6}, {e2, 0.4}}, 1e-6));
    }
}

TEST_CASE("hausdorff distance") {
    SimplexPolytope a = simplex_section(LinearMapOnSimplex(rows3x2(1, 2, 1, 2, -1, -2)));
    CHECK(hausdorff_distance(a, a) <= 1e-12);
    Mat col(3, 1);
    col << 1, -1, -1;
    SimplexPolytope b = simplex_section(LinearMapOnSimplex(col));
    CHECK(hausdorff_distance(a, b) > 0.1);
}
