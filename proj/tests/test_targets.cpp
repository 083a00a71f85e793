#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "elicit/grid.hpp"
#include "elicit/targets.hpp"

using namespace elicit;

namespace {

TargetLoss ordinal3() {
    Mat l(3, 3);
    l << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    return TargetLoss(l);
}

TargetLoss abstain() {
    // Outcome order (+1, -1); reports (-1, abstain, +1).
    Mat l(3, 2);
    l << 1, 0, 0.25, 0.25, 0, 1;
    return TargetLoss(l, {"-1", "abstain", "+1"});
}

TargetLoss zero_one3() {
    Mat l(3, 3);
    l << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    return TargetLoss(l);
}

TargetLoss pair_b() {
    Mat l(2, 3);
    l << 1, 1, 1, 2, 1, 0;
    return TargetLoss(l);
}

bool has_vertex(const SimplexPolytope& poly, std::initializer_list<double> coords) {
    Vec target(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (double c : coords) target[i++] = c;
    for (const auto& v : poly.vertices)
        if ((v.probs() - target).lpNorm<Eigen::Infinity>() <= 1e-9) return true;
    return false;
}

}  // namespace

TEST_CASE("gamma") {
    CHECK(gamma(abstain(), Distribution{0.5, 0.5}) == std::vector<int>{1});
    CHECK(gamma(ordinal3(), Distribution{1, 0, 0}) == std::vector<int>{0});
    CHECK(gamma(pair_b(), Distribution{0.5, 0, 0.5}) == std::vector<int>{0, 1});
    CHECK(gamma(pair_b(), Distribution{0, 0.5, 0.5}) == std::vector<int>{1});
}

TEST_CASE("cells") {
    SUBCASE("abstain middle cell") {
        TargetCell c = cell(abstain(), 1);
        REQUIRE(c.polytope.vertices.size() == 2);
        CHECK(has_vertex(c.polytope, {0.25, 0.75}));
        CHECK(has_vertex(c.polytope, {0.75, 0.25}));
    }
    SUBCASE("ordinal middle cell is a quadrilateral") {
        TargetCell c = cell(ordinal3(), 1);
        CHECK(c.polytope.vertices.size() == 4);
        for (const auto& v : c.polytope.vertices) {
            CHECK(v[0] <= 0.5 + 1e-9);
            CHECK(v[2] <= 0.5 + 1e-9);
        }
    }
    SUBCASE("mode cell") {
        TargetCell c = cell(zero_one3(), 0);
        for (const auto& v : c.polytope.vertices)
            CHECK(v[0] >= std::max(v[1], v[2]) - 1e-9);
        CHECK(has_vertex(c.polytope, {1, 0, 0}));
    }
}

TEST_CASE("cells cover the simplex and match gamma") {
    for (const auto& t : {ordinal3(), zero_one3(), pair_b()}) {
        std::vector<TargetCell> cells;
        for (int r = 0; r < t.k(); ++r) cells.push_back(cell(t, r));
        for (const auto& c : cells) CHECK(c.polytope.affine_dim() == t.n() - 1);
        for_each_grid_point(t.n(), 100, [&](const Distribution& p) {
            int hits = 0;
            for (const auto& c : cells)
                if (c.polytope.satisfies(p.probs(), 1e-9)) ++hits;
            CHECK(hits >= 1);
        });
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> unif(0, 1);
        for (int trial = 0; trial < 1000; ++trial) {
            Vec raw(t.n());
            for (int i = 0; i < t.n(); ++i) raw[i] = -std::log(unif(rng) + 1e-12);
            Distribution p(raw / raw.sum());
            std::vector<int> g = gamma(t, p);
            for (int r = 0; r < t.k(); ++r) {
                const bool in_set = std::find(g.begin(), g.end(), r) != g.end();
                CHECK(in_set == cells[r].polytope.satisfies(p.probs(), 1e-7));
            }
        }
    }
}

TEST_CASE("non-redundancy") {
    CHECK(validate_nonredundant(ordinal3()).size() == 3);
    CHECK(validate_nonredundant(pair_b()).size() == 2);
    Mat dup(2, 2);
    dup << 1, 0, 1, 0;
    CHECK_THROWS_AS(validate_nonredundant(TargetLoss(dup)), RedundantReport);
}

TEST_CASE("orderability") {
    SUBCASE("ordinal path") {
        OrderabilityCertificate c = orderability(ordinal3());
        CHECK(c.ordered);
        const bool fwd = c.enumeration == std::vector<int>{0, 1, 2};
        const bool rev = c.enumeration == std::vector<int>{2, 1, 0};
        CHECK((fwd || rev));
        CHECK(c.intersection_edges.size() == 2);
    }
    SUBCASE("abstain path") {
        OrderabilityCertificate c = orderability(abstain());
        CHECK(c.ordered);
        CHECK(c.enumeration.size() == 3);
        CHECK(c.enumeration[1] == 1);  // abstain sits between the signs
    }
    SUBCASE("mode target is a triangle") {
        OrderabilityCertificate c = orderability(zero_one3());
        CHECK_FALSE(c.ordered);
        CHECK(c.intersection_edges.size() == 3);
    }
}

TEST_CASE("consecutive cells share a single-hyperplane section") {
    TargetLoss t = ordinal3();
    OrderabilityCertificate c = orderability(t);
    REQUIRE(c.ordered);
    for (size_t j = 0; j + 1 < c.enumeration.size(); ++j) {
        const int r1 = c.enumeration[j], r2 = c.enumeration[j + 1];
        Mat normal = (t.loss.row(r2) - t.loss.row(r1)).transpose();
        SimplexPolytope plane = simplex_section(LinearMapOnSimplex(normal));
        // Every point of the shared boundary lies on the hyperplane section.
        SimplexPolytope c1 = cell(t, r1).polytope;
        SimplexPolytope c2 = cell(t, r2).polytope;
        for (const auto& v : plane.vertices) {
            // Hyperplane section within the union of the two cells.
            CHECK((c1.satisfies(v.probs(), 1e-8) || c2.satisfies(v.probs(), 1e-8)));
        }
    }
}
