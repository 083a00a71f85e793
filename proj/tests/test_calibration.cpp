#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elicit/calibration.hpp"
#include "elicit/construct1d.hpp"

using namespace elicit;

namespace {

TargetLoss ordinal3() {
    Mat l(3, 3);
    l << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    return TargetLoss(l);
}

TargetLoss abstain() {
    Mat l(3, 2);
    l << 1, 0, 0.25, 0.25, 0, 1;
    return TargetLoss(l, {"-1", "abstain", "+1"});
}

TargetLoss pair_a() {
    Mat l(2, 3);
    l << 1, 1, 1, 2.5, 1.25, 0;
    return TargetLoss(l);
}

Vec u1(double x) {
    Vec u(1);
    u[0] = x;
    return u;
}

}  // namespace

TEST_CASE("kinked loss with the sign link has no calibration gap") {
    CuspLoss s;
    TargetLoss t = abstain();
    auto link = make_sign_abstain_link();
    CalibrationProbe probe = gap(s, t, *link, Distribution{0.5, 0.5});
    CHECK(probe.gamma_set == std::vector<int>{1});
    CHECK(probe.opt_value == doctest::Approx(1.0));
    CHECK(std::abs(probe.gap) <= 1e-6);
    CHECK(probe.violated);
    // Witnesses approach the abstain report from outside it.
    REQUIRE_FALSE(probe.witness.empty());
    for (const auto& w : probe.witness) {
        CHECK(link->apply(w.u) != 1);
        CHECK(w.loss == doctest::Approx(expected_loss(s, Distribution{0.5, 0.5}, w.u)));
    }
    CHECK(probe.witness.back().loss == doctest::Approx(probe.restricted_value));
}

TEST_CASE("kinked loss is calibrated away from the tie") {
    CuspLoss s;
    TargetLoss t = abstain();
    auto link = make_sign_abstain_link();
    CalibrationProbe probe = gap(s, t, *link, Distribution{0.9, 0.1});
    CHECK(probe.gamma_set == std::vector<int>{2});
    CHECK(probe.gap > 1e-2);
    CHECK_FALSE(probe.violated);
}

TEST_CASE("smoothing the kink restores a quarter gap") {
    SmoothCuspLoss s;
    TargetLoss t = abstain();
    IntervalLink link = build_interval_link(s, t, orderability(t));
    CalibrationProbe probe = gap(s, t, link, Distribution{0.5, 0.5});
    CHECK(probe.opt_value == doctest::Approx(1.0));
    CHECK(probe.gap == doctest::Approx(0.25).epsilon(1e-6));
    CHECK_FALSE(probe.violated);
}

TEST_CASE("rank-dropping quadratic triple fails against the separated pair") {
    CeLoss s;
    TargetLoss t = pair_a();
    auto link = make_level_set_link(&s, &t);
    CalibrationConfig cfg;
    cfg.grid_2d = 81;
    CalibrationProbe probe = gap(s, t, *link, Distribution{0.0, 0.5, 0.5}, cfg);
    CHECK(probe.gamma_set == std::vector<int>{1});
    CHECK(std::abs(probe.gap) <= 1e-6);
    CHECK(probe.violated);
    REQUIRE_FALSE(probe.witness.empty());
    // Replay: every witness is genuinely restricted and its loss is honest.
    Distribution p{0.0, 0.5, 0.5};
    for (const auto& w : probe.witness) {
        CHECK(w.report != 1);
        CHECK(link->apply(w.u) == w.report);
        CHECK(w.loss == doctest::Approx(expected_loss(s, p, w.u)));
    }
    // The approach ends next to the unrestricted optimum.
    CHECK(probe.witness.back().u.norm() <= 1e-3);
}

TEST_CASE("ordinal sweep is calibration-clean") {
    OrdinalHuberLoss s;
    TargetLoss t = ordinal3();
    IntervalLink link = build_interval_link(s, t, orderability(t));
    CalibrationConfig cfg;
    cfg.grid_1d = 801;
    SweepResult res = sweep(s, t, link, 0.25, cfg);
    CHECK(res.violations == 0);
    CHECK(res.min_interior_gap > 1e-3);
    CHECK(res.probes.size() >= 15);
    for (const auto& probe : res.probes) {
        if (probe.gamma_set.size() == static_cast<size_t>(t.k()))
            CHECK_FALSE(std::isfinite(probe.restricted_value));
    }
}

TEST_CASE("constructed surrogate sweeps clean") {
    TargetLoss t = abstain();
    Construction1d c = construct(t);
    CalibrationConfig cfg;
    cfg.grid_1d = 801;
    cfg.radius = 6.0;
    SweepResult res = sweep(c.surrogate, t, c.link, 0.25, cfg);
    CHECK(res.violations == 0);
    CHECK(res.min_interior_gap > 1e-3);
}

TEST_CASE("minimizing sequences") {
    UniversalLoss s(3);
    Distribution p{0.5, 0.3, 0.2};
    SUBCASE("convergent sequence agrees in loss and distance") {
        std::vector<Vec> seq;
        for (int t = 1; t <= 20; ++t) {
            Vec u(2);
            u << 0.5 + std::pow(2.0, -t), 0.3 - std::pow(2.0, -t);
            seq.push_back(u);
        }
        CHECK(minimizing_sequence_check(s, p, seq));
    }
    SUBCASE("optimal reports of perturbed distributions converge") {
        std::vector<Vec> seq;
        for (int t = 1; t <= 30; ++t) {
            const double e = 0.1 * std::pow(2.0, -t);
            Distribution q{0.5 + e, 0.3, 0.2 - e};
            seq.push_back(minimize(s, q).representative);
        }
        CHECK(minimizing_sequence_check(s, p, seq));
    }
    SUBCASE("divergent sequence agrees too") {
        std::vector<Vec> seq;
        for (int t = 1; t <= 10; ++t) seq.push_back(Vec::Constant(2, static_cast<double>(t)));
        CHECK(minimizing_sequence_check(s, p, seq));
    }
    SUBCASE("flat argmins count by interval distance") {
        HuberPairLoss hp;
        Distribution even{0.5, 0.5};
        CHECK(minimizing_sequence_check(hp, even, {u1(0.9)}));
        CHECK(minimizing_sequence_check(hp, even, {u1(1.2)}));
    }
}

TEST_CASE("search budget is enforced") {
    CuspLoss s;
    TargetLoss t = abstain();
    auto link = make_sign_abstain_link();
    CalibrationConfig cfg;
    cfg.budget = 10;
    CHECK_THROWS_AS(gap(s, t, *link, Distribution{0.5, 0.5}, cfg), SearchBudgetExceeded);
}

TEST_CASE("search dimension is capped") {
    UniversalLoss s(4);
    Mat l(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int y = 0; y < 4; ++y) l(r, y) = std::abs(y - r);
    TargetLoss t(l);
    FunctionLink link([](const Vec&) { return 0; }, "constant");
    CHECK_THROWS_AS(gap(s, t, link, Distribution{0.25, 0.25, 0.25, 0.25}), DimensionOverflow);
}
