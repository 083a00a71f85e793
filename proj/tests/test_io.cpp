#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>

#include "elicit/io.hpp"

using namespace elicit;

TEST_CASE("number parsing") {
    CHECK(parse_number(json(0.25)) == doctest::Approx(0.25));
    CHECK(parse_number(json(3)) == doctest::Approx(3.0));
    CHECK(parse_number(json("1/4")) == doctest::Approx(0.25));
    CHECK(parse_number(json("-5/3")) == doctest::Approx(-5.0 / 3.0));
    CHECK(parse_number(json("0.125")) == doctest::Approx(0.125));
    CHECK_THROWS_AS(parse_number(json(nullptr)), std::invalid_argument);
}

TEST_CASE("target json round trip") {
    json j = {{"n", 2},
              {"k", 3},
              {"loss", {{1, 0}, {"1/4", "1/4"}, {0, 1}}},
              {"labels", {"-1", "abstain", "+1"}}};
    TargetLoss t = target_from_json(j);
    CHECK(t.n() == 2);
    CHECK(t.k() == 3);
    CHECK(t.loss(1, 0) == doctest::Approx(0.25));
    CHECK(t.labels[1] == "abstain");

    TargetLoss back = target_from_json(target_to_json(t));
    CHECK((back.loss - t.loss).norm() <= 1e-15);
    CHECK(back.labels == t.labels);
}

TEST_CASE("target validation errors") {
    json bad_rows = {{"n", 2}, {"k", 3}, {"loss", {{1, 0}, {0, 1}}}};
    CHECK_THROWS_AS(target_from_json(bad_rows), std::invalid_argument);
    json bad_cols = {{"n", 2}, {"k", 2}, {"loss", {{1, 0, 0}, {0, 1, 0}}}};
    CHECK_THROWS_AS(target_from_json(bad_cols), std::invalid_argument);
}

TEST_CASE("surrogate loading") {
    SUBCASE("builtin names") {
        CHECK(surrogate_from_json(json{{"builtin", "cusp"}})->name() == "cusp");
        CHECK(surrogate_from_json(json{{"builtin", "ce"}})->n() == 3);
        auto u = surrogate_from_json(json{{"builtin", "universal"}, {"params", {{"n", 5}}}});
        CHECK(u->d() == 4);
        CHECK_THROWS_AS(surrogate_from_json(json{{"builtin", "unknown"}}),
                        std::invalid_argument);
    }
    SUBCASE("bare names and inline json") {
        CHECK(load_surrogate("ordinal_huber")->name() == "ordinal_huber");
        auto s = load_surrogate(R"({"builtin": "huber_pair"})");
        CHECK(s->name() == "huber_pair");
    }
    SUBCASE("piecewise round trip") {
        std::vector<double> knots{1.0, 2.0, 3.0};
        std::vector<Vec> grads;
        Vec a(2), b(2), c(2);
        a << -2, -1;
        b << 0.5, -0.5;
        c << 1, 2;
        grads = {a, b, c};
        PiecewiseQuad1d s(knots, grads, 1.0);
        auto back = surrogate_from_json(surrogate_to_json(s));
        Vec u(1);
        for (double x : {-1.0, 1.5, 2.0, 2.7, 5.0}) {
            u[0] = x;
            CHECK((back->value(u) - s.value(u)).norm() <= 1e-12);
            CHECK((back->jacobian(u) - s.jacobian(u)).norm() <= 1e-12);
        }
    }
}

TEST_CASE("verdict serialization") {
    ElicitationVerdict v;
    v.claim = ElicitationVerdict::Claim::StrongIE;
    v.violated = true;
    v.resolution = 0.1;
    ViolationCertificate cert;
    cert.u = Vec::Zero(1);
    cert.p = Vec::Constant(3, 1.0 / 3);
    cert.q = Vec::Constant(3, 1.0 / 3);
    cert.gamma_p = {0, 1};
    cert.gamma_q = {2};
    v.certificate = cert;
    json j = verdict_to_json(v);
    CHECK(j["claim"] == "sie");
    CHECK(j["violated"] == true);
    CHECK(j["certificate"]["gamma_p"] == json::array({0, 1}));
    CHECK(j["certificate"]["p"].size() == 3);
}

TEST_CASE("interval link round trip") {
    IntervalLink link({{-1.0, -0.5, 1}, {2.0, 2.0, 0}}, {2, 1, 0}, false);
    IntervalLink back = interval_link_from_json(interval_link_to_json(link));
    CHECK(back.region_reports() == link.region_reports());
    CHECK(back.ascending() == link.ascending());
    Vec u(1);
    for (double x = -3; x <= 4; x += 0.05) {
        u[0] = x;
        CHECK(back.apply(u) == link.apply(u));
    }
}

TEST_CASE("projection link serialization") {
    ProjectionLink link({Vec::Zero(2), Vec::Ones(2)}, {0, 1});
    json j = projection_link_to_json(link);
    CHECK(j["type"] == "projection");
    CHECK(j["reports"].size() == 2);
    CHECK(j["labels"] == json::array({0, 1}));
}

TEST_CASE("probe serialization") {
    CalibrationProbe probe;
    probe.p = Vec::Constant(2, 0.5);
    probe.gamma_set = {1};
    probe.opt_value = 1.0;
    probe.restricted_value = 1.25;
    probe.gap = 0.25;
    probe.witness.push_back({Vec::Constant(1, 0.5), 2, 1.25});
    json j = probe_to_json(probe);
    CHECK(j["gap"] == doctest::Approx(0.25));
    CHECK(j["witness_sequence"].size() == 1);
    CHECK(j["witness_sequence"][0]["report"] == 2);
}

TEST_CASE("sweep csv") {
    SweepResult res;
    CalibrationProbe probe;
    probe.p = Vec::Constant(3, 1.0 / 3);
    probe.gamma_set = {0, 2};
    probe.opt_value = 1.0;
    probe.restricted_value = 1.5;
    probe.gap = 0.5;
    res.probes.push_back(probe);
    const std::string csv = sweep_to_csv(res, 3);
    CHECK(csv.rfind("p1,p2,p3,gamma_set,opt_value,restricted_value,gap,violated\n", 0) == 0);
    CHECK(csv.find("0|2") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("file round trip") {
    const std::string path = "io_test_tmp.json";
    write_file(path, target_to_json(TargetLoss(Mat::Identity(2, 2))).dump());
    TargetLoss t = load_target(path);
    CHECK(t.n() == 2);
    CHECK(t.loss(0, 0) == doctest::Approx(1.0));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_target("missing_file.json"), std::invalid_argument);
}
