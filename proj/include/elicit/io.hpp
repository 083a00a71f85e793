#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "elicit/calibration.hpp"
#include "elicit/construct1d.hpp"
#include "elicit/elicitation.hpp"
#include "elicit/links.hpp"
#include "elicit/surrogates.hpp"
#include "elicit/targets.hpp"

namespace elicit {

using nlohmann::json;

/// Numbers may arrive as JSON numbers or as strings: decimals or fractions
/// such as "1/4".
inline double parse_number(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        const auto slash = s.find('/');
        if (slash != std::string::npos)
            return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
        return std::stod(s);
    }
    throw std::invalid_argument("expected a number or numeric string");
}

inline TargetLoss target_from_json(const json& j) {
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    const auto& rows = j.at("loss");
    if (static_cast<int>(rows.size()) != k)
        throw std::invalid_argument("loss row count differs from k");
    Mat loss(k, n);
    for (int r = 0; r < k; ++r) {
        if (static_cast<int>(rows[r].size()) != n)
            throw std::invalid_argument("loss column count differs from n");
        for (int y = 0; y < n; ++y) loss(r, y) = parse_number(rows[r][y]);
    }
    std::vector<std::string> labels;
    if (j.contains("labels"))
        for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
    return TargetLoss(loss, labels);
}

inline json target_to_json(const TargetLoss& t) {
    json rows = json::array();
    for (int r = 0; r < t.k(); ++r) {
        json row = json::array();
        for (int y = 0; y < t.n(); ++y) row.push_back(t.loss(r, y));
        rows.push_back(row);
    }
    return json{{"n", t.n()}, {"k", t.k()}, {"loss", rows}, {"labels", t.labels}};
}

inline TargetLoss load_target(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open target file " + path);
    json j;
    in >> j;
    return target_from_json(j);
}

inline std::unique_ptr<SurrogateLoss> surrogate_from_json(const json& j) {
    if (j.contains("piecewise_quadratic_1d")) {
        const auto& pj = j.at("piecewise_quadratic_1d");
        std::vector<double> knots;
        for (const auto& x : pj.at("knots")) knots.push_back(parse_number(x));
        std::vector<Vec> grads;
        for (const auto& row : pj.at("slopes")) {
            Vec g(static_cast<Eigen::Index>(row.size()));
            for (size_t i = 0; i < row.size(); ++i) g[i] = parse_number(row[i]);
            grads.push_back(g);
        }
        double tail = pj.contains("tail_slope") ? parse_number(pj.at("tail_slope")) : 1.0;
        return std::make_unique<PiecewiseQuad1d>(knots, grads, tail);
    }
    const std::string name = j.at("builtin").get<std::string>();
    if (name == "cusp") return std::make_unique<CuspLoss>();
    if (name == "smooth_cusp") return std::make_unique<SmoothCuspLoss>();
    if (name == "ce") return std::make_unique<CeLoss>();
    if (name == "ordinal_huber") return std::make_unique<OrdinalHuberLoss>();
    if (name == "huber_pair") return std::make_unique<HuberPairLoss>();
    if (name == "universal") {
        int n = 3;
        if (j.contains("params") && j.at("params").contains("n"))
            n = j.at("params").at("n").get<int>();
        return std::make_unique<UniversalLoss>(n);
    }
    throw std::invalid_argument("unknown builtin surrogate " + name);
}

inline json surrogate_to_json(const PiecewiseQuad1d& s) {
    json knots = json::array(), slopes = json::array();
    for (double x : s.knots()) knots.push_back(x);
    for (const auto& g : s.gradients()) {
        json row = json::array();
        for (Eigen::Index i = 0; i < g.size(); ++i) row.push_back(g[i]);
        slopes.push_back(row);
    }
    return json{{"piecewise_quadratic_1d",
                 {{"knots", knots}, {"slopes", slopes}, {"tail_slope", s.tail_slope()}}}};
}

inline std::unique_ptr<SurrogateLoss> load_surrogate(const std::string& spec) {
    // Accepts inline JSON, a file path, or a bare builtin name.
    if (!spec.empty() && (spec.front() == '{' || spec.front() == '['))
        return surrogate_from_json(json::parse(spec));
    std::ifstream in(spec);
    if (in) {
        json j;
        in >> j;
        return surrogate_from_json(j);
    }
    return surrogate_from_json(json{{"builtin", spec}});
}

inline json vec_to_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

inline json verdict_to_json(const ElicitationVerdict& v) {
    json j{{"claim", v.claim == ElicitationVerdict::Claim::IE ? "ie" : "sie"},
           {"violated", v.violated},
           {"resolution", v.resolution}};
    if (v.certificate) {
        const auto& c = *v.certificate;
        j["certificate"] = {{"u", vec_to_json(c.u)},     {"p", vec_to_json(c.p)},
                            {"q", vec_to_json(c.q)},     {"gamma_p", c.gamma_p},
                            {"gamma_q", c.gamma_q}};
    }
    return j;
}

inline json interval_link_to_json(const IntervalLink& link) {
    json bounds = json::array();
    for (const auto& b : link.boundaries())
        bounds.push_back({{"lo", b.lo}, {"hi", b.hi}, {"report", b.report}});
    return json{{"type", "interval"},
                {"boundaries", bounds},
                {"region_reports", link.region_reports()},
                {"ascending", link.ascending()}};
}

inline IntervalLink interval_link_from_json(const json& j) {
    std::vector<IntervalLink::Boundary> bounds;
    for (const auto& b : j.at("boundaries"))
        bounds.push_back({parse_number(b.at("lo")), parse_number(b.at("hi")),
                          b.at("report").get<int>()});
    return IntervalLink(bounds, j.at("region_reports").get<std::vector<int>>(),
                        j.at("ascending").get<bool>());
}

inline json projection_link_to_json(const ProjectionLink& link) {
    json reports = json::array();
    for (const auto& u : link.reports()) reports.push_back(vec_to_json(u));
    return json{{"type", "projection"}, {"reports", reports}, {"labels", link.labels()}};
}

inline json probe_to_json(const CalibrationProbe& probe) {
    json witness = json::array();
    for (const auto& w : probe.witness)
        witness.push_back({{"u", vec_to_json(w.u)}, {"report", w.report}, {"loss", w.loss}});
    return json{{"p", vec_to_json(probe.p)},
                {"gamma_set", probe.gamma_set},
                {"opt_value", probe.opt_value},
                {"restricted_value", probe.restricted_value},
                {"gap", probe.gap},
                {"violated", probe.violated},
                {"witness_sequence", witness}};
}

inline std::string sweep_to_csv(const SweepResult& sweep, int n) {
    std::ostringstream out;
    for (int i = 0; i < n; ++i) out << "p" << (i + 1) << ",";
    out << "gamma_set,opt_value,restricted_value,gap,violated\n";
    out.precision(12);
    for (const auto& probe : sweep.probes) {
        for (int i = 0; i < n; ++i) out << probe.p[i] << ",";
        for (size_t i = 0; i < probe.gamma_set.size(); ++i) {
            if (i) out << "|";
            out << probe.gamma_set[i];
        }
        out << "," << probe.opt_value << "," << probe.restricted_value << "," << probe.gap << ","
            << (probe.violated ? 1 : 0) << "\n";
    }
    return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
}

}  // namespace elicit
