#include <exception>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elicit/calibration.hpp"
#include "elicit/construct1d.hpp"
#include "elicit/elicitation.hpp"
#include "elicit/io.hpp"
#include "elicit/links.hpp"
#include "elicit/svg.hpp"

namespace {

using namespace elicit;

// Exit codes: 0 ok / no violation, 1 violation found, 2 invalid input,
// 3 redundant report, 4 not orderable, 5 numeric failure.

struct Options {
    std::string target_path;
    std::string surrogate_spec;
    std::string link_kind = "auto";
    std::string p_spec;
    std::string claim = "ie";
    double resolution = 0.05;
    double radius = 10.0;
    double tie_tol = 1e-9;
    double gap_tol = 1e-6;
    unsigned seed = 7;
    std::string out_path;
    std::string svg_path;
};

void emit(const Options& opt, const json& j) {
    json out = j;
    out["seed"] = opt.seed;
    if (opt.out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        write_file(opt.out_path, out.dump(2) + "\n");
}

Distribution parse_distribution(const std::string& spec) {
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(parse_number(json(tok)));
    Vec p(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) p[i] = vals[i];
    return Distribution(p);
}

AtlasConfig atlas_config(const Options& opt) {
    AtlasConfig cfg;
    cfg.tie_tol = opt.tie_tol;
    cfg.opt.seed = opt.seed;
    return cfg;
}

CalibrationConfig calib_config(const Options& opt) {
    CalibrationConfig cfg;
    cfg.radius = opt.radius;
    cfg.gap_tol = opt.gap_tol;
    cfg.tie_tol = opt.tie_tol;
    cfg.opt.seed = opt.seed;
    return cfg;
}

std::shared_ptr<LinkFunction> make_link(const Options& opt, const SurrogateLoss& s,
                                        const TargetLoss& t, json& link_json) {
    std::string kind = opt.link_kind;
    if (kind == "auto") kind = s.d() == 1 ? "interval" : "projection";
    if (kind == "interval") {
        auto link = std::make_shared<IntervalLink>(
            build_interval_link(s, t, orderability(t), atlas_config(opt).opt));
        link_json = interval_link_to_json(*link);
        return link;
    }
    if (kind == "projection") {
        ReportAtlas atlas = build_atlas(s, t, opt.resolution, atlas_config(opt));
        auto link = std::make_shared<ProjectionLink>(
            build_projection_link(t, atlas, check_strong_ie(atlas, t)));
        link_json = projection_link_to_json(*link);
        return link;
    }
    if (kind == "level-set") {
        link_json = json{{"type", "level_set"}};
        return make_level_set_link(&s, &t, 1e-7);
    }
    if (kind == "sign-abstain") {
        link_json = json{{"type", "sign_abstain"}};
        return make_sign_abstain_link();
    }
    throw std::invalid_argument("unknown link kind " + kind);
}

int cmd_analyze_target(const Options& opt) {
    TargetLoss t = load_target(opt.target_path);
    auto witnesses = validate_nonredundant(t);
    OrderabilityCertificate cert = orderability(t);
    json cells = json::array();
    for (int r = 0; r < t.k(); ++r) {
        TargetCell c = cell(t, r);
        json verts = json::array();
        for (const auto& v : c.polytope.vertices) verts.push_back(vec_to_json(v.probs()));
        cells.push_back({{"report", r},
                         {"label", t.labels[r]},
                         {"vertices", verts},
                         {"affine_dim", c.polytope.affine_dim()},
                         {"witness", vec_to_json(witnesses[r].probs())}});
    }
    json edges = json::array();
    for (const auto& [a, b] : cert.intersection_edges) edges.push_back({a, b});
    json report{{"target", target_to_json(t)},
                {"cells", cells},
                {"orderable", cert.ordered},
                {"enumeration", cert.enumeration},
                {"intersection_edges", edges}};
    emit(opt, report);
    if (!opt.svg_path.empty()) write_file(opt.svg_path, render_target(t));
    return 0;
}

int cmd_check(const Options& opt) {
    TargetLoss t = load_target(opt.target_path);
    validate_nonredundant(t);
    auto s = load_surrogate(opt.surrogate_spec);
    ReportAtlas atlas = build_atlas(*s, t, opt.resolution, atlas_config(opt));
    ElicitationVerdict v =
        opt.claim == "sie" ? check_strong_ie(atlas, t) : check_ie(atlas, t);
    emit(opt, verdict_to_json(v));
    return v.violated ? 1 : 0;
}

int cmd_construct_1d(const Options& opt) {
    TargetLoss t = load_target(opt.target_path);
    Construction1d c = construct(t);
    json certs = json::array();
    for (const auto& chk : c.certificates)
        certs.push_back({{"position", chk.position},
                         {"left_report", chk.left_report},
                         {"right_report", chk.right_report},
                         {"max_vertex_residual", chk.max_vertex_residual},
                         {"left_sign", chk.left_sign},
                         {"right_sign", chk.right_sign},
                         {"pass", chk.pass}});
    emit(opt, json{{"surrogate", surrogate_to_json(c.surrogate)},
                   {"link", interval_link_to_json(c.link)},
                   {"enumeration", c.enumeration},
                   {"betas", c.betas},
                   {"boundary_certificates", certs}});
    return 0;
}

int cmd_falsify(const Options& opt) {
    TargetLoss t = load_target(opt.target_path);
    auto s = load_surrogate(opt.surrogate_spec);
    json link_json;
    auto link = make_link(opt, *s, t, link_json);
    Distribution p = parse_distribution(opt.p_spec);
    CalibrationProbe probe = gap(*s, t, *link, p, calib_config(opt));
    json out = probe_to_json(probe);
    out["link"] = link_json;
    emit(opt, out);
    return probe.violated ? 1 : 0;
}

int cmd_sweep(const Options& opt) {
    TargetLoss t = load_target(opt.target_path);
    auto s = load_surrogate(opt.surrogate_spec);
    json link_json;
    auto link = make_link(opt, *s, t, link_json);
    SweepResult res = sweep(*s, t, *link, opt.resolution, calib_config(opt));
    const std::string csv = sweep_to_csv(res, t.n());
    if (opt.out_path.empty())
        std::cout << csv;
    else
        write_file(opt.out_path, csv);
    std::cerr << "min interior gap " << res.min_interior_gap << ", violations " << res.violations
              << "\n";
    return res.violations > 0 ? 1 : 0;
}

int cmd_render(const Options& opt) {
    TargetLoss t = load_target(opt.target_path);
    std::string svg;
    if (!opt.surrogate_spec.empty()) {
        auto s = load_surrogate(opt.surrogate_spec);
        ReportAtlas atlas = build_atlas(*s, t, opt.resolution, atlas_config(opt));
        svg = render_target(t, &atlas);
    } else {
        svg = render_target(t);
    }
    write_file(opt.svg_path.empty() ? (opt.out_path.empty() ? "out.svg" : opt.out_path)
                                    : opt.svg_path,
               svg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surrogate loss / link calibration toolkit"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd, bool needs_surrogate) {
        cmd->add_option("--target", opt.target_path, "target loss JSON file")->required();
        if (needs_surrogate) cmd->add_option("--surrogate", opt.surrogate_spec,
                                             "builtin name, JSON file, or inline JSON");
        cmd->add_option("--resolution", opt.resolution, "simplex lattice spacing");
        cmd->add_option("--radius", opt.radius, "search box radius");
        cmd->add_option("--tie-tol", opt.tie_tol, "target tie tolerance");
        cmd->add_option("--gap-tol", opt.gap_tol, "violation gap threshold");
        cmd->add_option("--seed", opt.seed, "multi-start RNG seed");
        cmd->add_option("--out", opt.out_path, "output file (stdout when omitted)");
        cmd->add_option("--svg", opt.svg_path, "SVG output path (n = 3 only)");
    };

    auto* analyze = app.add_subcommand("analyze-target", "cells, redundancy, orderability");
    add_common(analyze, false);
    auto* check = app.add_subcommand("check", "corner-criterion IE / strong-IE scan");
    add_common(check, true);
    check->add_option("--claim", opt.claim, "ie or sie")->check(CLI::IsMember({"ie", "sie"}));
    auto* construct = app.add_subcommand("construct-1d", "build a 1-d surrogate and link");
    add_common(construct, false);
    auto* falsify = app.add_subcommand("falsify", "calibration gap probe at one distribution");
    add_common(falsify, true);
    falsify->add_option("--p", opt.p_spec, "distribution, comma separated")->required();
    falsify->add_option("--link", opt.link_kind,
                        "auto|interval|projection|level-set|sign-abstain");
    auto* sweep_cmd = app.add_subcommand("sweep", "calibration gaps over the simplex, CSV");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--link", opt.link_kind,
                          "auto|interval|projection|level-set|sign-abstain");
    auto* render = app.add_subcommand("render", "SVG diagram of cells and level sets");
    add_common(render, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze_target(opt);
        if (check->parsed()) return cmd_check(opt);
        if (construct->parsed()) return cmd_construct_1d(opt);
        if (falsify->parsed()) return cmd_falsify(opt);
        if (sweep_cmd->parsed()) return cmd_sweep(opt);
        if (render->parsed()) return cmd_render(opt);
    } catch (const RedundantReport& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NotOrderable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
    return 2;
}
