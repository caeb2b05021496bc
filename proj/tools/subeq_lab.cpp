// subeq-lab: command-line front end for the meromorphic-solution pipeline.
//
// Usage: subeq-lab <command> [flags], commands
//   expand | indices | residue-conditions | fit | classify | solve | verify | pipeline
// Exit codes: 0 ok, 1 verification/build failed, 2 input error.
// Set SUBEQ_LAB_LOG=1 (or higher) for progress diagnostics on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "subeqlab/pipeline.hpp"

namespace {

using namespace subeqlab;
using nlohmann::ordered_json;

int g_log_level = 0;

void log_stage(const std::string& msg) {
    if (g_log_level >= 1) std::cerr << "[subeq-lab] " << msg << "\n";
}

struct RawInput {
    std::string a = "1";
    std::string c1 = "0", c2 = "0", c4 = "0", c5 = "0", c6 = "0", c7 = "0";
    std::string json_file;
    std::string e0;
    std::string z0 = "0";
    int depth = 24;
    std::vector<int> degrees = {1, 2, 3};
    int kmax = 4;
    int nmax = 10;
    double tol = 1e-9;
    int points = 20;
    std::uint64_t seed = 1;
    // fit-specific
    int degree = 3;
    std::vector<int> branches;
    int extra_orders = 4;
    bool text = false;
};

void add_common(CLI::App* cmd, RawInput& in) {
    cmd->add_option("--a", in.a, "residue a (exact, e.g. '2', '1/3', '1 + 2w')");
    cmd->add_option("--c1", in.c1, "coefficient c1 (exact)");
    cmd->add_option("--c2", in.c2, "coefficient c2 (exact)");
    cmd->add_option("--c4", in.c4, "coefficient c4 (exact)");
    cmd->add_option("--c5", in.c5, "coefficient c5 (exact)");
    cmd->add_option("--c6", in.c6, "coefficient c6 (exact)");
    cmd->add_option("--c7", in.c7, "coefficient c7 (exact)");
    cmd->add_option("--json", in.json_file, "JSON input file (keys a, c1, ..., c7, depth, ...)");
    cmd->add_option("--depth", in.depth, "Laurent expansion depth");
    cmd->add_option("--tol", in.tol, "verification tolerance");
    cmd->add_option("--points", in.points, "verification sample points");
    cmd->add_option("--seed", in.seed, "sampling seed");
}

cd parse_complex(const std::string& s) {
    std::istringstream is(s);
    double re = 0, im = 0;
    char comma = 0;
    if (!(is >> re)) throw parse_error("cannot parse complex number: " + s);
    if (is >> comma) {
        if (comma != ',' || !(is >> im)) throw parse_error("cannot parse complex number: " + s);
    }
    return {re, im};
}

PipelineConfig parse_input(const RawInput& in) {
    RawInput merged = in;
    if (!in.json_file.empty()) {
        std::ifstream f(in.json_file);
        if (!f) throw parse_error("cannot open JSON input file: " + in.json_file);
        ordered_json j = ordered_json::parse(f);
        auto str = [&](const char* key, std::string& out) {
            if (j.contains(key)) out = j.at(key).get<std::string>();
        };
        str("a", merged.a);
        str("c1", merged.c1);
        str("c2", merged.c2);
        str("c4", merged.c4);
        str("c5", merged.c5);
        str("c6", merged.c6);
        str("c7", merged.c7);
        str("e0", merged.e0);
        str("z0", merged.z0);
        if (j.contains("depth")) merged.depth = j.at("depth").get<int>();
        if (j.contains("degrees")) merged.degrees = j.at("degrees").get<std::vector<int>>();
        if (j.contains("kmax")) merged.kmax = j.at("kmax").get<int>();
        if (j.contains("nmax")) merged.nmax = j.at("nmax").get<int>();
        if (j.contains("tol")) merged.tol = j.at("tol").get<double>();
        if (j.contains("points")) merged.points = j.at("points").get<int>();
        if (j.contains("seed")) merged.seed = j.at("seed").get<std::uint64_t>();
    }

    PipelineConfig cfg;
    cfg.ode.a = parse_cyclo(merged.a);
    cfg.ode.c1 = parse_cyclo(merged.c1);
    cfg.ode.c2 = parse_cyclo(merged.c2);
    cfg.ode.c4 = parse_cyclo(merged.c4);
    cfg.ode.c5 = parse_cyclo(merged.c5);
    cfg.ode.c6 = parse_cyclo(merged.c6);
    cfg.ode.c7 = parse_cyclo(merged.c7);
    cfg.depth = merged.depth;
    cfg.degrees = merged.degrees;
    cfg.kmax = merged.kmax;
    cfg.nmax = merged.nmax;
    cfg.tol = merged.tol;
    cfg.points = merged.points;
    cfg.seed = merged.seed;
    if (!merged.e0.empty()) cfg.e0 = parse_cyclo(merged.e0);
    cfg.z0 = parse_complex(merged.z0);
    cfg.validate();
    return cfg;
}

void print_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_expand(const PipelineConfig& cfg) {
    log_stage("expanding Laurent branches");
    ordered_json out;
    out["schema"] = 1;
    out["ode"] = json_ode(cfg.ode);
    ordered_json branches = ordered_json::array();
    for (const Cyclo& r : cfg.ode.residues())
        branches.push_back(ordered_json{{"residue", json_exact(r)},
                                        {"series", json_series(expand_laurent(cfg.ode, r, cfg.depth))}});
    out["branches"] = std::move(branches);
    print_json(out);
    return 0;
}

int cmd_indices(const PipelineConfig& cfg) {
    log_stage("computing indicial polynomial and Fuchs indices");
    Poly p = indicial_polynomial(cfg.ode, cfg.ode.a);
    ordered_json out;
    out["schema"] = 1;
    out["ode"] = json_ode(cfg.ode);
    out["indicial"] = json_poly(p);
    out["fuchs"] = json_fuchs(check_fuchs_indices(p));
    print_json(out);
    return 0;
}

int cmd_conditions(const PipelineConfig& cfg) {
    log_stage("enumerating residue conditions");
    ordered_json out;
    out["schema"] = 1;
    out["ode"] = json_ode(cfg.ode);
    out["kmax"] = cfg.kmax;
    out["nmax"] = cfg.nmax;
    out["violated"] = json_conditions(enumerate_conditions(cfg.ode, cfg.kmax, cfg.nmax));
    EllipticFamily f = match_elliptic_families(cfg.ode);
    out["elliptic_family"] = f == EllipticFamily::A   ? "A"
                             : f == EllipticFamily::B ? "B"
                             : f == EllipticFamily::C ? "C"
                                                      : "none";
    print_json(out);
    return 0;
}

int cmd_fit(const PipelineConfig& cfg, const RawInput& in) {
    log_stage("fitting degree-" + std::to_string(in.degree) + " subequation");
    FitReport rep;
    if (in.branches.empty()) {
        rep = fit_subequation_auto(cfg.ode, in.degree, in.extra_orders, cfg.depth);
    } else {
        rep = fit_subequation(cfg.ode, in.degree, in.branches, in.extra_orders, cfg.depth);
    }
    ordered_json out;
    out["schema"] = 1;
    out["ode"] = json_ode(cfg.ode);
    out["fit"] = json_fit(rep);
    print_json(out);
    return 0;
}

int cmd_classify(const PipelineConfig& cfg) {
    log_stage("classifying against the solution families");
    ordered_json out;
    out["schema"] = 1;
    out["ode"] = json_ode(cfg.ode);
    out["classification"] = json_classification(classify_family(cfg.ode));
    print_json(out);
    return 0;
}

int cmd_solve(const PipelineConfig& cfg, bool verify) {
    log_stage(verify ? "building and verifying closed form" : "building closed form");
    Classification cls = classify_family(cfg.ode);
    ordered_json out;
    out["schema"] = 1;
    out["ode"] = json_ode(cfg.ode);
    out["classification"] = json_classification(cls);
    if (cls.primary == Family::none) {
        out["closed_form"] = nullptr;
        out["note"] = "no meromorphic solution family matched";
        print_json(out);
        return 0;
    }
    BuildOptions opts;
    opts.e0 = cfg.e0;
    opts.z0 = cfg.z0;
    opts.tol = cfg.tol;
    opts.points = cfg.points;
    opts.seed = cfg.seed;
    try {
        ClosedForm cf = build_closed_form(cfg.ode, cls, std::nullopt, opts);
        out["closed_form"] = json_closed_form(cf);
        if (verify) {
            std::vector<cd> pts = sample_points(cf, cfg.points, cfg.seed);
            VerificationReport rep = verify_numeric(cf, cfg.ode, nullptr, pts, cfg.tol);
            out["verification"] = json_verification(rep);
            print_json(out);
            return rep.passed ? 0 : 1;
        }
        print_json(out);
        return 0;
    } catch (const build_error& e) {
        out["build_failure"] = e.what();
        print_json(out);
        return 1;
    }
}

int cmd_pipeline(const PipelineConfig& cfg, bool text) {
    log_stage("running full pipeline");
    PipelineReport rep = run_pipeline(cfg);
    std::cout << emit_report(rep, text ? ReportFormat::text : ReportFormat::json);
    return rep.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* lvl = std::getenv("SUBEQ_LAB_LOG")) g_log_level = std::atoi(lvl);

    CLI::App app{"subeq-lab: meromorphic solutions of c0 u''' + 6u^4 + c1 u'' + c2 u u' + c4 u' + c5 u^2 + c6 u + c7 = 0"};
    app.require_subcommand(1);

    RawInput in;
    CLI::App* expand = app.add_subcommand("expand", "Laurent expansion of the three pole branches");
    CLI::App* indices = app.add_subcommand("indices", "indicial polynomial and Fuchs indices");
    CLI::App* conds = app.add_subcommand("residue-conditions", "residue-sum necessary conditions");
    CLI::App* fit = app.add_subcommand("fit", "fit a first-order subequation");
    CLI::App* classify = app.add_subcommand("classify", "match the instance against the solution families");
    CLI::App* solve = app.add_subcommand("solve", "build the closed-form solution");
    CLI::App* verify = app.add_subcommand("verify", "build and numerically verify the closed form");
    CLI::App* pipeline = app.add_subcommand("pipeline", "full expand->verify pipeline report");

    for (CLI::App* c : {expand, indices, conds, fit, classify, solve, verify, pipeline})
        add_common(c, in);
    conds->add_option("--kmax", in.kmax, "max derivative order k");
    conds->add_option("--nmax", in.nmax, "max power n");
    pipeline->add_option("--kmax", in.kmax, "max derivative order k");
    pipeline->add_option("--nmax", in.nmax, "max power n");
    fit->add_option("--degree", in.degree, "subequation degree m (1..3)")->check(CLI::Range(1, 3));
    fit->add_option("--branches", in.branches, "residue branch indices (0 -> a, 1 -> wa, 2 -> w^2 a)")
        ->delimiter(',');
    fit->add_option("--extra-orders", in.extra_orders, "consistency orders beyond the template rank");
    for (CLI::App* c : {solve, verify, pipeline}) {
        c->add_option("--e0", in.e0, "exact root of the S3 cubic (optional)");
        c->add_option("--z0", in.z0, "pole location, 're' or 're,im'");
    }
    pipeline->add_option("--degrees", in.degrees, "subequation degrees to fit")->delimiter(',');
    pipeline->add_flag("--text", in.text, "human-readable text report instead of JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig cfg = parse_input(in);
        if (expand->parsed()) return cmd_expand(cfg);
        if (indices->parsed()) return cmd_indices(cfg);
        if (conds->parsed()) return cmd_conditions(cfg);
        if (fit->parsed()) return cmd_fit(cfg, in);
        if (classify->parsed()) return cmd_classify(cfg);
        if (solve->parsed()) return cmd_solve(cfg, false);
        if (verify->parsed()) return cmd_solve(cfg, true);
        if (pipeline->parsed()) return cmd_pipeline(cfg, in.text);
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
