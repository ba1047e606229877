// Command-line front end: reads a key-value system file describing a system
// of second-order ODEs, decides variationality, and constructs Lagrangians
// and the section-3 decomposition forms.
//
// Exit codes: 0 variational (or command succeeded), 1 usage/parse/validation
// error, 2 not variational, 3 variational but the obstruction 2-form is
// nonzero.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "lepage/lepage.hpp"

using nlohmann::json;
using namespace lepage;

namespace {

struct Options {
    std::string file;
    std::string corpus_dir;
    bool emit_json = false;
    std::uint64_t seed = 20240901;
    int trials = 32;
    double tol = 1e-9;
    std::string method = "auto";
    std::string degree;
    bool numeric_fallback = false;
};

SamplePlan make_plan(const Options& o, const SystemFile& sf) {
    SamplePlan plan;
    plan.seed = sf.seed.value_or(o.seed);
    plan.trials = sf.trials.value_or(o.trials);
    plan.zero_tol = sf.tol.value_or(o.tol);
    return plan;
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

HomogeneityFinding find_degree(const SourceForm& sf, const Options& opts,
                               const SystemFile& file, const SamplePlan& plan) {
    if (!opts.degree.empty()) return certify_degree(sf, parse_rational(opts.degree), plan);
    if (file.degree) return certify_degree(sf, *file.degree, plan);
    return homogeneity_degree(sf, plan);
}

json verdict_json(const ZeroVerdict& v) {
    json j;
    j["kind"] = to_string(v.kind);
    j["is_zero"] = v.is_zero();
    if (!v.proven()) {
        j["trials"] = v.trials;
        j["max_residual"] = v.max_residual;
    }
    return j;
}

json helmholtz_json(const HelmholtzReport& rep, const JetSpace& sp) {
    json j;
    j["passed"] = rep.passed;
    json conds = json::array();
    for (const auto& c : rep.conditions) {
        json e;
        e["label"] = c.label;
        e["verdict"] = verdict_json(c.verdict);
        if (!c.verdict.is_zero()) e["residual"] = to_string(c.residual, sp);
        conds.push_back(e);
    }
    j["conditions"] = conds;
    if (!rep.dependent.empty()) {
        json deps = json::array();
        for (const auto& c : rep.dependent) {
            json e;
            e["label"] = c.label;
            e["verdict"] = verdict_json(c.verdict);
            deps.push_back(e);
        }
        j["dependent_identities"] = deps;
    }
    return j;
}

void print_helmholtz_human(const HelmholtzReport& rep, const JetSpace& sp) {
    std::cout << "helmholtz: " << (rep.passed ? "PASS" : "FAIL") << "\n";
    for (const auto& c : rep.conditions)
        if (!c.verdict.is_zero())
            std::cout << "  " << c.label << "  residual = " << to_string(c.residual, sp)
                      << "  (" << to_string(c.verdict.kind) << ")\n";
}

// Round-trip verdicts that accompany every emitted Lagrangian.
json roundtrip_json(const SourceForm& sf, const Lagrangian& lag, const SamplePlan& plan) {
    json j;
    SourceForm back = euler_lagrange(lag);
    bool sym_ok = true;
    std::string sym_kind = "ProvenZero";
    for (int i = 0; i < sf.space.m; ++i) {
        ZeroVerdict v = is_zero(canonicalize(back.eps_at(i) - sf.eps_at(i)), plan);
        if (!v.is_zero()) {
            sym_ok = false;
            sym_kind = to_string(v.kind);
            break;
        }
        if (v.kind == VerdictKind::NumericZero) sym_kind = "NumericZero";
    }
    j["symbolic"] = sym_kind;
    j["symbolic_ok"] = sym_ok;
    ElRoundtripReport n = numeric_el_roundtrip(sf.eps, lag.L, sf.space, plan);
    j["numeric_max_residual"] = n.worst;
    j["numeric_trials"] = n.trials;
    j["seed"] = plan.seed;
    return j;
}

int run_check(const SystemFile& file, const Options& opts, json& out) {
    SourceForm sf = file.source_form();
    SamplePlan plan = make_plan(opts, file);
    const JetSpace sp = sf.space;

    HelmholtzReport h = helmholtz(sf, plan);
    HelmholtzReport hab = helmholtz_AB(sf, plan);
    out["helmholtz"] = helmholtz_json(h, sp);
    out["helmholtz_AB"] = helmholtz_json(hab, sp);

    HomogeneityFinding hf = find_degree(sf, opts, file, plan);
    json hj;
    hj["homogeneous"] = hf.homogeneous();
    if (hf.degree) hj["degree"] = hf.degree->str();
    hj["applicable"] = hf.applicable;
    out["homogeneity"] = hj;

    if (!opts.emit_json) {
        print_helmholtz_human(h, sp);
        std::cout << "helmholtz (A/B form): " << (hab.passed ? "PASS" : "FAIL") << "\n";
        std::cout << "homogeneity degree: " << (hf.degree ? hf.degree->str() : "none") << "\n";
    }
    if (!h.passed || !hab.passed) {
        out["verdict"] = "not variational";
        if (!opts.emit_json) std::cout << "verdict: not variational\n";
        return 2;
    }

    DiffForm w = omega(sf);
    ZeroVerdict wv = form_zero_verdict(w, plan);
    out["omega"] = to_string(w);
    out["omega_vanishes"] = verdict_json(wv);
    if (!opts.emit_json)
        std::cout << "obstruction omega = " << to_string(w) << "  ("
                  << to_string(wv.kind) << ")\n";
    if (!wv.is_zero()) {
        out["verdict"] = "variational, obstruction nonzero";
        if (!opts.emit_json)
            std::cout << "verdict: locally variational; obstruction omega != 0 "
                         "(Lagrangians are chart-local)\n";
        return 3;
    }
    out["verdict"] = "variational";
    if (!opts.emit_json) std::cout << "verdict: variational (omega = 0)\n";
    return 0;
}

int run_lagrangian(const SystemFile& file, const Options& opts, json& out) {
    SourceForm sf = file.source_form();
    SamplePlan plan = make_plan(opts, file);
    HelmholtzReport h = helmholtz(sf, plan);
    if (!h.passed) {
        out["error"] = "HelmholtzViolated";
        if (!opts.emit_json) std::cout << "error: source form is not variational\n";
        return 2;
    }
    std::string method = opts.method;
    if (method == "auto") {
        bool obstruction_free = check_omega_vanishes(sf, plan).is_zero();
        HomogeneityFinding hf = find_degree(sf, opts, file, plan);
        method = (obstruction_free || hf.applicable) ? "global" : "tonti1";
        out["method_resolved"] = method;
    }
    try {
        Lagrangian lag = [&] {
            if (method == "tonti") return tonti(sf, opts.numeric_fallback);
            if (method == "tonti1")
                return tonti_first_order(sf, true, opts.numeric_fallback, plan);
            if (method == "global")
                return global_lagrangian(sf, opts.numeric_fallback, plan);
            throw ValidationError("unknown method '" + method + "'");
        }();
        out["method"] = method;
        out["lagrangian"] = to_string(lag.L, sf.space);
        out["roundtrip"] = roundtrip_json(sf, lag, plan);
        if (method == "tonti" || method == "tonti1")
            out["locality"] = "chart-local (star-shaped domain)";
        if (!opts.emit_json) {
            std::cout << "method: " << method << "\n";
            std::cout << "L = " << to_string(lag.L, sf.space) << "\n";
            if (method != "global")
                std::cout << "note: chart-local (star-shaped domain)\n";
            std::cout << "roundtrip: symbolic " << out["roundtrip"]["symbolic"].get<std::string>()
                      << ", numeric max residual "
                      << out["roundtrip"]["numeric_max_residual"].get<double>() << "\n";
        }
        return 0;
    } catch (const ObstructionNonzero& e) {
        out["error"] = "ObstructionNonzero";
        out["omega"] = to_string(omega(sf));
        if (!opts.emit_json)
            std::cout << "error: " << e.what() << "\n  omega = " << out["omega"].get<std::string>()
                      << "\n";
        return 3;
    }
}

int run_forms(const SystemFile& file, const Options& opts, json& out) {
    SourceForm sf = file.source_form();
    SamplePlan plan = make_plan(opts, file);
    if (!helmholtz(sf, plan).passed) {
        out["error"] = "HelmholtzViolated";
        if (!opts.emit_json) std::cout << "error: source form is not variational\n";
        return 2;
    }
    GlobalDecomposition g = global_decomposition(sf, opts.numeric_fallback);
    DiffForm alpha_contact = lepage_equivalent(sf);
    out["alpha"] = to_string(alpha_contact);
    out["alpha0"] = to_string(g.alpha0);
    out["alpha_prime"] = to_string(g.alpha_prime);
    out["mu0"] = to_string(g.mu0);
    out["omega"] = to_string(g.omega);
    out["kappa"] = to_string(g.kappa);
    GlobalReport rep = verify_global_decomposition(sf, opts.numeric_fallback, plan);
    json ids = json::array();
    for (const auto& c : rep.identities) {
        json e;
        e["label"] = c.label;
        e["verdict"] = verdict_json(c.verdict);
        ids.push_back(e);
    }
    out["identities"] = ids;
    out["identities_passed"] = rep.passed;
    if (!opts.emit_json) {
        std::cout << "alpha  = " << out["alpha"].get<std::string>() << "\n";
        std::cout << "alpha0 = " << out["alpha0"].get<std::string>() << "\n";
        std::cout << "alpha' = " << out["alpha_prime"].get<std::string>() << "\n";
        std::cout << "mu0    = " << out["mu0"].get<std::string>() << "\n";
        std::cout << "omega  = " << out["omega"].get<std::string>() << "\n";
        std::cout << "kappa  = " << out["kappa"].get<std::string>() << "\n";
        for (const auto& c : rep.identities)
            std::cout << "  " << c.label << ": " << to_string(c.verdict.kind) << "\n";
    }
    ZeroVerdict wv = form_zero_verdict(g.omega, plan);
    if (!rep.passed) return 2;
    return wv.is_zero() ? 0 : 3;
}

int run_invariance(const SystemFile& file, const Options& opts, json& out) {
    if (file.charts.empty())
        throw ValidationError("invariance probe needs at least one chart.NAME entry");
    SourceForm sf = file.source_form();
    SamplePlan plan = make_plan(opts, file);
    json charts = json::array();
    double worst = 0.0;
    for (const auto& [name, maps] : file.charts) {
        PointTransform t = file.chart(name);
        ChartInvarianceReport rep = chart_invariance_probe(sf, t, 10, plan);
        json e;
        e["chart"] = name;
        e["max_residual_omega"] = rep.max_residual_omega;
        e["max_residual_kappa"] = rep.max_residual_kappa;
        e["points"] = rep.points;
        charts.push_back(e);
        worst = std::max(worst, rep.worst());
        if (!opts.emit_json)
            std::cout << "chart " << name << ": omega residual " << rep.max_residual_omega
                      << ", kappa residual " << rep.max_residual_kappa << " over "
                      << rep.points << " points\n";
    }
    out["charts"] = charts;
    out["max_residual"] = worst;
    return 0;
}

int run_one(const std::string& cmd, const std::string& path, const Options& opts,
            json& out) {
    out["file"] = path;
    out["command"] = cmd;
    out["seed"] = opts.seed;
    SystemFile file = load_system_file(path);
    if (cmd == "check") return run_check(file, opts, out);
    if (cmd == "lagrangian") return run_lagrangian(file, opts, out);
    if (cmd == "forms") return run_forms(file, opts, out);
    if (cmd == "invariance") return run_invariance(file, opts, out);
    throw ValidationError("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variationality analysis for second-order ODE systems"};
    app.require_subcommand(1);

    Options opts;
    app.add_flag("--json", opts.emit_json, "emit a machine-readable JSON report");
    app.add_option("--seed", opts.seed, "random seed for numeric verification");
    app.add_option("--trials", opts.trials, "sample count for numeric verification");
    app.add_option("--tol", opts.tol, "zero-test tolerance");
    app.add_option("--degree", opts.degree, "homogeneity degree override (rational)");
    app.add_flag("--numeric-fallback", opts.numeric_fallback,
                 "evaluate non-polynomial integrals by quadrature");
    app.add_option("--corpus", opts.corpus_dir, "process every .sys file in a directory");

    std::string file;
    auto add_cmd = [&](const char* name, const char* desc) {
        CLI::App* c = app.add_subcommand(name, desc);
        c->fallthrough();
        c->add_option("file", file, "system file");
        return c;
    };
    add_cmd("check", "decide local/global variationality");
    CLI::App* lag = add_cmd("lagrangian", "construct a Lagrangian");
    lag->add_option("--method", opts.method, "tonti | tonti1 | global | auto");
    add_cmd("forms", "print the Lepage equivalent and its decomposition");
    add_cmd("invariance", "chart invariance probe for omega and kappa");

    CLI11_PARSE(app, argc, argv);
    std::string cmd = app.get_subcommands().front()->get_name();

    try {
        if (!opts.corpus_dir.empty()) {
            std::vector<std::string> paths;
            for (const auto& entry : std::filesystem::directory_iterator(opts.corpus_dir))
                if (entry.path().extension() == ".sys") paths.push_back(entry.path().string());
            std::sort(paths.begin(), paths.end());
            std::vector<std::future<std::pair<int, json>>> futs;
            for (const auto& p : paths)
                futs.push_back(std::async(std::launch::async, [&, p] {
                    json j;
                    int code;
                    Options quiet = opts;
                    quiet.emit_json = true;  // keep workers off stdout
                    try {
                        code = run_one(cmd, p, quiet, j);
                    } catch (const Error& e) {
                        j["error"] = e.what();
                        code = 1;
                    }
                    return std::make_pair(code, j);
                }));
            json all = json::array();
            int worst = 0;
            for (std::size_t i = 0; i < futs.size(); ++i) {
                auto [code, j] = futs[i].get();
                j["exit_code"] = code;
                all.push_back(j);
                worst = std::max(worst, code);
                if (!opts.emit_json)
                    std::cout << paths[i] << ": exit " << code << "\n";
            }
            if (opts.emit_json) std::cout << all.dump(2) << "\n";
            return worst;
        }
        if (file.empty()) {
            std::cerr << "error: missing system file argument\n";
            return 1;
        }
        json out;
        int code = run_one(cmd, file, opts, out);
        out["exit_code"] = code;
        if (opts.emit_json) std::cout << out.dump(2) << "\n";
        return code;
    } catch (const Error& e) {
        if (opts.emit_json) {
            json out;
            out["error"] = e.what();
            out["exit_code"] = 1;
            std::cout << out.dump(2) << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return 1;
    }
}
