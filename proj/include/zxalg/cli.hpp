#pragma once

// The zxcal command line.  Exit status: 0 success, 1 a check failed,
// 2 bad usage or unreadable input.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json_io.hpp"
#include "translate.hpp"

namespace zxalg::cli {

using io::json;

inline constexpr int kCapacityCeiling = 20;

struct CliConfig {
    std::string subcommand;
    std::string in;
    std::string out;
    std::string backend = "float";
    std::string set = "all";
    std::string from = "zh";
    double tol = 1e-9;
    std::uint64_t seed = 42;
    std::size_t samples = 200;
    std::size_t iterations = 500;
    std::size_t max_steps = 10000;
    unsigned threads = 0;
    int precision = 0;
    int capacity = 0;
    std::uint32_t max_nodes = 10;
    std::uint32_t max_wires = 8;
    double alpha = std::numbers::pi / 4, beta = -std::numbers::pi / 4, gamma = std::numbers::pi / 2;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json read_json(const std::string& path) {
    if (path.empty()) throw UsageError("--in is required");
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

// Writes to --out when given, otherwise to the stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot write '" + path + "'");
            os_ = &file_;
        }
    }
    void line(const json& j) { *os_ << j.dump() << '\n' << std::flush; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

inline Backend parse_backend(const std::string& s) {
    if (s == "float") return Backend::Float;
    if (s == "exact") return Backend::Exact;
    throw UsageError("unknown backend '" + s + "'");
}

inline int apply_capacity(const CliConfig& c) {
    int cap = c.capacity;
    if (cap == 0) {
        if (const char* env = std::getenv("ZXCAL_CAPACITY")) {
            try {
                cap = std::stoi(env);
            } catch (const std::exception&) {
                throw UsageError("ZXCAL_CAPACITY must be an integer");
            }
        }
    }
    if (cap < 0 || cap > kCapacityCeiling)
        throw UsageError("capacity must lie in [0, " + std::to_string(kCapacityCeiling) + "], 0 meaning the default");
    capacity_override() = cap;
    return cap;
}

inline int cmd_interpret(const CliConfig& c, std::ostream& out) {
    Diagram d = io::diagram_from(read_json(c.in));
    if (auto errs = validate(d); !errs.empty()) throw Error(ErrorCode::Parse, errs.front());
    Sink sink(c.out, out);
    if (parse_backend(c.backend) == Backend::Exact) sink.line(io::matrix_json(interpret<ExactScalar>(d)));
    else sink.line(io::matrix_json(interpret<FloatScalar>(d), c.precision));
    return 0;
}

inline int cmd_check_rules(const CliConfig& c, std::ostream& out) {
    auto regs = registries_by_name(c.set);
    Sink sink(c.out, out);
    SweepReport rep = sweep(regs, c.samples, c.tol, parse_backend(c.backend), c.seed, c.threads);
    for (const auto& r : rep.results) sink.line(io::soundness_json(r));
    sink.line(io::sweep_summary_json(rep));
    return rep.all_pass() ? 0 : 1;
}

inline int cmd_rules(const CliConfig& c, std::ostream& out) {
    Sink sink(c.out, out);
    for (const auto& reg : registries_by_name(c.set))
        for (const auto& entry : io::rule_catalogue(reg)) sink.line(entry);
    return 0;
}

inline int cmd_translate(const CliConfig& c, std::ostream& out) {
    if (c.from != "zh") throw UsageError("translate supports only --from zh");
    Diagram d = io::diagram_from(read_json(c.in));
    if (auto errs = validate_zh(d); !errs.empty()) throw Error(ErrorCode::Parse, errs.front());
    Sink sink(c.out, out);
    sink.line(io::to_json(translate(d)));
    return 0;
}

inline int cmd_simplify(const CliConfig& c, std::ostream& out) {
    Diagram d = io::diagram_from(read_json(c.in));
    if (auto errs = validate(d); !errs.empty()) throw Error(ErrorCode::Parse, errs.front());
    SimplifyResult r = simplify(d, c.max_steps, c.tol);
    json log = json::array();
    for (const auto& s : r.log) log.push_back({{"rule", s.rule}, {"nodes", s.nodes}});
    Sink sink(c.out, out);
    sink.line({{"diagram", io::to_json(r.diagram)}, {"log", log}});
    return 0;
}

inline int cmd_fuzz(const CliConfig& c, std::ostream& out) {
    FuzzOptions opt{c.max_nodes, c.max_wires};
    FuzzReport rep = fuzz_rewrites(c.iterations, c.seed, c.tol, all_rules(), opt);
    Sink sink(c.out, out);
    for (const auto& v : rep.violations) {
        json j = {{"violation", true}, {"iteration", v.iteration}, {"rule", v.rule}, {"deviation", v.deviation},
                  {"host", io::to_json(v.host)}, {"reproducer", io::to_json(v.reproducer)}};
        if (!v.error.empty()) j["error"] = v.error;
        sink.line(j);
    }
    sink.line({{"summary", true},
               {"iterations", rep.iterations},
               {"rewrites", rep.rewrites},
               {"no_match", rep.no_match},
               {"skipped", rep.skipped},
               {"violations", rep.violations.size()},
               {"rule_hits", rep.rule_hits},
               {"seed", c.seed}});
    return rep.violations.empty() ? 0 : 1;
}

inline int cmd_replay(const CliConfig& c, std::ostream& out) {
    DerivationScript script;
    try {
        script = io::script_from(read_json(c.in));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
    ReplayReport rep = replay(script, c.tol, parse_backend(c.backend));
    Sink sink(c.out, out);
    bool ok = rep.pass;
    for (const auto& s : rep.steps) {
        json j = {{"step", s.index}, {"semantic_ok", s.semantic_ok}, {"deviation", s.deviation}};
        if (s.rule) j["rule"] = *s.rule;
        if (s.rule_connects) {
            j["rule_connects"] = *s.rule_connects;
            ok = ok && *s.rule_connects;
        }
        if (!s.error.empty()) j["error"] = s.error;
        sink.line(j);
    }
    json summary = {{"summary", true}, {"name", rep.name}, {"pass", ok}};
    if (rep.first_failure) summary["first_failure"] = *rep.first_failure;
    sink.line(summary);
    return ok ? 0 : 1;
}

inline int cmd_p_rule(const CliConfig& c, std::ostream& out) {
    PRuleAngles a = p_rule_angles(c.alpha, c.beta, c.gamma);
    auto [lhs, rhs] = p_rule_sides(c.alpha, c.beta, c.gamma, a);
    auto k = proportional(interpret<FloatScalar>(lhs), interpret<FloatScalar>(rhs), c.tol);
    json j = {{"alpha2", a.alpha2}, {"beta2", a.beta2}, {"gamma2", a.gamma2}, {"proportional", k.has_value()}};
    if (k) j["constant"] = io::to_json(*k, c.precision);
    Sink sink(c.out, out);
    sink.line(j);
    return k ? 0 : 1;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig c;
    CLI::App app{"Interpret, check and rewrite ZX diagrams", "zxcal"};
    app.require_subcommand(1);
    app.add_option("--capacity", c.capacity, "Open-wire limit for dense evaluation (default from ZXCAL_CAPACITY)");

    auto tol_opt = [&](CLI::App* s) { s->add_option("--tol", c.tol, "Comparison tolerance")->check(CLI::NonNegativeNumber); };
    auto out_opt = [&](CLI::App* s) { s->add_option("--out", c.out, "Output file (default stdout)"); };
    auto in_opt = [&](CLI::App* s) { s->add_option("--in", c.in, "Input JSON file")->required(); };
    auto backend_opt = [&](CLI::App* s) {
        s->add_option("--backend", c.backend, "float or exact")->check(CLI::IsMember({"float", "exact"}));
    };
    auto set_opt = [&](CLI::App* s) {
        s->add_option("--set", c.set, "Rule set")->check(CLI::IsMember({"algebraic", "legacy", "derived", "zh", "all"}));
    };

    auto* interp = app.add_subcommand("interpret", "Evaluate a diagram to its matrix");
    in_opt(interp), out_opt(interp), backend_opt(interp);
    interp->add_option("--precision", c.precision, "Significant digits for float output (0 = full)");

    auto* check = app.add_subcommand("check-rules", "Soundness sweep over a rule set");
    set_opt(check), out_opt(check), backend_opt(check), tol_opt(check);
    check->add_option("--samples", c.samples, "Random draws per rule");
    check->add_option("--seed", c.seed, "Random seed");
    check->add_option("--threads", c.threads, "Worker threads (0 = auto)");

    auto* rules = app.add_subcommand("rules", "Print the rule catalogue");
    set_opt(rules), out_opt(rules);

    auto* trans = app.add_subcommand("translate", "Translate a ZH diagram into ZX");
    in_opt(trans), out_opt(trans);
    trans->add_option("--from", c.from, "Source calculus")->check(CLI::IsMember({"zh"}));

    auto* simp = app.add_subcommand("simplify", "Apply size-reducing rewrites until none applies");
    in_opt(simp), out_opt(simp), tol_opt(simp);
    simp->add_option("--max-steps", c.max_steps, "Step budget");

    auto* fuzz = app.add_subcommand("fuzz", "Check rewrites on random diagrams");
    out_opt(fuzz), tol_opt(fuzz);
    fuzz->add_option("--iterations", c.iterations, "Number of random hosts");
    fuzz->add_option("--seed", c.seed, "Random seed");
    fuzz->add_option("--max-nodes", c.max_nodes, "Node budget per host");
    fuzz->add_option("--max-wires", c.max_wires, "Open-wire budget per host");

    auto* rep = app.add_subcommand("replay", "Check a derivation script step by step");
    in_opt(rep), out_opt(rep), backend_opt(rep), tol_opt(rep);

    auto* prule = app.add_subcommand("p-rule", "Solve the Euler-angle swap for given angles");
    out_opt(prule);
    prule->add_option("--alpha", c.alpha)->default_str("pi/4");
    prule->add_option("--beta", c.beta)->default_str("-pi/4");
    prule->add_option("--gamma", c.gamma)->default_str("pi/2");
    prule->add_option("--tol", c.tol, "Proportionality tolerance");
    prule->add_option("--precision", c.precision, "Significant digits for the constant");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        apply_capacity(c);
        if (*interp) return cmd_interpret(c, out);
        if (*check) return cmd_check_rules(c, out);
        if (*rules) return cmd_rules(c, out);
        if (*trans) return cmd_translate(c, out);
        if (*simp) return cmd_simplify(c, out);
        if (*fuzz) return cmd_fuzz(c, out);
        if (*rep) return cmd_replay(c, out);
        if (*prule) return cmd_p_rule(c, out);
    } catch (const UsageError& e) {
        err << "zxcal: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "zxcal: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "zxcal: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

}  // namespace zxalg::cli
