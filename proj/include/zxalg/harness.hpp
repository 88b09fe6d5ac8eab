#pragma once

// Verification harness: registry sweeps, random diagrams, rewrite fuzzing,
// derivation replay and the angle computation for the (P) rule.

#include <atomic>
#include <thread>

#include "registries.hpp"
#include "soundness.hpp"

namespace zxalg {

// ---------------------------------------------------------------------------
// Sweeps

struct SweepReport {
    std::vector<SoundnessReport> results;
    std::size_t rules = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t checks = 0;
    std::size_t skipped = 0;
    std::uint64_t seed = 0;
    Backend backend = Backend::Float;
    double tol = 0.0;

    bool all_pass() const { return failed == 0; }
};

inline SweepReport sweep(const std::vector<RuleRegistry>& registries, std::size_t samples, double tol, Backend backend,
                         std::uint64_t seed, unsigned threads = 1) {
    std::vector<const RewriteRule*> rules;
    for (const auto& reg : registries)
        for (const auto& r : reg.rules) rules.push_back(&r);

    SweepReport rep;
    rep.seed = seed;
    rep.backend = backend;
    rep.tol = tol;
    rep.results.resize(rules.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, rules.size())));

    // Each rule has its own seeded stream, so the split across threads does
    // not affect the outcome.
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < rules.size(); i = next++) {
            try {
                rep.results[i] = check_soundness(*rules[i], samples, backend, tol, seed);
            } catch (const std::exception& e) {
                rep.results[i].rule = rules[i]->name;
                rep.results[i].registry = rules[i]->registry;
                rep.results[i].pass = false;
                rep.results[i].note = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& r : rep.results) {
        ++rep.rules;
        (r.pass ? rep.passed : rep.failed) += 1;
        rep.checks += r.checks;
        rep.skipped += r.skipped;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Random diagrams
//
// Distribution: the node count is uniform in [0, max_nodes].  Kinds are Z
// and X (weight 3 each) and H, T, T^-1 (weight 1 each).  Spiders take n, m
// in [0, 2].  Parameters are, with probability 0.3, one of 0, 1, -1, i, 1+i
// and otherwise a uniform point of the unit disk scaled by a factor in
// (0, 2].  Exact mode draws Gaussian rationals instead, with numerators in
// [-8, 8] and denominators up to 4.  All legs and boundary slots are then paired uniformly at random.

struct RandomDiagramOptions {
    bool exact_params = false;
    std::optional<std::uint32_t> n_in;
    std::optional<std::uint32_t> n_out;
};

inline Value random_param(std::mt19937_64& rng, bool exact) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < 0.3) {
        auto ev = detail::edge_values(Domain::Complex);
        return ev[std::uniform_int_distribution<std::size_t>(0, ev.size() - 1)(rng)];
    }
    if (exact) {
        auto q = [&]() {
            mpq_class r(std::uniform_int_distribution<int>(-8, 8)(rng), std::uniform_int_distribution<int>(1, 4)(rng));
            r.canonicalize();
            return r;
        };
        return Value(ExactScalar(GaussQ(q(), q())));
    }
    double r = std::sqrt(u(rng)), th = 2 * std::numbers::pi * u(rng), scale = 2.0 * (1.0 - u(rng));
    return Value(std::polar(r * scale, th));
}

inline Diagram random_diagram(std::uint64_t seed, std::uint32_t max_nodes, std::uint32_t max_wires,
                              const RandomDiagramOptions& opt = {}) {
    std::mt19937_64 rng(seed);
    Diagram d;
    std::uint32_t n_in, n_out;
    if (opt.n_in && opt.n_out) {
        n_in = *opt.n_in;
        n_out = *opt.n_out;
    } else {
        std::uint32_t total = std::uniform_int_distribution<std::uint32_t>(0, max_wires)(rng);
        n_in = std::uniform_int_distribution<std::uint32_t>(0, total)(rng);
        n_out = total - n_in;
        if (opt.n_in) n_in = *opt.n_in;
        if (opt.n_out) n_out = *opt.n_out;
    }
    // Without nodes and without a prescribed boundary there is only the identity.
    if (max_nodes == 0 && !opt.n_in && !opt.n_out) return identity(max_wires / 2);
    std::uint32_t count = std::uniform_int_distribution<std::uint32_t>(0, max_nodes)(rng);
    const Kind kinds[] = {Kind::Z, Kind::Z, Kind::Z, Kind::X, Kind::X, Kind::X, Kind::H, Kind::T, Kind::Tinv};
    for (NodeId id = 0; id < count; ++id) {
        Kind k = kinds[std::uniform_int_distribution<int>(0, 8)(rng)];
        Node node{k, 1, 1};
        if (!fixed_arity(k)) {
            node.n = std::uniform_int_distribution<std::uint32_t>(0, 2)(rng);
            node.m = std::uniform_int_distribution<std::uint32_t>(0, 2)(rng);
            node.param = Param(random_param(rng, opt.exact_params));
        }
        d.nodes[id] = node;
    }
    auto legs_total = [&]() {
        std::uint32_t t = n_in + n_out;
        for (const auto& [id, node] : d.nodes) t += node.degree();
        return t;
    };
    if (legs_total() % 2 == 1) {
        bool fixed = false;
        for (auto& [id, node] : d.nodes)
            if (!fixed_arity(node.kind) && node.degree() < 4) {
                ++node.m;
                fixed = true;
                break;
            }
        if (!fixed) {
            if (!opt.n_out && n_out > 0) --n_out;
            else if (!opt.n_in && n_in > 0) --n_in;
            else d.nodes[count] = Node{Kind::Z, 0, 1, Param(random_param(rng, opt.exact_params))};
        }
    }
    d.n_in = n_in;
    d.n_out = n_out;
    std::vector<Endpoint> ends;
    for (std::uint32_t i = 0; i < n_in; ++i) ends.push_back(Bound{Side::In, i});
    for (std::uint32_t j = 0; j < n_out; ++j) ends.push_back(Bound{Side::Out, j});
    for (const auto& [id, node] : d.nodes)
        for (std::uint32_t p = 0; p < node.degree(); ++p) ends.push_back(NodePort{id, p});
    std::shuffle(ends.begin(), ends.end(), rng);
    for (std::size_t i = 0; i + 1 < ends.size(); i += 2) d.edges.push_back({ends[i], ends[i + 1]});
    return d;
}

// ---------------------------------------------------------------------------
// Rewrite fuzzing

struct FuzzViolation {
    std::size_t iteration = 0;
    std::string rule;
    Diagram host;
    Diagram result;
    Diagram reproducer;
    double deviation = 0.0;
    std::string error;
};

struct FuzzReport {
    std::size_t iterations = 0;
    std::size_t rewrites = 0;     // iterations in which a rewrite was applied and checked
    std::size_t no_match = 0;
    std::size_t skipped = 0;      // host or result beyond interpreter capacity
    std::map<std::string, std::size_t> rule_hits;
    std::vector<FuzzViolation> violations;
};

struct FuzzOptions {
    std::uint32_t max_nodes = 10;
    std::uint32_t max_wires = 8;
};

inline std::vector<RewriteRule> all_rules() {
    std::vector<RewriteRule> out;
    for (auto& reg : registries_by_name("all"))
        for (auto& r : reg.rules) out.push_back(r);
    return out;
}

// Detaches a node; the far ends of its edges become fresh output slots.
inline Diagram remove_node(const Diagram& d, NodeId id) {
    Diagram r = d;
    r.nodes.erase(id);
    r.edges.clear();
    for (const auto& e : d.edges) {
        bool a_hit = is_port(e.a) && as_port(e.a).node == id;
        bool b_hit = is_port(e.b) && as_port(e.b).node == id;
        if (a_hit && b_hit) continue;
        if (!a_hit && !b_hit) {
            r.edges.push_back(e);
            continue;
        }
        r.edges.push_back({a_hit ? e.b : e.a, Bound{Side::Out, r.n_out++}});
    }
    return r;
}

namespace detail {

// Deviation between host and rewritten host, or nullopt if the check could
// not run (capacity).  Throws nothing.
inline std::optional<double> rewrite_deviation(const Diagram& host, const Diagram& result) {
    try {
        auto a = interpret<FloatScalar>(host);
        auto b = interpret<FloatScalar>(result);
        return max_deviation(a, b);
    } catch (const Error&) {
        return std::nullopt;
    }
}

// Does some match of `rule` in `host` produce a semantic violation?
inline bool still_violates(const Diagram& host, const RewriteRule& rule, double tol) {
    if (!validate(host).empty()) return false;
    for (const auto& m : find_rule_matches(rule, host, tol)) {
        try {
            Diagram res = apply_match(host, rule, m, tol);
            auto dev = rewrite_deviation(host, res);
            if (!validate(res).empty() || (dev && *dev > tol)) return true;
        } catch (const Error&) {
            return true;
        }
    }
    return false;
}

inline Diagram shrink(Diagram host, const RewriteRule& rule, double tol, int max_wires) {
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& [id, node] : host.nodes) {
            Diagram smaller = remove_node(host, id);
            if (static_cast<int>(smaller.n_in + smaller.n_out) > max_wires) continue;
            if (still_violates(smaller, rule, tol)) {
                host = std::move(smaller);
                progress = true;
                break;
            }
        }
    }
    return host;
}

}  // namespace detail

inline Diagram random_context_host(const RewriteRule& rule, std::mt19937_64& rng, const FuzzOptions& opt) {
    Assignment v;
    for (const auto& p : rule.params)
        if (!p.derived) v[p.name] = detail::random_value(p.domain, Backend::Float, rng);
    Instance inst = instantiate_full(rule, v);
    const Diagram& lhs = inst.lhs;
    if (lhs.nodes.size() > opt.max_nodes) throw Error(ErrorCode::CapacityExceeded, "pattern too large to plant");
    std::uint32_t spare = opt.max_nodes - static_cast<std::uint32_t>(lhs.nodes.size());
    std::uint32_t below_nodes = std::uniform_int_distribution<std::uint32_t>(0, spare / 2)(rng);
    std::uint32_t above_nodes = std::uniform_int_distribution<std::uint32_t>(0, spare - below_nodes)(rng);
    std::uint32_t wires_left = opt.max_wires;
    std::uint32_t r_in = std::uniform_int_distribution<std::uint32_t>(0, std::min<std::uint32_t>(wires_left / 2, 3))(rng);
    std::uint32_t r_out = std::uniform_int_distribution<std::uint32_t>(0, std::min<std::uint32_t>(wires_left - r_in, 3))(rng);
    RandomDiagramOptions lo{false, r_in, lhs.n_in};
    RandomDiagramOptions hi{false, lhs.n_out, r_out};
    Diagram below = random_diagram(rng(), below_nodes, wires_left, lo);
    Diagram above = random_diagram(rng(), above_nodes, wires_left, hi);
    return compose(above, compose(lhs, below));
}

inline FuzzReport fuzz_rewrites(std::size_t iterations, std::uint64_t seed, double tol,
                                const std::vector<RewriteRule>& rules = all_rules(), const FuzzOptions& opt = {}) {
    FuzzReport rep;
    rep.iterations = iterations;
    std::mt19937_64 rng(seed);
    for (std::size_t it = 0; it < iterations; ++it) {
        Diagram host;
        if (it % 2 == 0 || rules.empty()) {
            host = random_diagram(rng(), opt.max_nodes, opt.max_wires);
        } else {
            const auto& planted = rules[std::uniform_int_distribution<std::size_t>(0, rules.size() - 1)(rng)];
            try {
                host = random_context_host(planted, rng, opt);
            } catch (const Error&) {
                host = random_diagram(rng(), opt.max_nodes, opt.max_wires);
            }
            if (host.nodes.size() > opt.max_nodes || host.n_in + host.n_out > opt.max_wires)
                host = random_diagram(rng(), opt.max_nodes, opt.max_wires);
        }

        std::vector<std::pair<std::size_t, RuleMatch>> all;
        for (std::size_t r = 0; r < rules.size(); ++r)
            for (auto& m : find_rule_matches(rules[r], host, tol)) all.emplace_back(r, std::move(m));
        if (all.empty()) {
            ++rep.no_match;
            continue;
        }
        const auto& [ri, match] = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
        const RewriteRule& rule = rules[ri];
        FuzzViolation v{it, rule.name, host, {}, {}, 0.0, ""};
        try {
            v.result = apply_match(host, rule, match, tol);
            auto problems = validate(v.result);
            if (!problems.empty()) v.error = "invalid result: " + problems.front();
        } catch (const Error& e) {
            v.error = e.what();
        }
        if (v.error.empty()) {
            auto dev = detail::rewrite_deviation(host, v.result);
            if (!dev) {
                ++rep.skipped;
                continue;
            }
            v.deviation = *dev;
        }
        ++rep.rewrites;
        ++rep.rule_hits[rule.name];
        if (!v.error.empty() || v.deviation > tol) {
            v.reproducer = detail::shrink(host, rule, tol, Capacity::defaults<FloatScalar>().open_wires);
            rep.violations.push_back(std::move(v));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Derivation replay

struct DerivationScript {
    std::string name;
    std::vector<Diagram> steps;
    std::vector<std::optional<std::string>> rules;  // one per adjacent pair
};

struct ReplayStep {
    std::size_t index = 0;  // checks steps[index] against steps[index + 1]
    bool semantic_ok = false;
    double deviation = 0.0;
    std::optional<std::string> rule;
    std::optional<bool> rule_connects;
    std::string error;
};

struct ReplayReport {
    std::string name;
    bool pass = true;
    std::optional<std::size_t> first_failure;
    std::vector<ReplayStep> steps;
};

// Does one application of `rule`, in either direction, turn a into b?
inline bool rule_connects(const RewriteRule& rule, const Diagram& a, const Diagram& b, double tol) {
    auto one_way = [&](const Diagram& from, const Diagram& to) {
        for (const auto& m : find_rule_matches(rule, from, tol)) {
            try {
                if (structural_eq(apply_match(from, rule, m, tol), to, tol)) return true;
            } catch (const Error&) {
            }
        }
        return false;
    };
    return one_way(a, b) || one_way(b, a);
}

inline ReplayReport replay(const DerivationScript& script, double tol, Backend backend) {
    ReplayReport rep;
    rep.name = script.name;
    std::vector<RewriteRule> rules = all_rules();
    for (std::size_t i = 0; i + 1 < script.steps.size(); ++i) {
        ReplayStep st;
        st.index = i;
        const Diagram& a = script.steps[i];
        const Diagram& b = script.steps[i + 1];
        try {
            if (a.n_in != b.n_in || a.n_out != b.n_out) throw Error(ErrorCode::ShapeMismatch, "step arities differ");
            if (backend == Backend::Exact) {
                auto ma = interpret<ExactScalar>(a), mb = interpret<ExactScalar>(b);
                st.semantic_ok = matrices_equal(ma, mb, tol);
                st.deviation = max_deviation(ma, mb);
            } else {
                auto ma = interpret<FloatScalar>(a), mb = interpret<FloatScalar>(b);
                st.semantic_ok = matrices_equal(ma, mb, tol);
                st.deviation = max_deviation(ma, mb);
            }
        } catch (const Error& e) {
            st.error = e.what();
            st.semantic_ok = false;
        }
        if (i < script.rules.size() && script.rules[i]) {
            st.rule = script.rules[i];
            auto it = std::find_if(rules.begin(), rules.end(), [&](const RewriteRule& r) { return r.name == *st.rule; });
            st.rule_connects = it != rules.end() && rule_connects(*it, a, b, tol);
        }
        if (!st.semantic_ok && rep.pass) {
            rep.pass = false;
            rep.first_failure = i;
        }
        rep.steps.push_back(st);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The (P) rule: Z(a1) X(b1) Z(g1) = X(a2) Z(b2) X(g2) up to a scalar.

struct PRuleAngles {
    double alpha2 = 0, beta2 = 0, gamma2 = 0;
};

inline PRuleAngles p_rule_angles(double a1, double b1, double g1) {
    using std::cos;
    using std::sin;
    const std::complex<double> i(0, 1);
    std::complex<double> z = cos(b1 / 2) * cos((a1 + g1) / 2) + i * sin(b1 / 2) * cos((a1 - g1) / 2);
    std::complex<double> z1 = cos(b1 / 2) * sin((a1 + g1) / 2) - i * sin(b1 / 2) * sin((a1 - g1) / 2);
    if (std::abs(z1) < 1e-12) throw Error(ErrorCode::Degenerate, "z1 = 0, arg undefined");
    if (std::abs(z) < 1e-12) throw Error(ErrorCode::Degenerate, "z = 0, arg undefined");
    PRuleAngles r;
    r.alpha2 = reduce_angle(std::arg(z) + std::arg(z1));
    r.beta2 = reduce_angle(2 * std::arg(std::abs(z / z1) + i));
    r.gamma2 = reduce_angle(std::arg(z) - std::arg(z1));
    return r;
}

// Both sides as diagrams; the alpha spider acts first.
inline std::pair<Diagram, Diagram> p_rule_sides(double a1, double b1, double g1, const PRuleAngles& out) {
    using namespace gadget;
    Diagram lhs = seq({Z(1, 1, phase(a1)), X(1, 1, phase(b1)), Z(1, 1, phase(g1))});
    Diagram rhs = seq({X(1, 1, phase(out.alpha2)), Z(1, 1, phase(out.beta2)), X(1, 1, phase(out.gamma2))});
    return {lhs, rhs};
}

}  // namespace zxalg
