#pragma once

// Semantic soundness of rewrite rules: both sides must denote the same
// matrix for every admissible choice of parameters.

#include <random>
#include <string>

#include "rule.hpp"
#include "semantics.hpp"

namespace zxalg {

enum class Backend { Float, Exact };

inline const char* to_string(Backend b) { return b == Backend::Float ? "float" : "exact"; }

struct SoundnessReport {
    std::string rule;
    std::string registry;
    bool pass = true;
    double worst_deviation = 0.0;
    std::optional<Assignment> counterexample;
    LegCounts counterexample_legs;
    std::size_t checks = 0;   // draws actually compared
    std::size_t skipped = 0;  // draws outside the side condition or not exactly representable
    std::string note;
};

namespace detail {

inline std::vector<Value> edge_values(Domain d) {
    const double pi = std::numbers::pi;
    switch (d) {
        case Domain::Angle: return {Value(0.0), Value(pi), Value(pi / 2), Value(3 * pi / 2), Value(pi / 4)};
        case Domain::NonNegReal: return {Value(0), Value(1), Value(2), Value::rational(1, 2), Value(3)};
        default: return {Value(0), Value(1), Value(-1), Value(ExactScalar::i()), Value(ExactScalar::rational(1, 1, 1, 1))};
    }
}

inline mpq_class small_rational(std::mt19937_64& rng, int lo, int hi) {
    std::uniform_int_distribution<int> num(lo, hi), den(1, 4);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline Value random_value(Domain d, Backend b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (b == Backend::Exact) {
        switch (d) {
            case Domain::Angle: return Value(std::uniform_int_distribution<int>(0, 7)(rng) * std::numbers::pi / 4);
            case Domain::NonNegReal: return Value(ExactScalar(GaussQ(small_rational(rng, 0, 12))));
            default: return Value(ExactScalar(GaussQ(small_rational(rng, -8, 8), small_rational(rng, -8, 8))));
        }
    }
    switch (d) {
        case Domain::Angle: return Value(2 * std::numbers::pi * u(rng));
        case Domain::NonNegReal: return Value(3.0 * u(rng));
        default: return Value(FloatScalar(-2 + 4 * u(rng), -2 + 4 * u(rng)));
    }
}

inline std::uint64_t name_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
}

template <class S>
double compare_sides(const Diagram& lhs, const Diagram& rhs, double tol, bool& equal) {
    auto a = interpret<S>(lhs);
    auto b = interpret<S>(rhs);
    equal = matrices_equal<S>(a, b, tol);
    return max_deviation<S>(a, b);
}

}  // namespace detail

// Samples `samples` random assignments plus, for every free parameter, the
// five edge values of its domain (other parameters drawn at random).
inline SoundnessReport check_soundness(const RewriteRule& rule, std::size_t samples, Backend backend, double tol,
                                       std::uint64_t seed) {
    SoundnessReport rep;
    rep.rule = rule.name;
    rep.registry = rule.registry;
    std::mt19937_64 rng(seed ^ detail::name_hash(rule.name));
    const Capacity cap = backend == Backend::Float ? Capacity::defaults<FloatScalar>() : Capacity::defaults<ExactScalar>();

    auto draw_all = [&]() {
        Assignment v;
        for (const auto& p : rule.params)
            if (!p.derived) v[p.name] = detail::random_value(p.domain, backend, rng);
        return v;
    };
    auto draw_legs = [&]() {
        LegCounts l = base_legs(rule);
        for (const auto& s : rule.legs) l[s.name] = std::uniform_int_distribution<int>(s.min, s.max)(rng);
        return l;
    };

    auto run_one = [&](const Assignment& values, const LegCounts& legs) {
        Instance inst;
        try {
            inst = instantiate_full(rule, values, legs, tol);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SideConditionViolated) {
                ++rep.skipped;
                return;
            }
            throw;
        }
        if (static_cast<int>(inst.lhs.n_in + inst.lhs.n_out) > cap.open_wires) {
            ++rep.skipped;
            return;
        }
        bool equal = false;
        double dev = 0.0;
        try {
            dev = backend == Backend::Float ? detail::compare_sides<FloatScalar>(inst.lhs, inst.rhs, tol, equal)
                                            : detail::compare_sides<ExactScalar>(inst.lhs, inst.rhs, tol, equal);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::InexactParameter) {
                ++rep.skipped;
                return;
            }
            throw;
        }
        ++rep.checks;
        rep.worst_deviation = std::max(rep.worst_deviation, dev);
        if (!equal && rep.pass) {
            rep.pass = false;
            rep.counterexample = inst.values;
            rep.counterexample_legs = legs;
        }
    };

    for (const auto& p : rule.params) {
        if (p.derived) continue;
        for (const auto& ev : detail::edge_values(p.domain)) {
            Assignment v = draw_all();
            v[p.name] = ev;
            run_one(v, base_legs(rule));
        }
    }
    if (rule.params.empty() || std::all_of(rule.params.begin(), rule.params.end(), [](const ParamSpec& p) { return p.derived; }))
        run_one({}, base_legs(rule));
    // A rule with nothing to vary gives the same answer on every draw.
    const bool constant = std::none_of(rule.params.begin(), rule.params.end(), [](const ParamSpec& p) { return !p.derived; }) &&
                          rule.legs.empty();
    if (constant) samples = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        Assignment v = draw_all();
        run_one(v, draw_legs());
    }
    return rep;
}

}  // namespace zxalg
