#include <gtest/gtest.h>

#include <random>
#include <zxalg/harness.hpp>
#include <zxalg/simplify.hpp>

#include "oracle.hpp"

using namespace zxalg;
using namespace zxalg::gadget;
using oracle::C;

namespace {

const RewriteRule& rule(const std::string& name) {
    static const std::vector<RewriteRule> rules = all_rules();
    for (const auto& r : rules)
        if (r.name == name) return r;
    throw std::out_of_range(name);
}

double oracle_gap(const Diagram& a, const Diagram& b) { return oracle::dist(oracle::evaluate(a), oracle::evaluate(b)); }

Assignment vals(std::initializer_list<std::pair<const std::string, Value>> xs) { return Assignment(xs); }

// Every way to place `pattern` (closed nodes, no self-loops) inside `host`,
// keyed by the host nodes and host edges it covers.
std::set<std::pair<std::vector<NodeId>, std::vector<std::size_t>>> brute_force_matches(const Diagram& pattern,
                                                                                     const Diagram& host) {
    std::vector<NodeId> pids, hids;
    for (const auto& [id, _] : pattern.nodes) pids.push_back(id);
    for (const auto& [id, _] : host.nodes) hids.push_back(id);
    std::map<std::pair<NodeId, NodeId>, int> pmult;
    for (const auto& e : pattern.edges)
        if (is_port(e.a) && is_port(e.b)) ++pmult[std::minmax(as_port(e.a).node, as_port(e.b).node)];
    std::map<std::pair<NodeId, NodeId>, std::vector<std::size_t>> hedges;
    for (std::size_t i = 0; i < host.edges.size(); ++i) {
        const auto& e = host.edges[i];
        if (is_port(e.a) && is_port(e.b)) hedges[std::minmax(as_port(e.a).node, as_port(e.b).node)].push_back(i);
    }

    std::set<std::pair<std::vector<NodeId>, std::vector<std::size_t>>> out;
    std::vector<NodeId> img(pids.size());
    std::function<void(std::size_t, std::set<NodeId>&)> rec = [&](std::size_t k, std::set<NodeId>& used) {
        if (k == pids.size()) {
            // Choose which host edges realise each pattern edge bundle.
            std::vector<std::vector<std::vector<std::size_t>>> options;
            for (const auto& [pair, mult] : pmult) {
                std::size_t ia = std::find(pids.begin(), pids.end(), pair.first) - pids.begin();
                std::size_t ib = std::find(pids.begin(), pids.end(), pair.second) - pids.begin();
                auto key = std::minmax(img[ia], img[ib]);
                const auto& avail = hedges.count(key) ? hedges.at(key) : std::vector<std::size_t>{};
                if (static_cast<int>(avail.size()) < mult) return;
                std::vector<std::vector<std::size_t>> subsets;
                for (std::size_t mask = 0; mask < (std::size_t{1} << avail.size()); ++mask) {
                    if (std::popcount(mask) != mult) continue;
                    std::vector<std::size_t> s;
                    for (std::size_t j = 0; j < avail.size(); ++j)
                        if (mask >> j & 1) s.push_back(avail[j]);
                    subsets.push_back(s);
                }
                options.push_back(subsets);
            }
            std::function<void(std::size_t, std::vector<std::size_t>)> pick = [&](std::size_t i, std::vector<std::size_t> acc) {
                if (i == options.size()) {
                    std::vector<NodeId> nodes(img);
                    std::sort(nodes.begin(), nodes.end());
                    std::sort(acc.begin(), acc.end());
                    out.insert({nodes, acc});
                    return;
                }
                for (const auto& s : options[i]) {
                    auto next = acc;
                    next.insert(next.end(), s.begin(), s.end());
                    pick(i + 1, next);
                }
            };
            pick(0, {});
            return;
        }
        const Node& pn = pattern.nodes.at(pids[k]);
        for (NodeId h : hids) {
            const Node& hn = host.nodes.at(h);
            if (used.count(h) || hn.kind != pn.kind || hn.degree() != pn.degree()) continue;
            used.insert(h);
            img[k] = h;
            rec(k + 1, used);
            used.erase(h);
        }
    };
    std::set<NodeId> used;
    rec(0, used);
    return out;
}

}  // namespace

// ---------------------------------------------------------------- registries

TEST(Registry, Sizes) {
    EXPECT_EQ(registry_algebraic().rules.size(), 16u);
    EXPECT_EQ(registry_legacy().rules.size(), 25u);
    EXPECT_EQ(registry_zh().rules.size(), 11u);
    for (const char* name : {"Hopf", "Ivs", "Picp", "Com", "Sca", "Zos", "Sml", "Irt", "AD'", "IVT", "TRPh", "H2", "BiA",
                             "Dis", "BiAr", "Brkp", "Zrp", "Zero'", "Bas0'"})
        EXPECT_NE(registry_derived().find(name), nullptr) << name;
    EXPECT_THROW(registries_by_name("nope"), std::invalid_argument);
}

TEST(Registry, FusionInstance) {
    auto [lhs, rhs] = instantiate(rule("S1"), vals({{"a", Value(2)}, {"b", Value(3)}}), {{"n", 1}, {"m", 1}, {"p", 0}});
    EXPECT_EQ(lhs.nodes.size(), 2u);
    ASSERT_EQ(rhs.nodes.size(), 1u);
    EXPECT_EQ(*rhs.nodes.begin()->second.param.value.exact, ExactScalar(6));
    // diag(1,2) diag(1,3) = diag(1,6)
    oracle::Mat d6(2, 2, {1, 0, 0, 6});
    EXPECT_LT(oracle::dist(oracle::evaluate(rhs), d6), 1e-12);
    EXPECT_LT(oracle_gap(lhs, rhs), 1e-12);
}

TEST(Registry, TriangleInverse) {
    auto [lhs, rhs] = instantiate(rule("Inv"), {});
    EXPECT_TRUE(structural_eq(lhs, compose(triangle(), triangle_inv())));
    EXPECT_TRUE(structural_eq(rhs, identity(1)));
    EXPECT_LT(oracle_gap(lhs, rhs), 1e-12);
}

TEST(Registry, HadamardSquares) {
    auto [lhs, rhs] = instantiate(rule("1d"), {});
    EXPECT_TRUE(structural_eq(lhs, seq({H(), H()})));
    EXPECT_LT(oracle_gap(lhs, rhs), 1e-12);
}

TEST(Registry, SumRuleZeroBranch) {
    const double pi = std::numbers::pi;
    auto inst = instantiate_full(rule("2o"), vals({{"l1", Value(1)}, {"alpha", Value(0.0)}, {"l2", Value(1)}, {"beta", Value(pi)}}));
    EXPECT_TRUE(inst.values.at("lambda").is_zero(1e-15));
    EXPECT_LT(oracle_gap(inst.lhs, inst.rhs), 1e-12);
    try {
        instantiate_full(rule("2o"), vals({{"l1", Value(1)}, {"alpha", Value(0.0)}, {"l2", Value(1)}, {"beta", Value(0.0)},
                                           {"lambda", Value(1)}, {"gamma", Value(0.0)}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SideConditionViolated);
    }
}

TEST(Registry, ParameterFreeRuleInstantiates) {
    auto [lhs, rhs] = instantiate(rule("Zero"), {});
    EXPECT_TRUE(validate(lhs).empty());
    EXPECT_TRUE(validate(rhs).empty());
    EXPECT_LT(oracle_gap(lhs, rhs), 1e-12);
}

TEST(Registry, MissingParameter) {
    try {
        instantiate(rule("S1"), vals({{"a", Value(2)}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingParameter);
    }
}

TEST(Registry, SelectedLemmasAgainstOracle) {
    std::mt19937_64 rng(3);
    for (const char* name : {"Hopf", "Picp", "Com", "HS2"}) {
        const auto& r = rule(name);
        Assignment v;
        for (const auto& p : r.params)
            if (!p.derived) v[p.name] = Value(C(0.3 + 0.1 * static_cast<double>(rng() % 7), -0.2));
        for (const auto& legs : leg_family(r)) {
            auto [lhs, rhs] = instantiate(r, v, legs);
            if (lhs.edges.size() > 14 || rhs.edges.size() > 14) continue;
            EXPECT_LT(oracle_gap(lhs, rhs), 1e-9) << name;
        }
    }
    // A few spot checks with extra legs on the absorbing nodes.
    auto [lhs, rhs] = instantiate(rule("Hopf"), vals({{"a", Value(C(0.5, 1))}, {"b", Value(-2)}}), {{"nz", 1}, {"nx", 2}});
    EXPECT_LT(oracle_gap(lhs, rhs), 1e-9);
}

// ---------------------------------------------------------------- matching

TEST(Match, FusionPatternInChain) {
    Diagram host = seq({Z(1, 1, Value(2)), Z(1, 1, Value(3))});
    EXPECT_EQ(find_rule_matches(rule("S1"), host).size(), 1u);
    EXPECT_TRUE(find_rule_matches(rule("S1"), hadamard()).empty());
}

TEST(Match, HopfPattern) {
    Diagram host = seq({Z(1, 2, Value(2)), X(2, 1, Value(3))});
    auto m = find_rule_matches(rule("Hopf"), host);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0].values.at("a").num, C(2.0));
    EXPECT_EQ(m[0].values.at("b").num, C(3.0));
}

TEST(Match, AgreesWithBruteForce) {
    MatchOptions opt;
    opt.check_untagged = false;
    const std::vector<Diagram> patterns = {
        seq({Z(1, 1), Z(1, 2)}),                       // Z - Z, single edge
        seq({Z(1, 2), X(2, 1)}),                       // Z = X, double edge
        seq({Z(1, 2), par({X(1, 1), Z(1, 1)})}),       // three-node path
    };
    std::size_t total = 0;
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        Diagram host = random_diagram(seed, 6, 4);
        for (const auto& p : patterns) {
            auto lib = find_matches(p, host, opt);
            std::set<std::pair<std::vector<NodeId>, std::vector<std::size_t>>> got;
            for (const auto& e : lib) {
                std::vector<NodeId> ns;
                for (const auto& [_, h] : e.node_map) ns.push_back(h);
                std::sort(ns.begin(), ns.end());
                std::vector<std::size_t> es;
                for (auto i : e.edge_map)
                    if (i != npos) es.push_back(i);
                std::sort(es.begin(), es.end());
                got.insert({ns, es});
            }
            EXPECT_EQ(got, brute_force_matches(p, host)) << "seed " << seed;
            total += got.size();
        }
    }
    EXPECT_GT(total, 0u);
}

// ---------------------------------------------------------------- rewriting

TEST(Rewrite, FuseTwoSpiders) {
    Diagram host = seq({Z(1, 1, Value(2)), Z(1, 1, Value(3))});
    auto m = find_rule_matches(rule("S1"), host);
    ASSERT_FALSE(m.empty());
    Diagram out = apply_match(host, rule("S1"), m[0]);
    EXPECT_TRUE(structural_eq(out, Z(1, 1, Value(6))));
}

TEST(Rewrite, IdentitySpiderBecomesWire) {
    Diagram host = seq({H(), Z(1, 1), X(1, 1, Value(5))});
    auto m = find_rule_matches(rule("S2"), host);
    ASSERT_EQ(m.size(), 1u);
    Diagram out = apply_match(host, rule("S2"), m[0]);
    EXPECT_TRUE(structural_eq(out, seq({H(), X(1, 1, Value(5))})));
    EXPECT_TRUE(structural_eq(apply_match(Z(1, 1), rule("S2"), find_rule_matches(rule("S2"), Z(1, 1))[0]), identity(1)));
}

TEST(Rewrite, TriangleCancellation) {
    Diagram host = compose(triangle(), triangle_inv());
    auto m = find_rule_matches(rule("Inv"), host);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_TRUE(structural_eq(apply_match(host, rule("Inv"), m[0]), identity(1)));
}

TEST(Rewrite, FusionAbsorbsContext) {
    // Spiders with extra legs fuse into one spider carrying all of them.
    Diagram host = seq({Z(2, 2, Value(2)), par({Z(1, 3, Value(C(0, 1))), H()})});
    auto m = find_rule_matches(rule("S1"), host);
    ASSERT_FALSE(m.empty());
    Diagram out = apply_match(host, rule("S1"), m[0]);
    EXPECT_TRUE(validate(out).empty());
    EXPECT_EQ(out.nodes.size(), 2u);
    EXPECT_LT(oracle_gap(host, out), 1e-9);
}

TEST(Rewrite, StaleEmbedding) {
    Diagram host = seq({Z(1, 1, Value(2)), Z(1, 1, Value(3))});
    auto m = find_rule_matches(rule("S1"), host);
    ASSERT_FALSE(m.empty());
    Diagram changed = apply_match(host, rule("S1"), m[0]);
    try {
        apply_match(changed, rule("S1"), m[0]);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::StaleEmbedding);
    }
}

TEST(Rewrite, EveryRuleRewritesItsOwnLhs) {
    for (const auto& r : all_rules()) {
        Assignment v = probe_values(r);
        Instance inst;
        try {
            inst = instantiate_full(r, v);
        } catch (const Error&) {
            continue;  // probe outside the side condition
        }
        auto matches = find_rule_matches(r, inst.lhs);
        ASSERT_FALSE(matches.empty()) << r.name;
        Diagram out = apply_match(inst.lhs, r, matches[0]);
        EXPECT_TRUE(validate(out).empty()) << r.name;
        if (inst.lhs.n_in + inst.lhs.n_out <= 8) {
            EXPECT_LT(max_deviation(interpret<FloatScalar>(out), interpret<FloatScalar>(inst.lhs)), 1e-9) << r.name;
        }
    }
}

// ---------------------------------------------------------------- simplify

TEST(Simplify, SpiderChain) {
    for (int k = 2; k <= 6; ++k) {
        std::vector<Diagram> chain;
        ExactScalar prod(1);
        for (int j = 0; j < k; ++j) {
            chain.push_back(Z(1, 1, Value(j + 2)));
            prod *= ExactScalar(j + 2);
        }
        auto res = simplify(seq(chain));
        EXPECT_TRUE(structural_eq(res.diagram, Z(1, 1, Value(prod)))) << k;
        EXPECT_EQ(res.log.size(), static_cast<std::size_t>(k - 1));
    }
}

TEST(Simplify, TriangleChain) {
    auto res = simplify(seq({Ti(), T(), Ti(), T()}));
    EXPECT_TRUE(structural_eq(res.diagram, identity(1)));
    auto res2 = simplify(seq({T(), Ti(), T(), Ti()}));
    EXPECT_TRUE(structural_eq(res2.diagram, identity(1)));
}

TEST(Simplify, MinimalDiagramUnchanged) {
    Diagram d = seq({Z(1, 2, Value(2)), par({H(), X(1, 1, Value(3))})});
    auto res = simplify(d);
    EXPECT_TRUE(res.log.empty());
    EXPECT_TRUE(structural_eq(res.diagram, d));
}

TEST(Simplify, PreservesSemanticsOnRandomDiagrams) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Diagram d = random_diagram(seed, 8, 6);
        auto res = simplify(d);
        EXPECT_LE(size_measure(res.diagram), size_measure(d));
        EXPECT_LT(max_deviation(interpret<FloatScalar>(res.diagram), interpret<FloatScalar>(d)), 1e-9) << seed;
    }
}

// ---------------------------------------------------------------- ZH

TEST(ZH, HBoxMatrices) {
    Value a(ExactScalar::rational(7, 3, -1, 2));
    auto m = interpret<ExactScalar>(h_box(1, 1, a));
    EXPECT_EQ(m.at(0, 0), ExactScalar(1));
    EXPECT_EQ(m.at(0, 1), ExactScalar(1));
    EXPECT_EQ(m.at(1, 0), ExactScalar(1));
    EXPECT_EQ(m.at(1, 1), *a.exact);
    auto hm = to_float(interpret<ExactScalar>(h_box(1, 1)));
    auto h = interpret<FloatScalar>(hadamard());
    for (auto& x : h.data) x *= std::sqrt(2.0);
    EXPECT_LT(max_deviation(hm, h), 1e-12);
    EXPECT_EQ(interpret<ExactScalar>(h_box(0, 0, a)).at(0, 0), *a.exact);
}

TEST(ZH, TranslationExamples) {
    Value a(ExactScalar::rational(5, 1, 2, 1));
    Diagram t = translate(h_box(1, 1, a));
    EXPECT_EQ(t.nodes.size(), 3u);
    EXPECT_TRUE(matrices_equal(interpret<ExactScalar>(t), interpret<ExactScalar>(h_box(1, 1, a)), 0));
    Diagram t01 = translate(h_box(0, 1, a));
    auto v = interpret<ExactScalar>(t01);
    EXPECT_EQ(v.at(0, 0), ExactScalar(1));
    EXPECT_EQ(v.at(1, 0), *a.exact);
    EXPECT_TRUE(structural_eq(translate(z_spider(2, 1)), z_spider(2, 1)));
}

TEST(ZH, TranslationAgreesWithSumFormula) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (std::uint32_t n = 0; n <= 3; ++n)
        for (std::uint32_t m = 0; n + m <= 4; ++m)
            for (int k = 0; k < 5; ++k) {
                C a(g(rng), g(rng));
                Diagram hb = h_box(n, m, Value(a));
                oracle::Mat ref(std::size_t{1} << m, std::size_t{1} << n);
                for (std::size_t r = 0; r < ref.rows; ++r)
                    for (std::size_t c = 0; c < ref.cols; ++c)
                        ref(r, c) = (r == ref.rows - 1 && c == ref.cols - 1) ? a : C(1.0);
                EXPECT_LT(oracle::dist(oracle::from(interpret<FloatScalar>(translate(hb))), ref), 1e-9);
            }
}

TEST(ZH, ValidateRejectsZxGenerators) {
    EXPECT_TRUE(validate_zh(seq({h_box(1, 2, Value(3)), z_spider(2, 1)})).empty());
    EXPECT_FALSE(validate_zh(hadamard()).empty());
    EXPECT_FALSE(validate_zh(z_spider(1, 1, Value(2))).empty());
}

TEST(ZH, RuleSoundness) {
    auto hs2 = check_soundness(rule("HS2"), 0, Backend::Exact, 1e-9, 1);
    EXPECT_TRUE(hs2.pass);
    EXPECT_GT(hs2.checks, 0u);
    auto avg = check_soundness(rule("A"), 100, Backend::Float, 1e-9, 42);
    EXPECT_TRUE(avg.pass);
    EXPECT_GE(avg.checks, 100u);
}

TEST(ZH, TranslatedRulesMatchZxHosts) {
    // A ZH rule stated on H-boxes fires on the ZX translation of its own LHS.
    const auto& r = rule("HS1");
    ASSERT_TRUE(r.zh_build);
    Assignment v{{"a", Value(C(0.4, -1.2))}};
    auto [zh_lhs, zh_rhs] = r.zh_build(v, {{"n", 1}, {"m", 2}});
    Diagram host = translate(zh_lhs);
    auto matches = find_rule_matches(r, host);
    ASSERT_FALSE(matches.empty());
    EXPECT_LT(std::abs(matches[0].values.at("a").num - C(0.4, -1.2)), 1e-12);
    Diagram out = apply_match(host, r, matches[0]);
    EXPECT_LT(max_deviation(interpret<FloatScalar>(out), interpret<FloatScalar>(translate(zh_rhs))), 1e-9);
}
