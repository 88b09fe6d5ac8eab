#pragma once

// A terminating rewrite strategy: spider fusion, identity removal, triangle
// cancellation, the Hopf law and scalar clean-up.  Each step strictly lowers
// nodes + edges, so at most that many steps are ever taken.

#include "registries.hpp"

namespace zxalg {

struct SimplifyStep {
    std::string rule;
    std::vector<NodeId> nodes;  // host nodes consumed by the step
};

struct SimplifyResult {
    Diagram diagram;
    std::vector<SimplifyStep> log;
};

inline std::vector<RewriteRule> simplify_rules() {
    auto alg = registry_algebraic();
    auto der = registry_derived();
    std::vector<RewriteRule> out{*alg.find("S1"), *alg.find("S2"), *alg.find("Inv")};
    RewriteRule inv_rev = *alg.find("Inv");
    inv_rev.name = "Inv-rev";
    inv_rev.build = [](const Assignment&, const LegCounts&) {
        return std::pair<Diagram, Diagram>{compose(triangle_inv(), triangle()), identity(1)};
    };
    out.push_back(inv_rev);
    out.push_back(*der.find("Hopf"));
    out.push_back(*der.find("Sml"));
    out.push_back(*der.find("Zos"));
    return out;
}

inline std::size_t size_measure(const Diagram& d) { return d.nodes.size() + d.edges.size(); }

inline SimplifyResult simplify(const Diagram& d, std::size_t max_steps = 10000, double tol = 1e-9) {
    static const std::vector<RewriteRule> rules = simplify_rules();
    SimplifyResult res{d, {}};
    for (std::size_t step = 0; step < max_steps; ++step) {
        bool applied = false;
        for (const auto& rule : rules) {
            auto matches = find_rule_matches(rule, res.diagram, tol);
            if (matches.empty()) continue;
            auto key = [](const RuleMatch& m) {
                std::vector<NodeId> ids;
                for (const auto& [p, h] : m.emb.node_map) ids.push_back(h);
                std::sort(ids.begin(), ids.end());
                return ids;
            };
            auto best = std::min_element(matches.begin(), matches.end(),
                                         [&](const RuleMatch& a, const RuleMatch& b) { return key(a) < key(b); });
            Diagram next = apply_match(res.diagram, rule, *best, tol);
            if (size_measure(next) >= size_measure(res.diagram)) continue;
            res.log.push_back({rule.name, key(*best)});
            res.diagram = std::move(next);
            applied = true;
            break;
        }
        if (!applied) break;
    }
    return res;
}

}  // namespace zxalg
