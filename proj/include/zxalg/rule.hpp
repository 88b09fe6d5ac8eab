#pragma once

// Rewrite rules: parameterised LHS/RHS diagram pairs, their matching in a
// host diagram and the graph surgery that applies them.

#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "match.hpp"

namespace zxalg {

struct ParamSpec {
    std::string name;
    Domain domain = Domain::Complex;
    bool derived = false;  // computed by the rule's completion function
};

struct LegSpec {
    std::string name;
    int min = 0;
    int max = 4;
};

using BuildFn = std::function<std::pair<Diagram, Diagram>(const Assignment&, const LegCounts&)>;

struct RewriteRule {
    std::string name;
    std::string registry;
    std::vector<ParamSpec> params;
    std::vector<LegSpec> legs;
    std::string side_condition_tag;
    std::function<bool(const Assignment&, double)> side_condition;
    std::function<void(Assignment&)> complete;
    BuildFn build;
    // Tag of an open LHS node -> tag of the RHS node that inherits its extra legs.
    std::map<std::string, std::string> absorb;
    // ZH rules keep their native form; `build` then holds the translated pair.
    BuildFn zh_build;

    bool variadic() const { return !legs.empty(); }
    bool has_derived() const {
        return std::any_of(params.begin(), params.end(), [](const ParamSpec& p) { return p.derived; });
    }
};

struct RuleRegistry {
    std::string name;
    std::vector<RewriteRule> rules;

    const RewriteRule* find(const std::string& rule_name) const {
        for (const auto& r : rules)
            if (r.name == rule_name) return &r;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Parameter helpers for rule builders.  Each marks the node as an occurrence
// of the named variable so the matcher can bind it.

inline const Value& lookup(const Assignment& v, const std::string& name) {
    auto it = v.find(name);
    if (it == v.end()) throw Error(ErrorCode::MissingParameter, "parameter '" + name + "' not given");
    return it->second;
}

inline Param var(const Assignment& v, const std::string& name, int shift = 0) {
    return Param(lookup(v, name) + Value(shift), Symbol{name, Domain::Complex, shift});
}
inline Param nonzero_var(const Assignment& v, const std::string& name) {
    return Param(lookup(v, name), Symbol{name, Domain::NonZeroComplex, 0});
}
inline Param nonneg_var(const Assignment& v, const std::string& name) {
    return Param(lookup(v, name), Symbol{name, Domain::NonNegReal, 0});
}
inline Param angle_var(const Assignment& v, const std::string& name) {
    return Param(phase(lookup(v, name).num.real()), Symbol{name, Domain::Angle, 0});
}

inline LegCounts base_legs(const RewriteRule& r) {
    LegCounts l;
    for (const auto& s : r.legs) l[s.name] = s.min;
    return l;
}

struct Instance {
    Diagram lhs;
    Diagram rhs;
    Assignment values;  // including derived parameters
};

// Checks domains, completes derived parameters and validates the side condition.
inline Assignment complete_values(const RewriteRule& rule, Assignment values, double tol = 1e-9) {
    bool derived_missing = false;
    for (const auto& p : rule.params) {
        auto it = values.find(p.name);
        if (it == values.end()) {
            if (p.derived) {
                derived_missing = true;
                continue;
            }
            throw Error(ErrorCode::MissingParameter, rule.name + ": parameter '" + p.name + "' missing");
        }
        const FloatScalar x = it->second.num;
        switch (p.domain) {
            case Domain::Angle:
                if (std::abs(x.imag()) > tol) throw Error(ErrorCode::SideConditionViolated, p.name + " must be a real angle");
                break;
            case Domain::NonNegReal:
                if (std::abs(x.imag()) > tol || x.real() < -tol)
                    throw Error(ErrorCode::SideConditionViolated, p.name + " must be a nonnegative real");
                break;
            case Domain::NonZeroComplex:
                if (it->second.is_zero(tol)) throw Error(ErrorCode::SideConditionViolated, p.name + " must be nonzero");
                break;
            case Domain::Complex: break;
        }
    }
    if (derived_missing) {
        if (!rule.complete) throw Error(ErrorCode::MissingParameter, rule.name + ": derived parameters missing");
        rule.complete(values);
    }
    if (rule.side_condition && !rule.side_condition(values, tol))
        throw Error(ErrorCode::SideConditionViolated, rule.name + ": " + rule.side_condition_tag);
    return values;
}

inline Instance instantiate_full(const RewriteRule& rule, const Assignment& values, const LegCounts& legs = {},
                                 double tol = 1e-9) {
    LegCounts l = base_legs(rule);
    for (const auto& [k, v] : legs) l[k] = v;
    Assignment full = complete_values(rule, values, tol);
    auto [lhs, rhs] = rule.build(full, l);
    return {std::move(lhs), std::move(rhs), std::move(full)};
}

inline std::pair<Diagram, Diagram> instantiate(const RewriteRule& rule, const Assignment& values, const LegCounts& legs = {}) {
    auto inst = instantiate_full(rule, values, legs);
    return {std::move(inst.lhs), std::move(inst.rhs)};
}

// Generic values used to build a pattern whose parameters get bound by matching.
inline Assignment probe_values(const RewriteRule& rule) {
    Assignment v;
    double k = 0.0;
    for (const auto& p : rule.params) {
        if (p.derived) continue;
        k += 1.0;
        switch (p.domain) {
            case Domain::Angle: v[p.name] = Value(0.3 + 0.1 * k); break;
            case Domain::NonNegReal: v[p.name] = Value(1.1 + 0.2 * k); break;
            default: v[p.name] = Value(FloatScalar(0.37 + 0.1 * k, 0.21 - 0.05 * k)); break;
        }
    }
    return v;
}

// Probe values with derived parameters filled in, enough to build either side.
inline Assignment probe_values_completed(const RewriteRule& rule) {
    Assignment v = probe_values(rule);
    if (rule.has_derived() && rule.complete) rule.complete(v);
    return v;
}

inline std::vector<LegCounts> leg_family(const RewriteRule& rule) {
    std::vector<LegCounts> out{base_legs(rule)};
    if (!rule.absorb.empty() || rule.legs.empty()) return out;
    out.clear();
    std::function<void(std::size_t, LegCounts&)> rec = [&](std::size_t i, LegCounts& cur) {
        if (i == rule.legs.size()) {
            out.push_back(cur);
            return;
        }
        for (int c = rule.legs[i].min; c <= rule.legs[i].max; ++c) {
            cur[rule.legs[i].name] = c;
            rec(i + 1, cur);
        }
    };
    LegCounts cur;
    rec(0, cur);
    return out;
}

struct RuleMatch {
    Embedding emb;
    Assignment values;
    LegCounts legs;
};

// All places where the rule's LHS occurs in the host, with the parameter
// values read off the host.
inline std::vector<RuleMatch> find_rule_matches(const RewriteRule& rule, const Diagram& host, double tol = 1e-9) {
    std::vector<RuleMatch> out;
    Assignment probe = probe_values(rule);
    for (const auto& legs : leg_family(rule)) {
        Diagram pattern;
        try {
            // The probe only fixes the shape; its values never reach the result.
            Assignment pv = probe;
            if (rule.has_derived() && rule.complete) rule.complete(pv);
            pattern = rule.build(pv, legs).first;
        } catch (const Error&) {
            continue;
        }
        MatchOptions opt;
        opt.check_untagged = false;
        opt.tol = tol;
        for (auto& emb : find_matches(pattern, host, opt)) {
            Assignment values;
            bool complete = true;
            for (const auto& p : rule.params) {
                if (p.derived) continue;
                auto it = emb.bindings.find(p.name);
                if (it == emb.bindings.end()) {
                    complete = false;
                    break;
                }
                values[p.name] = it->second;
            }
            if (!complete) continue;
            Instance inst;
            try {
                inst = instantiate_full(rule, values, legs, tol);
            } catch (const Error&) {
                continue;
            } catch (const std::domain_error&) {
                continue;
            }
            // Every parameter, bound or computed, must agree with the host.
            bool agree = true;
            for (const auto& [pid, hid] : emb.node_map) {
                const Node& pn = inst.lhs.nodes.at(pid);
                if (has_param(pn.kind) && !values_close(pn.param.value, host.nodes.at(hid).param.value, tol)) {
                    agree = false;
                    break;
                }
            }
            if (agree) out.push_back({std::move(emb), std::move(inst.values), legs});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rewriting

inline Diagram rewrite(const Diagram& host, const RewriteRule& rule, const Embedding& emb, const Assignment& values,
                       const LegCounts& legs = {}, double tol = 1e-9) {
    Instance inst = instantiate_full(rule, values, legs, tol);
    const Diagram& lhs = inst.lhs;
    const Diagram& rhs = inst.rhs;
    if (lhs.n_in != rhs.n_in || lhs.n_out != rhs.n_out)
        throw Error(ErrorCode::ArityMismatch, rule.name + ": LHS and RHS boundaries differ");

    const Incidence hinc = incidence(host);
    const Incidence pinc = incidence(lhs);
    auto stale = [&](const std::string& why) { return Error(ErrorCode::StaleEmbedding, rule.name + ": " + why); };

    // The embedding must still describe this host.
    if (emb.node_map.size() != lhs.nodes.size()) throw stale("node map does not cover the pattern");
    std::map<NodePort, NodePort> leg_inv;
    for (const auto& [pid, hid] : emb.node_map) {
        auto hit = host.nodes.find(hid);
        if (hit == host.nodes.end()) throw stale("host node n" + std::to_string(hid) + " missing");
        const Node& pn = lhs.nodes.at(pid);
        const Node& hn = hit->second;
        if (pn.kind != hn.kind) throw stale("kind mismatch at n" + std::to_string(hid));
        if (!pn.open && pn.degree() != hn.degree()) throw stale("arity mismatch at n" + std::to_string(hid));
        if (pn.open && hn.degree() < pn.degree()) throw stale("arity mismatch at n" + std::to_string(hid));
        if (has_param(pn.kind) && !values_close(pn.param.value, hn.param.value, tol))
            throw stale("parameter mismatch at n" + std::to_string(hid));
        for (std::uint32_t p = 0; p < pn.degree(); ++p) {
            auto lit = emb.leg_map.find(NodePort{pid, p});
            if (lit == emb.leg_map.end() || lit->second.node != hid || lit->second.port >= hn.degree())
                throw stale("leg map incomplete");
            if (!leg_inv.emplace(lit->second, lit->first).second) throw stale("leg map not injective");
        }
    }
    std::set<std::size_t> consumed;
    for (const auto& e : lhs.edges) {
        if (!is_port(e.a) || !is_port(e.b)) continue;
        const NodePort ha = emb.leg_map.at(as_port(e.a));
        const NodePort hb = emb.leg_map.at(as_port(e.b));
        const auto& [idx, partner] = hinc.at(ha);
        if (!is_port(partner) || as_port(partner) != hb) throw stale("edge " + to_string(ha) + " no longer present");
        consumed.insert(idx);
    }
    if (host.loops < lhs.loops) throw stale("not enough closed loops");

    // Junction k stands for LHS boundary slot k (inputs first).
    auto junction_of = [&](const Bound& b) -> std::uint32_t { return b.side == Side::In ? b.index : lhs.n_in + b.index; };

    // Fresh RHS nodes; absorbing nodes grow by the extra legs of the open nodes.
    Diagram out;
    for (const auto& [id, node] : host.nodes) {
        bool matched = false;
        for (const auto& [pid, hid] : emb.node_map)
            if (hid == id) matched = true;
        if (!matched) out.nodes[id] = node;
    }
    const NodeId offset = host.next_id();
    std::map<std::string, NodeId> rhs_by_tag;
    for (const auto& [id, node] : rhs.nodes)
        if (!node.tag.empty()) rhs_by_tag[node.tag] = id;

    // For each absorbing RHS node, the host legs it inherits, split by direction.
    std::map<NodeId, std::vector<NodePort>> extra_in, extra_out;
    for (const auto& [pid, hid] : emb.node_map) {
        const Node& pn = lhs.nodes.at(pid);
        const Node& hn = host.nodes.at(hid);
        if (pn.degree() == hn.degree()) continue;
        auto ab = rule.absorb.find(pn.tag);
        if (ab == rule.absorb.end() || !rhs_by_tag.count(ab->second))
            throw stale("open node without an absorbing partner");
        NodeId target = rhs_by_tag.at(ab->second);
        for (std::uint32_t p = 0; p < hn.degree(); ++p) {
            NodePort hp{hid, p};
            if (leg_inv.count(hp)) continue;
            (p < hn.n ? extra_in : extra_out)[target].push_back(hp);
        }
    }
    std::map<NodePort, NodePort> rhs_port;   // original RHS port -> final port
    std::map<NodePort, NodePort> host_extra;  // inherited host leg -> final port
    for (const auto& [id, node] : rhs.nodes) {
        Node nn = node;
        nn.open = false;
        nn.tag.clear();
        const auto& ein = extra_in[id];
        const auto& eout = extra_out[id];
        if ((!ein.empty() || !eout.empty()) && !symmetric_legs(node.kind))
            throw Error(ErrorCode::IllegalArity, rule.name + ": cannot absorb legs into a triangle");
        std::uint32_t nin = node.n + static_cast<std::uint32_t>(ein.size());
        for (std::uint32_t p = 0; p < node.degree(); ++p)
            rhs_port[NodePort{id, p}] = NodePort{id + offset, p < node.n ? p : p + static_cast<std::uint32_t>(ein.size())};
        for (std::size_t k = 0; k < ein.size(); ++k)
            host_extra[ein[k]] = NodePort{id + offset, node.n + static_cast<std::uint32_t>(k)};
        for (std::size_t k = 0; k < eout.size(); ++k)
            host_extra[eout[k]] = NodePort{id + offset, nin + node.m + static_cast<std::uint32_t>(k)};
        nn.n = nin;
        nn.m = node.m + static_cast<std::uint32_t>(eout.size());
        out.nodes[id + offset] = nn;
    }

    std::vector<Link> links;
    auto host_end = [&](const Endpoint& e) -> LinkEnd {
        if (!is_port(e)) return e;
        const NodePort& hp = as_port(e);
        auto li = leg_inv.find(hp);
        if (li != leg_inv.end()) {
            const Endpoint& pp = pinc.at(li->second).second;
            if (is_port(pp)) throw stale("internal pattern edge leaks outside the match");
            return Junction{junction_of(as_bound(pp))};
        }
        auto ex = host_extra.find(hp);
        if (ex != host_extra.end()) return Endpoint(ex->second);
        return e;
    };
    for (std::size_t i = 0; i < host.edges.size(); ++i) {
        if (consumed.count(i)) continue;
        links.push_back({host_end(host.edges[i].a), host_end(host.edges[i].b)});
    }
    auto rhs_end = [&](const Endpoint& e) -> LinkEnd {
        if (is_port(e)) return Endpoint(rhs_port.at(as_port(e)));
        return Junction{junction_of(as_bound(e))};
    };
    for (const auto& e : rhs.edges) links.push_back({rhs_end(e.a), rhs_end(e.b)});

    auto c = collapse_links(links, lhs.n_in + lhs.n_out);
    out.edges = std::move(c.edges);
    out.n_in = host.n_in;
    out.n_out = host.n_out;
    out.loops = host.loops - lhs.loops + rhs.loops + c.loops;
    return out;
}

inline Diagram apply_match(const Diagram& host, const RewriteRule& rule, const RuleMatch& m, double tol = 1e-9) {
    return rewrite(host, rule, m.emb, m.values, m.legs, tol);
}

}  // namespace zxalg
