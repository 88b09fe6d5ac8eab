#pragma once

// JSON encodings of scalars, diagrams, matrices, scripts and reports.
//
// Diagram: {"nodes":[{"id","kind","n","m","param"?}], "edges":[[ep,ep]],
//           "inputs":[ep], "outputs":[ep], "loops"?}
// "edges" lists node-to-node edges; inputs[i] / outputs[j] give the endpoint
// joined to that boundary slot (a node port or another boundary slot).  A
// port index counts inputs first, then outputs.

#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <limits>

#include "harness.hpp"
#include "simplify.hpp"

namespace zxalg::io {

using json = nlohmann::json;

inline json big_int(const mpz_class& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

inline mpz_class parse_int(const json& j) {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_string()) return mpz_class(j.get<std::string>());
    throw Error(ErrorCode::Parse, "expected an integer, got " + j.dump());
}

inline json gauss_json(const GaussQ& g) {
    return json::array({big_int(g.re.get_num()), big_int(g.re.get_den()), big_int(g.im.get_num()), big_int(g.im.get_den())});
}

inline GaussQ gauss_from(const json& j) {
    if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::Parse, "Gaussian rational needs 4 integers");
    auto q = [&](std::size_t k) {
        mpz_class den = parse_int(j[k + 1]);
        if (sgn(den) == 0) throw Error(ErrorCode::Parse, "zero denominator");
        mpq_class r(parse_int(j[k]), den);
        r.canonicalize();
        return r;
    };
    return GaussQ(q(0), q(2));
}

inline double rounded(double x, int precision) {
    if (precision <= 0 || x == 0.0 || !std::isfinite(x)) return x;
    std::ostringstream os;
    os << std::setprecision(precision) << x;
    return std::stod(os.str());
}

inline json to_json(const ExactScalar& x) { return {{"p", gauss_json(x.p())}, {"q", gauss_json(x.q())}}; }
inline json to_json(const FloatScalar& x, int precision = 0) {
    return {{"re", rounded(x.real(), precision)}, {"im", rounded(x.imag(), precision)}};
}

inline json to_json(const Value& v) { return v.exact ? to_json(*v.exact) : to_json(v.num); }

inline Value value_from(const json& j) {
    // Integers are exact; any other plain number is a float.
    if (j.is_number_integer() && std::abs(j.get<long long>()) < (1LL << 31)) return Value(static_cast<int>(j.get<long long>()));
    if (j.is_number()) return Value(j.get<double>());
    if (j.is_object() && j.contains("p")) {
        GaussQ q = j.contains("q") ? gauss_from(j.at("q")) : GaussQ();
        return Value(ExactScalar(gauss_from(j.at("p")), q));
    }
    if (j.is_object() && (j.contains("re") || j.contains("im"))) {
        double re = j.value("re", 0.0), im = j.value("im", 0.0);
        return Value(FloatScalar(re, im));
    }
    throw Error(ErrorCode::Parse, "unrecognised scalar " + j.dump());
}

inline Kind kind_from(const std::string& s) {
    for (Kind k : {Kind::Z, Kind::X, Kind::H, Kind::T, Kind::Tinv, Kind::HBox})
        if (s == kind_name(k)) return k;
    throw Error(ErrorCode::Parse, "unknown node kind '" + s + "'");
}

inline json endpoint_json(const Endpoint& e) {
    if (is_port(e)) return {{"node", std::to_string(as_port(e).node)}, {"port", as_port(e).port}};
    return {{"bound", as_bound(e).side == Side::In ? "in" : "out"}, {"index", as_bound(e).index}};
}

inline json to_json(const Diagram& d) {
    json nodes = json::array();
    for (const auto& [id, node] : d.nodes) {
        json n = {{"id", std::to_string(id)}, {"kind", kind_name(node.kind)}, {"n", node.n}, {"m", node.m}};
        if (has_param(node.kind)) n["param"] = to_json(node.param.value);
        nodes.push_back(n);
    }
    json edges = json::array();
    json inputs = json::array(), outputs = json::array();
    std::vector<json> in(d.n_in), out(d.n_out);
    for (const auto& e : d.edges) {
        if (is_port(e.a) && is_port(e.b)) {
            edges.push_back({endpoint_json(e.a), endpoint_json(e.b)});
            continue;
        }
        for (int side = 0; side < 2; ++side) {
            const Endpoint& me = side == 0 ? e.a : e.b;
            const Endpoint& other = side == 0 ? e.b : e.a;
            if (is_port(me)) continue;
            const Bound& b = as_bound(me);
            (b.side == Side::In ? in : out).at(b.index) = endpoint_json(other);
        }
    }
    for (auto& x : in) inputs.push_back(x);
    for (auto& x : out) outputs.push_back(x);
    json j = {{"nodes", nodes}, {"edges", edges}, {"inputs", inputs}, {"outputs", outputs}};
    if (d.loops) j["loops"] = d.loops;
    return j;
}

inline Diagram diagram_from(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Parse, "diagram must be a JSON object");
    Diagram d;
    std::map<std::string, NodeId> ids;
    NodeId next = 0;
    for (const auto& n : j.value("nodes", json::array())) {
        std::string id = n.at("id").is_string() ? n.at("id").get<std::string>() : n.at("id").dump();
        if (ids.count(id)) throw Error(ErrorCode::Parse, "duplicate node id '" + id + "'");
        Node node;
        node.kind = kind_from(n.at("kind").get<std::string>());
        node.n = n.at("n").get<std::uint32_t>();
        node.m = n.at("m").get<std::uint32_t>();
        if (has_param(node.kind))
            node.param = Param(n.contains("param") ? value_from(n.at("param")) : Value(node.kind == Kind::HBox ? -1 : 1));
        ids[id] = next;
        d.nodes[next++] = node;
    }
    auto endpoint = [&](const json& e) -> Endpoint {
        if (e.contains("bound")) {
            std::string s = e.at("bound").get<std::string>();
            if (s != "in" && s != "out") throw Error(ErrorCode::Parse, "bound must be 'in' or 'out'");
            return Bound{s == "in" ? Side::In : Side::Out, e.at("index").get<std::uint32_t>()};
        }
        std::string id = e.at("node").is_string() ? e.at("node").get<std::string>() : e.at("node").dump();
        auto it = ids.find(id);
        if (it == ids.end()) throw Error(ErrorCode::Parse, "edge references unknown node '" + id + "'");
        return NodePort{it->second, e.at("port").get<std::uint32_t>()};
    };
    std::set<std::pair<Endpoint, Endpoint>> seen;
    auto add_edge = [&](const Endpoint& a, const Endpoint& b) {
        auto key = std::minmax(a, b);
        if (!is_port(a) || !is_port(b)) {
            // Boundary attachments may be listed from both sides.
            if (!seen.insert(key).second) return;
        }
        d.edges.push_back({a, b});
    };
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::Parse, "edge must be a pair of endpoints");
        add_edge(endpoint(e[0]), endpoint(e[1]));
    }
    const auto ins = j.value("inputs", json::array());
    const auto outs = j.value("outputs", json::array());
    d.n_in = static_cast<std::uint32_t>(ins.size());
    d.n_out = static_cast<std::uint32_t>(outs.size());
    for (std::uint32_t i = 0; i < ins.size(); ++i) add_edge(Bound{Side::In, i}, endpoint(ins[i]));
    for (std::uint32_t i = 0; i < outs.size(); ++i) add_edge(Bound{Side::Out, i}, endpoint(outs[i]));
    d.loops = j.value("loops", 0u);
    return d;
}

template <class S>
json matrix_json(const Matrix<S>& m, int precision = 0) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if constexpr (std::is_same_v<S, ExactScalar>) row.push_back(to_json(m.at(r, c)));
            else row.push_back(to_json(m.at(r, c), precision));
        }
        rows.push_back(row);
    }
    return {{"m", m.m}, {"n", m.n}, {"entries", rows}};
}

inline json assignment_json(const Assignment& a) {
    json j = json::object();
    for (const auto& [k, v] : a) j[k] = to_json(v);
    return j;
}

inline json rule_catalogue(const RuleRegistry& reg) {
    json out = json::array();
    for (const auto& r : reg.rules) {
        auto [lhs, rhs] = r.build(probe_values_completed(r), base_legs(r));
        json params = json::array();
        for (const auto& p : r.params)
            params.push_back({{"name", p.name}, {"domain", to_string(p.domain)}, {"derived", p.derived}});
        json legs = json::array();
        for (const auto& l : r.legs) legs.push_back({{"name", l.name}, {"min", l.min}, {"max", l.max}});
        out.push_back({{"name", r.name},
                       {"registry", reg.name},
                       {"arity", {lhs.n_in, lhs.n_out}},
                       {"params", params},
                       {"legs", legs},
                       {"side_condition", r.side_condition_tag}});
    }
    return out;
}

inline json soundness_json(const SoundnessReport& r) {
    json j = {{"rule", r.rule},
              {"registry", r.registry},
              {"pass", r.pass},
              {"worst_deviation", r.worst_deviation},
              {"checks", r.checks},
              {"skipped", r.skipped}};
    if (r.counterexample) {
        j["counterexample"] = assignment_json(*r.counterexample);
        j["counterexample_legs"] = r.counterexample_legs;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json sweep_summary_json(const SweepReport& s) {
    return {{"summary", true},       {"rules", s.rules},   {"passed", s.passed},
            {"failed", s.failed},    {"checks", s.checks}, {"skipped", s.skipped},
            {"seed", s.seed},        {"backend", to_string(s.backend)}, {"tol", s.tol}};
}

inline DerivationScript script_from(const json& j) {
    DerivationScript s;
    s.name = j.value("name", std::string("script"));
    for (const auto& d : j.at("steps")) s.steps.push_back(diagram_from(d));
    for (const auto& r : j.value("rules", json::array())) {
        if (r.is_null()) s.rules.emplace_back(std::nullopt);
        else s.rules.emplace_back(r.get<std::string>());
    }
    return s;
}

inline json script_json(const DerivationScript& s) {
    json steps = json::array(), rules = json::array();
    for (const auto& d : s.steps) steps.push_back(to_json(d));
    for (const auto& r : s.rules) rules.push_back(r ? json(*r) : json(nullptr));
    return {{"name", s.name}, {"steps", steps}, {"rules", rules}};
}

}  // namespace zxalg::io
