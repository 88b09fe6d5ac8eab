#pragma once

// Open-graph representation of ZX and ZH diagrams.
//
// A node with kind K and arities (n, m) has ports 0..n-1 (inputs) followed
// by n..n+m-1 (outputs).  Every port and every boundary slot occurs in
// exactly one edge; an edge may join two boundary slots (a bare wire, cap
// or cup).  Closed loops carry no endpoints and are only counted.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "param.hpp"

namespace zxalg {

using NodeId = std::uint32_t;

enum class Kind { Z, X, H, T, Tinv, HBox };

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Z: return "Z";
        case Kind::X: return "X";
        case Kind::H: return "H";
        case Kind::T: return "T";
        case Kind::Tinv: return "Tinv";
        case Kind::HBox: return "HBox";
    }
    return "?";
}

inline bool has_param(Kind k) { return k == Kind::Z || k == Kind::X || k == Kind::HBox; }
inline bool fixed_arity(Kind k) { return k == Kind::H || k == Kind::T || k == Kind::Tinv; }
// Triangles are the only generators whose tensor is not invariant under leg permutation.
inline bool symmetric_legs(Kind k) { return k != Kind::T && k != Kind::Tinv; }

struct Node {
    Kind kind = Kind::Z;
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    Param param;
    bool open = false;  // pattern only: may match a host node with more legs
    std::string tag;    // pattern only: names the node for absorb maps

    Node() = default;
    Node(Kind k, std::uint32_t n_, std::uint32_t m_, Param p = {}) : kind(k), n(n_), m(m_), param(std::move(p)) {}

    std::uint32_t degree() const { return n + m; }
};

enum class Side { In, Out };

struct NodePort {
    NodeId node = 0;
    std::uint32_t port = 0;
    auto operator<=>(const NodePort&) const = default;
};

struct Bound {
    Side side = Side::In;
    std::uint32_t index = 0;
    auto operator<=>(const Bound&) const = default;
};

using Endpoint = std::variant<NodePort, Bound>;

inline bool is_port(const Endpoint& e) { return std::holds_alternative<NodePort>(e); }
inline const NodePort& as_port(const Endpoint& e) { return std::get<NodePort>(e); }
inline const Bound& as_bound(const Endpoint& e) { return std::get<Bound>(e); }

inline std::string to_string(const Endpoint& e) {
    std::ostringstream os;
    if (is_port(e))
        os << "(n" << as_port(e).node << "," << as_port(e).port << ")";
    else
        os << (as_bound(e).side == Side::In ? "in" : "out") << "[" << as_bound(e).index << "]";
    return os.str();
}

struct Edge {
    Endpoint a;
    Endpoint b;
};

struct Diagram {
    std::map<NodeId, Node> nodes;
    std::vector<Edge> edges;
    std::uint32_t n_in = 0;
    std::uint32_t n_out = 0;
    std::uint32_t loops = 0;

    NodeId next_id() const { return nodes.empty() ? 0 : nodes.rbegin()->first + 1; }

    std::size_t internal_edge_count() const {
        return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const Edge& e) {
            return is_port(e.a) && is_port(e.b);
        }));
    }
};

// Endpoint -> (edge index, partner endpoint).
using Incidence = std::map<Endpoint, std::pair<std::size_t, Endpoint>>;

inline Incidence incidence(const Diagram& d) {
    Incidence inc;
    for (std::size_t i = 0; i < d.edges.size(); ++i) {
        inc[d.edges[i].a] = {i, d.edges[i].b};
        inc[d.edges[i].b] = {i, d.edges[i].a};
    }
    return inc;
}

// ---------------------------------------------------------------------------
// Construction

inline Diagram make_generator(Kind kind, std::uint32_t n, std::uint32_t m, Param param = {}) {
    if (fixed_arity(kind) && (n != 1 || m != 1))
        throw Error(ErrorCode::IllegalArity, std::string(kind_name(kind)) + " must be 1->1");
    Diagram d;
    Node node{kind, n, m, std::move(param)};
    if (!has_param(kind)) node.param = Param{};
    d.nodes[0] = node;
    d.n_in = n;
    d.n_out = m;
    for (std::uint32_t i = 0; i < n; ++i) d.edges.push_back({Bound{Side::In, i}, NodePort{0, i}});
    for (std::uint32_t j = 0; j < m; ++j) d.edges.push_back({NodePort{0, n + j}, Bound{Side::Out, j}});
    return d;
}

inline Diagram identity(std::uint32_t k = 1) {
    Diagram d;
    d.n_in = d.n_out = k;
    for (std::uint32_t i = 0; i < k; ++i) d.edges.push_back({Bound{Side::In, i}, Bound{Side::Out, i}});
    return d;
}

inline Diagram empty_diagram() { return Diagram{}; }

inline Diagram swap_wires() {
    Diagram d;
    d.n_in = d.n_out = 2;
    d.edges.push_back({Bound{Side::In, 0}, Bound{Side::Out, 1}});
    d.edges.push_back({Bound{Side::In, 1}, Bound{Side::Out, 0}});
    return d;
}

inline Diagram cap() {
    Diagram d;
    d.n_out = 2;
    d.edges.push_back({Bound{Side::Out, 0}, Bound{Side::Out, 1}});
    return d;
}

inline Diagram cup() {
    Diagram d;
    d.n_in = 2;
    d.edges.push_back({Bound{Side::In, 0}, Bound{Side::In, 1}});
    return d;
}

// ---------------------------------------------------------------------------
// Gluing.  Links join real endpoints and junctions; every junction occurs in
// exactly two link ends.  Chains through junctions collapse to single edges
// and chains that close on themselves become loops.

struct Junction {
    std::uint32_t id = 0;
};
using LinkEnd = std::variant<Endpoint, Junction>;
using Link = std::pair<LinkEnd, LinkEnd>;

struct Collapsed {
    std::vector<Edge> edges;
    std::uint32_t loops = 0;
};

inline Collapsed collapse_links(const std::vector<Link>& links, std::uint32_t n_junctions) {
    std::vector<std::vector<std::pair<std::size_t, int>>> occ(n_junctions);
    auto end_of = [&](std::size_t l, int s) -> const LinkEnd& { return s == 0 ? links[l].first : links[l].second; };
    for (std::size_t l = 0; l < links.size(); ++l)
        for (int s = 0; s < 2; ++s)
            if (auto* j = std::get_if<Junction>(&end_of(l, s))) occ.at(j->id).push_back({l, s});
    for (std::uint32_t j = 0; j < n_junctions; ++j)
        if (occ[j].size() != 2) throw Error(ErrorCode::ArityMismatch, "junction used " + std::to_string(occ[j].size()) + " times");

    std::vector<bool> used(links.size(), false);
    // Follow from side `from` of link l until a real endpoint is reached.
    auto walk = [&](std::size_t l, int from) -> Endpoint {
        for (;;) {
            used[l] = true;
            const LinkEnd& e = end_of(l, 1 - from);
            if (auto* ep = std::get_if<Endpoint>(&e)) return *ep;
            auto jid = std::get<Junction>(e).id;
            auto [l2, s2] = occ[jid][0];
            if (l2 == l && s2 == 1 - from) std::tie(l2, s2) = occ[jid][1];
            l = l2;
            from = s2;
        }
    };

    Collapsed out;
    for (std::size_t l = 0; l < links.size(); ++l) {
        if (used[l]) continue;
        for (int s = 0; s < 2; ++s) {
            if (auto* ep = std::get_if<Endpoint>(&end_of(l, s))) {
                Endpoint start = *ep;
                Endpoint finish = walk(l, s);
                out.edges.push_back({start, finish});
                break;
            }
        }
    }
    // Whatever is left consists of junction-only cycles.
    for (std::size_t l = 0; l < links.size(); ++l) {
        if (used[l]) continue;
        ++out.loops;
        std::size_t cur = l;
        int from = 0;
        while (!used[cur]) {
            used[cur] = true;
            auto jid = std::get<Junction>(end_of(cur, 1 - from)).id;
            auto [l2, s2] = occ[jid][0];
            if (l2 == cur && s2 == 1 - from) std::tie(l2, s2) = occ[jid][1];
            cur = l2;
            from = s2;
        }
    }
    return out;
}

inline Endpoint shifted(const Endpoint& e, NodeId offset) {
    if (is_port(e)) return NodePort{as_port(e).node + offset, as_port(e).port};
    return e;
}

// d1 after d2: the outputs of d2 are glued to the inputs of d1.
inline Diagram compose(const Diagram& d1, const Diagram& d2) {
    if (d1.n_in != d2.n_out)
        throw Error(ErrorCode::ArityMismatch, "compose: " + std::to_string(d1.n_in) + " inputs vs " +
                                                  std::to_string(d2.n_out) + " outputs");
    Diagram r;
    NodeId offset = d2.next_id();
    r.nodes = d2.nodes;
    for (const auto& [id, node] : d1.nodes) r.nodes[id + offset] = node;
    r.n_in = d2.n_in;
    r.n_out = d1.n_out;

    std::vector<Link> links;
    auto lower = [](const Endpoint& e) -> LinkEnd {
        if (!is_port(e) && as_bound(e).side == Side::Out) return Junction{as_bound(e).index};
        return e;
    };
    auto upper = [offset](const Endpoint& e) -> LinkEnd {
        if (!is_port(e) && as_bound(e).side == Side::In) return Junction{as_bound(e).index};
        return shifted(e, offset);
    };
    for (const auto& e : d2.edges) links.push_back({lower(e.a), lower(e.b)});
    for (const auto& e : d1.edges) links.push_back({upper(e.a), upper(e.b)});
    auto c = collapse_links(links, d1.n_in);
    r.edges = std::move(c.edges);
    r.loops = d1.loops + d2.loops + c.loops;
    return r;
}

// Parallel composition; d1's boundary slots come first.
inline Diagram tensor(const Diagram& d1, const Diagram& d2) {
    Diagram r = d1;
    NodeId offset = d1.next_id();
    for (const auto& [id, node] : d2.nodes) r.nodes[id + offset] = node;
    auto shift = [&](const Endpoint& e) -> Endpoint {
        if (is_port(e)) return shifted(e, offset);
        Bound b = as_bound(e);
        b.index += b.side == Side::In ? d1.n_in : d1.n_out;
        return b;
    };
    for (const auto& e : d2.edges) r.edges.push_back({shift(e.a), shift(e.b)});
    r.n_in += d2.n_in;
    r.n_out += d2.n_out;
    r.loops += d2.loops;
    return r;
}

inline Diagram tensor_all(const std::vector<Diagram>& parts) {
    Diagram r;
    for (const auto& p : parts) r = tensor(r, p);
    return r;
}

inline Diagram compose_all(const std::vector<Diagram>& bottom_to_top) {
    if (bottom_to_top.empty()) return empty_diagram();
    Diagram r = bottom_to_top.front();
    for (std::size_t i = 1; i < bottom_to_top.size(); ++i) r = compose(bottom_to_top[i], r);
    return r;
}

// Boundary sides swap.  Symmetric nodes also swap their port roles so the
// result reads naturally; triangles keep their ports and simply end up wired
// backwards, which is exactly the transposed map.
inline Diagram transpose(const Diagram& d) {
    Diagram r;
    r.n_in = d.n_out;
    r.n_out = d.n_in;
    r.loops = d.loops;
    for (const auto& [id, node] : d.nodes) {
        Node t = node;
        if (symmetric_legs(node.kind)) std::swap(t.n, t.m);
        r.nodes[id] = t;
    }
    auto map = [&](const Endpoint& e) -> Endpoint {
        if (!is_port(e)) {
            Bound b = as_bound(e);
            b.side = b.side == Side::In ? Side::Out : Side::In;
            return b;
        }
        NodePort p = as_port(e);
        const Node& node = d.nodes.at(p.node);
        if (symmetric_legs(node.kind)) p.port = p.port < node.n ? node.m + p.port : p.port - node.n;
        return p;
    };
    for (const auto& e : d.edges) r.edges.push_back({map(e.a), map(e.b)});
    return r;
}

inline Diagram conjugate_params(Diagram d) {
    for (auto& [id, node] : d.nodes)
        if (has_param(node.kind)) node.param.value = node.param.value.conj();
    return d;
}

inline Diagram adjoint(const Diagram& d) { return conjugate_params(transpose(d)); }

// ---------------------------------------------------------------------------
// Validation

inline std::vector<std::string> validate(const Diagram& d) {
    std::vector<std::string> out;
    for (const auto& [id, node] : d.nodes) {
        if (fixed_arity(node.kind) && (node.n != 1 || node.m != 1))
            out.push_back("node n" + std::to_string(id) + " (" + kind_name(node.kind) + ") has illegal arity " +
                          std::to_string(node.n) + "->" + std::to_string(node.m));
        if (has_param(node.kind)) {
            auto v = node.param.value.num;
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                out.push_back("node n" + std::to_string(id) + " has a non-finite parameter");
        }
    }
    std::map<Endpoint, int> uses;
    for (const auto& e : d.edges) {
        for (const Endpoint* ep : {&e.a, &e.b}) {
            if (is_port(*ep)) {
                auto it = d.nodes.find(as_port(*ep).node);
                if (it == d.nodes.end()) {
                    out.push_back("edge references missing node n" + std::to_string(as_port(*ep).node));
                    continue;
                }
                if (as_port(*ep).port >= it->second.degree()) {
                    out.push_back("edge references port " + to_string(*ep) + " out of range");
                    continue;
                }
            } else {
                const Bound& b = as_bound(*ep);
                std::uint32_t lim = b.side == Side::In ? d.n_in : d.n_out;
                if (b.index >= lim) {
                    out.push_back("boundary slot " + to_string(*ep) + " out of range");
                    continue;
                }
            }
            ++uses[*ep];
        }
    }
    for (const auto& [id, node] : d.nodes) {
        for (std::uint32_t p = 0; p < node.degree(); ++p) {
            Endpoint ep = NodePort{id, p};
            int u = uses.count(ep) ? uses[ep] : 0;
            if (u == 0) out.push_back("port " + to_string(ep) + " unwired");
            if (u > 1) out.push_back("port " + to_string(ep) + " wired " + std::to_string(u) + " times");
        }
    }
    for (Side s : {Side::In, Side::Out}) {
        std::uint32_t lim = s == Side::In ? d.n_in : d.n_out;
        for (std::uint32_t i = 0; i < lim; ++i) {
            Endpoint ep = Bound{s, i};
            int u = uses.count(ep) ? uses[ep] : 0;
            if (u == 0) out.push_back("boundary slot " + to_string(ep) + " unwired");
            if (u > 1) out.push_back("boundary slot " + to_string(ep) + " duplicated");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Convenience constructors used throughout the rule registries.

inline Diagram z_spider(std::uint32_t n, std::uint32_t m, Param a = Value(1)) { return make_generator(Kind::Z, n, m, std::move(a)); }
inline Diagram x_spider(std::uint32_t n, std::uint32_t m, Param a = Value(1)) { return make_generator(Kind::X, n, m, std::move(a)); }
inline Diagram h_box(std::uint32_t n, std::uint32_t m, Param a = Value(-1)) { return make_generator(Kind::HBox, n, m, std::move(a)); }
inline Diagram hadamard() { return make_generator(Kind::H, 1, 1); }
inline Diagram triangle() { return make_generator(Kind::T, 1, 1); }
inline Diagram triangle_inv() { return make_generator(Kind::Tinv, 1, 1); }
inline Diagram triangle_down() { return transpose(triangle()); }

// Marks the only node of a single-node diagram.
inline Diagram labeled(Diagram d, std::string tag, bool open = false) {
    for (auto& [id, node] : d.nodes) {
        node.tag = tag;
        node.open = open;
    }
    return d;
}

}  // namespace zxalg
