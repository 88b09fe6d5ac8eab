#pragma once

// ZH diagrams share the Diagram type; only white (phase-free Z) spiders and
// H-boxes may appear.  translate() replaces each H-box H_a by the spider
// Z(a-1) with a triangle on every leg, each triangle pointing into the spider.

#include "diagram.hpp"

namespace zxalg {

inline std::vector<std::string> validate_zh(const Diagram& d) {
    auto out = validate(d);
    for (const auto& [id, node] : d.nodes) {
        if (node.kind != Kind::Z && node.kind != Kind::HBox)
            out.push_back("node n" + std::to_string(id) + " has kind " + kind_name(node.kind) + ", not allowed in ZH");
        if (node.kind == Kind::Z && !node.param.symbol && !values_close(node.param.value, Value(1), 0.0))
            out.push_back("white spider n" + std::to_string(id) + " carries a parameter");
    }
    return out;
}

inline Diagram translate(const Diagram& d) {
    Diagram r;
    r.n_in = d.n_in;
    r.n_out = d.n_out;
    r.loops = d.loops;
    NodeId fresh = d.next_id();
    std::map<NodePort, NodePort> moved;  // H-box port -> outer port of its triangle
    for (const auto& [id, node] : d.nodes) {
        if (node.kind != Kind::HBox) {
            r.nodes[id] = node;
            continue;
        }
        Node z = node;
        z.kind = Kind::Z;
        z.param.value = node.param.value - Value(1);
        if (z.param.symbol) z.param.symbol->shift -= 1;
        r.nodes[id] = z;
        for (std::uint32_t p = 0; p < node.degree(); ++p) {
            NodeId t = fresh++;
            r.nodes[t] = Node{Kind::T, 1, 1};
            r.edges.push_back({NodePort{t, 1}, NodePort{id, p}});
            moved[NodePort{id, p}] = NodePort{t, 0};
        }
    }
    auto map = [&](const Endpoint& e) -> Endpoint {
        if (is_port(e)) {
            auto it = moved.find(as_port(e));
            if (it != moved.end()) return it->second;
        }
        return e;
    };
    for (const auto& e : d.edges) r.edges.push_back({map(e.a), map(e.b)});
    return r;
}

}  // namespace zxalg
