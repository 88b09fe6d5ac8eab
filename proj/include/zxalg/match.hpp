#pragma once

// Subgraph matching of patterns in host diagrams, also used in a strict
// bijective mode for structural equality.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <set>

#include "diagram.hpp"

namespace zxalg {

struct Embedding {
    std::map<NodeId, NodeId> node_map;
    std::map<NodePort, NodePort> leg_map;
    // Pattern edge index -> host edge index; boundary edges map to npos.
    std::vector<std::size_t> edge_map;
    // For pattern input slots then output slots: the host endpoint that sits
    // on the far side of the matched leg.
    std::vector<Endpoint> boundary_image;
    Assignment bindings;
};

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct MatchOptions {
    bool iso = false;             // bijection with identical boundary
    bool check_untagged = true;   // compare parameters of untagged pattern nodes
    bool bind_symbols = true;     // bind rule variables from host parameters
    double tol = 1e-9;
    std::size_t limit = npos;     // stop after this many distinct matches
};

// Reads a rule variable off a host parameter.  Returns false if the host
// value lies outside the variable's domain or contradicts an earlier binding.
inline bool bind_symbol(const Symbol& sym, const Value& host, Assignment& bindings, double tol) {
    Value v;
    switch (sym.domain) {
        case Domain::Angle: {
            if (std::abs(std::abs(host.num) - 1.0) > tol) return false;
            v = Value(reduce_angle(std::arg(host.num)));
            break;
        }
        case Domain::NonNegReal: {
            Value raw = host - Value(sym.shift);
            if (std::abs(raw.num.imag()) > tol || raw.num.real() < -tol) return false;
            v = raw;
            if (!v.exact) v.num = std::max(0.0, raw.num.real());
            break;
        }
        case Domain::NonZeroComplex:
        case Domain::Complex:
            v = host - Value(sym.shift);
            if (sym.domain == Domain::NonZeroComplex && v.is_zero(tol)) return false;
            break;
    }
    auto it = bindings.find(sym.name);
    if (it == bindings.end()) {
        bindings[sym.name] = v;
        return true;
    }
    if (sym.domain == Domain::Angle) return std::abs(std::polar(1.0, it->second.num.real()) - host.num) <= tol;
    return values_close(it->second, v, tol);
}

namespace detail {

class Matcher {
public:
    Matcher(const Diagram& pattern, const Diagram& host, const MatchOptions& opt)
        : pat_(pattern), host_(host), opt_(opt), pinc_(incidence(pattern)), hinc_(incidence(host)) {}

    std::vector<Embedding> run() {
        std::vector<Embedding> out;
        if (opt_.iso) {
            if (pat_.nodes.size() != host_.nodes.size() || pat_.loops != host_.loops || pat_.n_in != host_.n_in ||
                pat_.n_out != host_.n_out || pat_.edges.size() != host_.edges.size())
                return out;
        } else {
            if (pat_.loops > host_.loops) return out;
            for (const auto& e : pat_.edges)
                if (!is_port(e.a) && !is_port(e.b)) return out;  // bare wires are not matchable
            if (pat_.nodes.empty()) return out;
        }
        order_nodes();
        out_ = &out;
        extend(0);
        return out;
    }

private:
    const Diagram& pat_;
    const Diagram& host_;
    MatchOptions opt_;
    Incidence pinc_, hinc_;
    std::vector<NodeId> order_;
    std::map<NodeId, NodeId> node_map_;
    std::set<NodeId> used_hosts_;
    std::map<NodePort, NodePort> leg_map_;
    std::map<NodePort, NodePort> leg_inv_;
    Assignment bindings_;
    std::set<std::pair<std::vector<NodeId>, std::vector<std::size_t>>> seen_;
    std::vector<Embedding>* out_ = nullptr;

    void order_nodes() {
        std::set<NodeId> seen;
        for (const auto& [start, _] : pat_.nodes) {
            if (seen.count(start)) continue;
            std::deque<NodeId> q{start};
            seen.insert(start);
            while (!q.empty()) {
                NodeId u = q.front();
                q.pop_front();
                order_.push_back(u);
                for (std::uint32_t p = 0; p < pat_.nodes.at(u).degree(); ++p) {
                    const Endpoint& partner = pinc_.at(NodePort{u, p}).second;
                    if (is_port(partner) && !seen.count(as_port(partner).node)) {
                        seen.insert(as_port(partner).node);
                        q.push_back(as_port(partner).node);
                    }
                }
            }
        }
    }

    bool done() const { return out_->size() >= opt_.limit; }

    bool params_ok(const Node& pn, const Node& hn, Assignment& b) const {
        if (!has_param(pn.kind)) return true;
        if (pn.param.symbol && opt_.bind_symbols) return bind_symbol(*pn.param.symbol, hn.param.value, b, opt_.tol);
        if (!opt_.check_untagged) return true;
        return values_close(pn.param.value, hn.param.value, opt_.tol);
    }

    bool node_ok(const Node& pn, const Node& hn) const {
        if (pn.kind != hn.kind) return false;
        if (opt_.iso || !pn.open) {
            if (symmetric_legs(pn.kind)) return pn.degree() == hn.degree();
            return pn.n == hn.n && pn.m == hn.m;
        }
        return hn.degree() >= pn.degree();
    }

    void extend(std::size_t k) {
        if (done()) return;
        if (k == order_.size()) {
            finish();
            return;
        }
        NodeId u = order_[k];
        const Node& pn = pat_.nodes.at(u);
        std::vector<NodeId> candidates;
        std::optional<NodeId> forced;
        for (std::uint32_t p = 0; p < pn.degree() && !forced; ++p) {
            const Endpoint& partner = pinc_.at(NodePort{u, p}).second;
            if (is_port(partner) && node_map_.count(as_port(partner).node)) {
                const Endpoint& hp = hinc_.at(leg_map_.at(as_port(partner))).second;
                if (!is_port(hp)) return;
                forced = as_port(hp).node;
            }
        }
        if (forced) candidates.push_back(*forced);
        else
            for (const auto& [hid, _] : host_.nodes) candidates.push_back(hid);

        for (NodeId w : candidates) {
            if (used_hosts_.count(w)) continue;
            const Node& hn = host_.nodes.at(w);
            if (!node_ok(pn, hn)) continue;
            Assignment saved = bindings_;
            if (!params_ok(pn, hn, bindings_)) {
                bindings_ = saved;
                continue;
            }
            node_map_[u] = w;
            used_hosts_.insert(w);
            assign_legs(k, u, w, 0);
            used_hosts_.erase(w);
            node_map_.erase(u);
            bindings_ = saved;
            if (done()) return;
        }
    }

    // Is mapping pattern leg y onto host leg h consistent with what is mapped so far?
    bool leg_ok(const NodePort& y, const NodePort& h) const {
        const Endpoint& py = pinc_.at(y).second;
        const Endpoint& ph = hinc_.at(h).second;
        // A host leg already in the image on the far side must be y's pattern partner.
        if (is_port(ph)) {
            auto it = leg_inv_.find(as_port(ph));
            if (it != leg_inv_.end()) {
                if (is_port(py)) return as_port(py) == it->second;
                // y attaches to the boundary, so may the already-mapped leg.
                return !opt_.iso && !is_port(pinc_.at(it->second).second);
            }
        }
        if (!is_port(py)) {
            if (opt_.iso) return !is_port(ph) && as_bound(ph) == as_bound(py);
            return true;
        }
        const NodePort& x = as_port(py);
        auto it = leg_map_.find(x);
        if (it != leg_map_.end()) return is_port(ph) && as_port(ph) == it->second;
        // Partner not yet mapped: the host must continue into a node too.
        if (!is_port(ph)) return false;
        if (x.node == y.node) return as_port(ph).node == h.node;  // self-loop in pattern
        auto nm = node_map_.find(x.node);
        if (nm != node_map_.end()) return as_port(ph).node == nm->second;
        return !used_hosts_.count(as_port(ph).node);
    }

    void assign_legs(std::size_t k, NodeId u, NodeId w, std::uint32_t p) {
        if (done()) return;
        const Node& pn = pat_.nodes.at(u);
        const Node& hn = host_.nodes.at(w);
        if (p == pn.degree()) {
            extend(k + 1);
            return;
        }
        NodePort y{u, p};
        auto try_leg = [&](std::uint32_t q) {
            NodePort h{w, q};
            if (leg_inv_.count(h)) return;
            if (!leg_ok(y, h)) return;
            leg_map_[y] = h;
            leg_inv_[h] = y;
            assign_legs(k, u, w, p + 1);
            leg_map_.erase(y);
            leg_inv_.erase(h);
        };
        if (!symmetric_legs(pn.kind)) {
            try_leg(p);
            return;
        }
        for (std::uint32_t q = 0; q < hn.degree() && !done(); ++q) try_leg(q);
    }

    void finish() {
        Embedding emb;
        emb.node_map = node_map_;
        emb.leg_map = leg_map_;
        emb.edge_map.assign(pat_.edges.size(), npos);
        std::vector<std::size_t> host_edges;
        for (std::size_t i = 0; i < pat_.edges.size(); ++i) {
            const Edge& e = pat_.edges[i];
            if (is_port(e.a) && is_port(e.b)) {
                std::size_t he = hinc_.at(leg_map_.at(as_port(e.a))).first;
                emb.edge_map[i] = he;
                host_edges.push_back(he);
            }
        }
        for (Side s : {Side::In, Side::Out}) {
            std::uint32_t lim = s == Side::In ? pat_.n_in : pat_.n_out;
            for (std::uint32_t i = 0; i < lim; ++i) {
                const Endpoint& partner = pinc_.at(Bound{s, i}).second;
                if (is_port(partner)) emb.boundary_image.push_back(hinc_.at(leg_map_.at(as_port(partner))).second);
                else emb.boundary_image.push_back(partner);
            }
        }
        if (opt_.iso) {
            // Bare wires must agree exactly.
            std::set<std::pair<Bound, Bound>> pw, hw;
            for (const auto& e : pat_.edges)
                if (!is_port(e.a) && !is_port(e.b)) pw.insert(std::minmax(as_bound(e.a), as_bound(e.b)));
            for (const auto& e : host_.edges)
                if (!is_port(e.a) && !is_port(e.b)) hw.insert(std::minmax(as_bound(e.a), as_bound(e.b)));
            if (pw != hw) return;
        }
        std::vector<NodeId> hosts;
        for (const auto& [p, h] : node_map_) hosts.push_back(h);
        std::sort(hosts.begin(), hosts.end());
        std::sort(host_edges.begin(), host_edges.end());
        if (!seen_.insert({hosts, host_edges}).second) return;
        emb.bindings = bindings_;
        out_->push_back(std::move(emb));
    }
};

}  // namespace detail

inline std::vector<Embedding> find_matches(const Diagram& pattern, const Diagram& host, const MatchOptions& opt = {}) {
    return detail::Matcher(pattern, host, opt).run();
}

// Boundary-preserving isomorphism, up to leg permutation of symmetric generators.
inline bool structural_eq(const Diagram& a, const Diagram& b, double tol = 1e-12) {
    MatchOptions opt;
    opt.iso = true;
    opt.bind_symbols = false;
    opt.tol = tol;
    opt.limit = 1;
    if (a.nodes.empty() && b.nodes.empty()) {
        if (a.n_in != b.n_in || a.n_out != b.n_out || a.loops != b.loops || a.edges.size() != b.edges.size()) return false;
        std::set<std::pair<Bound, Bound>> wa, wb;
        for (const auto& e : a.edges) wa.insert(std::minmax(as_bound(e.a), as_bound(e.b)));
        for (const auto& e : b.edges) wb.insert(std::minmax(as_bound(e.a), as_bound(e.b)));
        return wa == wb;
    }
    return !find_matches(a, b, opt).empty();
}

}  // namespace zxalg
