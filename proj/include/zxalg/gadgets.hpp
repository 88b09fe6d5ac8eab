#pragma once

// Small diagram vocabulary shared by the rule registries.

#include "diagram.hpp"
#include "translate.hpp"

namespace zxalg::gadget {

inline Diagram Z(std::uint32_t n, std::uint32_t m, Param a = Value(1)) { return z_spider(n, m, std::move(a)); }
inline Diagram X(std::uint32_t n, std::uint32_t m, Param a = Value(1)) { return x_spider(n, m, std::move(a)); }
inline Diagram HB(std::uint32_t n, std::uint32_t m, Param a = Value(-1)) { return h_box(n, m, std::move(a)); }
inline Diagram H() { return hadamard(); }
inline Diagram T() { return triangle(); }
inline Diagram Td() { return triangle_down(); }
inline Diagram Ti() { return triangle_inv(); }
inline Diagram Tid() { return transpose(triangle_inv()); }
inline Diagram I(std::uint32_t k = 1) { return identity(k); }
inline Diagram Sw() { return swap_wires(); }
inline Diagram E() { return empty_diagram(); }

// Sequential composition, listed in the order the maps are applied.
inline Diagram seq(const std::vector<Diagram>& ds) { return compose_all(ds); }
inline Diagram par(const std::vector<Diagram>& ds) { return tensor_all(ds); }

// Red pi: the NOT gate.
inline Diagram NOT() { return X(1, 1, Value(-1)); }

// Scalar sqrt(2): a red pi state plugged into a green effect.
inline Diagram rt2() { return seq({X(0, 1, Value(-1)), Z(1, 0)}); }

// The scalar c as a 0-legged spider (Z(0,0,a) denotes 1 + a).
inline Diagram scalar(const Value& c) { return Z(0, 0, c - Value(1)); }
inline Diagram half() { return Z(0, 0, Value::rational(-1, 2)); }

// W node 1 -> 2: |0> -> |00>, |1> -> |01> + |10>.  Built from a copy, a
// triangle and a red spider; the bare gadget is W / sqrt2.
inline Diagram w_split() {
    Diagram core = seq({Z(1, 2), par({T(), X(1, 2)}), par({Z(2, 1), I()})});
    return par({core, rt2()});
}
inline Diagram w_merge() { return transpose(w_split()); }

// Classical AND gate 2 -> 1.
inline Diagram and_gate() { return seq({par({T(), T()}), Z(2, 1), Ti()}); }

// ZH building blocks.
inline Diagram zh_scalar(const Value& c) { return HB(0, 0, c); }
inline Diagram zh_and() { return par({zh_scalar(Value::rational(1, 2)), seq({HB(2, 1), HB(1, 1)})}); }
inline Diagram zh_zpi() { return seq({Z(1, 2), par({I(), HB(1, 0)})}); }
inline Diagram zh_not() { return par({zh_scalar(Value::rational(1, 2)), seq({HB(1, 1), zh_zpi(), HB(1, 1)})}); }
// Gray spider, unnormalised: H-boxes of arity 2 on every leg of a white spider.
inline Diagram zh_gray(std::uint32_t n, std::uint32_t m) {
    std::vector<Diagram> ins(n, HB(1, 1)), outs(m, HB(1, 1));
    return seq({par(ins), Z(n, m), par(outs)});
}

inline Diagram sandwich_swap() { return par({I(), Sw(), I()}); }

}  // namespace zxalg::gadget
