#pragma once

// Standard interpretation by tensor contraction.
//
// Matrix convention: rows index the m outputs, columns the n inputs, and
// the leftmost boundary slot is the most significant bit of the index.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "diagram.hpp"

namespace zxalg {

template <class S>
struct Matrix {
    std::uint32_t m = 0;  // outputs
    std::uint32_t n = 0;  // inputs
    std::vector<S> data;

    Matrix() : data(1, ScalarOps<S>::one()) {}
    Matrix(std::uint32_t m_, std::uint32_t n_) : m(m_), n(n_), data(std::size_t{1} << (m_ + n_), ScalarOps<S>::zero()) {}

    std::size_t rows() const { return std::size_t{1} << m; }
    std::size_t cols() const { return std::size_t{1} << n; }
    S& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
    const S& at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }
};

using FloatMatrix = Matrix<FloatScalar>;
using ExactMatrix = Matrix<ExactScalar>;

template <class S>
Matrix<FloatScalar> to_float(const Matrix<S>& a) {
    Matrix<FloatScalar> r(a.m, a.n);
    for (std::size_t i = 0; i < a.data.size(); ++i) r.data[i] = ScalarOps<S>::to_float(a.data[i]);
    return r;
}

template <class S>
Matrix<S> matmul(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.n != b.m) throw Error(ErrorCode::ShapeMismatch, "matmul inner dimensions differ");
    Matrix<S> r(a.m, b.n);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const S& x = a.at(i, k);
            if (ScalarOps<S>::is_zero(x)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r.at(i, j) += x * b.at(k, j);
        }
    return r;
}

template <class S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b) {
    Matrix<S> r(a.m + b.m, a.n + b.n);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    return r;
}

template <class S>
Matrix<S> transposed(const Matrix<S>& a) {
    Matrix<S> r(a.n, a.m);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r.at(j, i) = a.at(i, j);
    return r;
}

template <class S>
Matrix<S> dagger(const Matrix<S>& a) {
    Matrix<S> r = transposed(a);
    for (auto& x : r.data) x = ScalarOps<S>::conj(x);
    return r;
}

struct Capacity {
    int open_wires = 12;
    int intermediate = 20;

    template <class S>
    static Capacity defaults();
};

// The command line may override the open-wire limit (ZXCAL_CAPACITY).
inline int& capacity_override() {
    static int value = 0;
    return value;
}

template <>
inline Capacity Capacity::defaults<FloatScalar>() {
    int w = capacity_override() > 0 ? capacity_override() : 12;
    return {w, w + 8};
}
template <>
inline Capacity Capacity::defaults<ExactScalar>() {
    int w = capacity_override() > 0 ? capacity_override() : 8;
    return {w, w + 8};
}

template <class S>
S param_scalar(const Param& p);

template <>
inline FloatScalar param_scalar<FloatScalar>(const Param& p) {
    return p.value.num;
}
template <>
inline ExactScalar param_scalar<ExactScalar>(const Param& p) {
    if (!p.value.exact)
        throw Error(ErrorCode::InexactParameter, "parameter " + std::to_string(p.value.num.real()) + "+" +
                                                     std::to_string(p.value.num.imag()) + "i has no exact form");
    return *p.value.exact;
}

template <class S>
S pow_inv_sqrt2(std::uint32_t d) {
    S r = ScalarOps<S>::one();
    for (std::uint32_t i = 0; i < d; ++i) r = r * ScalarOps<S>::inv_sqrt2();
    return r;
}

namespace detail {

template <class S>
struct Tensor {
    std::vector<std::uint32_t> vars;  // vars[0] is the most significant index bit
    std::vector<S> data;
};

// Tensor entry of a generator for the given leg bits (in port order).
template <class S>
S generator_entry(Kind kind, const S& a, const S& xnorm, const std::vector<int>& bits) {
    std::size_t ones = std::count(bits.begin(), bits.end(), 1);
    std::size_t d = bits.size();
    switch (kind) {
        case Kind::Z:
            if (d == 0) return ScalarOps<S>::one() + a;
            if (ones == 0) return ScalarOps<S>::one();
            if (ones == d) return a;
            return ScalarOps<S>::zero();
        case Kind::X: {
            S sign = (ones % 2 == 0) ? a : ScalarOps<S>::zero() - a;
            return xnorm * (ScalarOps<S>::one() + sign);
        }
        case Kind::H: {
            S h = ScalarOps<S>::inv_sqrt2();
            return (bits[0] && bits[1]) ? ScalarOps<S>::zero() - h : h;
        }
        case Kind::T:
            return (bits[0] == 0 && bits[1] == 1) ? ScalarOps<S>::zero() : ScalarOps<S>::one();
        case Kind::Tinv:
            if (bits[0] == 0 && bits[1] == 1) return ScalarOps<S>::zero();
            if (bits[0] == 1 && bits[1] == 0) return ScalarOps<S>::from_int(-1);
            return ScalarOps<S>::one();
        case Kind::HBox:
            return (d > 0 && ones == d) || d == 0 ? a : ScalarOps<S>::one();
    }
    return ScalarOps<S>::zero();
}

template <class S>
Tensor<S> node_tensor(const Node& node, const std::vector<std::uint32_t>& leg_vars, int max_rank) {
    std::uint32_t d = node.degree();
    if (static_cast<int>(d) > max_rank)
        throw Error(ErrorCode::CapacityExceeded, "node of degree " + std::to_string(d) + " exceeds capacity");
    S a = has_param(node.kind) ? param_scalar<S>(node.param) : ScalarOps<S>::one();
    S xnorm = node.kind == Kind::X ? pow_inv_sqrt2<S>(d) : ScalarOps<S>::one();

    Tensor<S> t;
    for (auto v : leg_vars)
        if (std::find(t.vars.begin(), t.vars.end(), v) == t.vars.end()) t.vars.push_back(v);
    t.data.assign(std::size_t{1} << t.vars.size(), ScalarOps<S>::zero());
    std::vector<int> bits(d);
    // Self-loops put the same variable on two legs; only the diagonal survives.
    for (std::size_t idx = 0; idx < t.data.size(); ++idx) {
        for (std::uint32_t p = 0; p < d; ++p) {
            auto pos = std::find(t.vars.begin(), t.vars.end(), leg_vars[p]) - t.vars.begin();
            bits[p] = static_cast<int>((idx >> (t.vars.size() - 1 - pos)) & 1);
        }
        t.data[idx] = generator_entry<S>(node.kind, a, xnorm, bits);
    }
    return t;
}

// Product of several tensors, optionally summing out one variable.
template <class S>
Tensor<S> contract(const std::vector<const Tensor<S>*>& parts, std::optional<std::uint32_t> sum_var, int max_rank) {
    std::vector<std::uint32_t> all;
    for (auto* t : parts)
        for (auto v : t->vars)
            if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
    std::vector<std::uint32_t> keep;
    for (auto v : all)
        if (!sum_var || v != *sum_var) keep.push_back(v);
    if (static_cast<int>(keep.size()) > max_rank)
        throw Error(ErrorCode::CapacityExceeded, "intermediate tensor of rank " + std::to_string(keep.size()) +
                                                     " exceeds capacity " + std::to_string(max_rank));
    // Put the summed variable last so consecutive assignments share an output.
    std::vector<std::uint32_t> order = keep;
    if (sum_var) order.push_back(*sum_var);
    std::vector<std::vector<int>> shift(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k)
        for (auto v : parts[k]->vars) {
            auto pos = std::find(order.begin(), order.end(), v) - order.begin();
            shift[k].push_back(static_cast<int>(order.size() - 1 - pos));
        }
    Tensor<S> r;
    r.vars = keep;
    r.data.assign(std::size_t{1} << keep.size(), ScalarOps<S>::zero());
    std::size_t total = std::size_t{1} << order.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        S prod = ScalarOps<S>::one();
        bool zero = false;
        for (std::size_t k = 0; k < parts.size() && !zero; ++k) {
            std::size_t sub = 0;
            for (int s : shift[k]) sub = (sub << 1) | ((idx >> s) & 1);
            const S& e = parts[k]->data[sub];
            if (ScalarOps<S>::is_zero(e)) zero = true;
            else prod = prod * e;
        }
        if (zero) continue;
        std::size_t out = sum_var ? (idx >> 1) : idx;
        r.data[out] = r.data[out] + prod;
    }
    return r;
}

}  // namespace detail

struct ContractionOptions {
    // When set, the elimination order is a seeded random permutation rather
    // than greedy min-degree.  Used to test order independence.
    std::optional<std::uint64_t> shuffle_seed;
};

template <class S>
Matrix<S> interpret(const Diagram& d, Capacity cap = Capacity::defaults<S>(), ContractionOptions opt = {}) {
    if (static_cast<int>(d.n_in + d.n_out) > cap.open_wires)
        throw Error(ErrorCode::CapacityExceeded, std::to_string(d.n_in + d.n_out) + " open wires exceed capacity " +
                                                     std::to_string(cap.open_wires));
    using T = detail::Tensor<S>;
    // One variable per edge that touches a node.
    std::map<NodePort, std::uint32_t> port_var;
    std::map<Bound, std::uint32_t> slot_var;
    std::map<Bound, Bound> slot_wire;
    std::set<std::uint32_t> open_vars;
    std::uint32_t nvars = 0;
    for (const auto& e : d.edges) {
        if (!is_port(e.a) && !is_port(e.b)) {
            slot_wire[as_bound(e.a)] = as_bound(e.b);
            slot_wire[as_bound(e.b)] = as_bound(e.a);
            continue;
        }
        std::uint32_t v = nvars++;
        for (const Endpoint* ep : {&e.a, &e.b}) {
            if (is_port(*ep)) port_var[as_port(*ep)] = v;
            else {
                slot_var[as_bound(*ep)] = v;
                open_vars.insert(v);
            }
        }
    }

    std::vector<T> tensors;
    for (const auto& [id, node] : d.nodes) {
        std::vector<std::uint32_t> legs(node.degree());
        for (std::uint32_t p = 0; p < node.degree(); ++p) legs[p] = port_var.at(NodePort{id, p});
        tensors.push_back(detail::node_tensor<S>(node, legs, cap.intermediate));
    }

    std::vector<std::uint32_t> internal;
    for (std::uint32_t v = 0; v < nvars; ++v)
        if (!open_vars.count(v)) internal.push_back(v);
    if (opt.shuffle_seed) {
        std::mt19937_64 rng(*opt.shuffle_seed);
        std::shuffle(internal.begin(), internal.end(), rng);
    }

    std::vector<bool> alive(tensors.size(), true);
    std::set<std::uint32_t> pending(internal.begin(), internal.end());
    std::size_t next_fixed = 0;
    while (!pending.empty()) {
        std::uint32_t best = 0;
        if (opt.shuffle_seed) {
            while (!pending.count(internal[next_fixed])) ++next_fixed;
            best = internal[next_fixed];
        } else {
            std::size_t best_cost = SIZE_MAX;
            for (auto v : pending) {
                std::set<std::uint32_t> uni;
                for (std::size_t k = 0; k < tensors.size(); ++k)
                    if (alive[k] && std::count(tensors[k].vars.begin(), tensors[k].vars.end(), v))
                        uni.insert(tensors[k].vars.begin(), tensors[k].vars.end());
                if (uni.size() < best_cost) {
                    best_cost = uni.size();
                    best = v;
                }
            }
        }
        std::vector<const T*> parts;
        std::vector<std::size_t> used;
        for (std::size_t k = 0; k < tensors.size(); ++k)
            if (alive[k] && std::count(tensors[k].vars.begin(), tensors[k].vars.end(), best)) {
                parts.push_back(&tensors[k]);
                used.push_back(k);
            }
        T merged = detail::contract<S>(parts, best, cap.intermediate);
        for (auto k : used) alive[k] = false;
        tensors.push_back(std::move(merged));
        alive.push_back(true);
        pending.erase(best);
    }

    std::vector<const T*> rest;
    for (std::size_t k = 0; k < tensors.size(); ++k)
        if (alive[k]) rest.push_back(&tensors[k]);
    T final_t = rest.empty() ? T{{}, {ScalarOps<S>::one()}} : detail::contract<S>(rest, std::nullopt, cap.intermediate);

    S loop_factor = ScalarOps<S>::one();
    for (std::uint32_t i = 0; i < d.loops; ++i) loop_factor = loop_factor * ScalarOps<S>::from_int(2);

    Matrix<S> out(d.n_out, d.n_in);
    std::map<std::uint32_t, int> pos;
    for (std::size_t i = 0; i < final_t.vars.size(); ++i) pos[final_t.vars[i]] = static_cast<int>(i);
    std::size_t rank = final_t.vars.size();
    std::vector<int> assign(nvars);
    for (std::size_t r = 0; r < out.rows(); ++r) {
        for (std::size_t c = 0; c < out.cols(); ++c) {
            auto slot_bit = [&](const Bound& b) -> int {
                if (b.side == Side::Out) return static_cast<int>((r >> (d.n_out - 1 - b.index)) & 1);
                return static_cast<int>((c >> (d.n_in - 1 - b.index)) & 1);
            };
            bool ok = true;
            std::fill(assign.begin(), assign.end(), -1);
            for (const auto& [b, partner] : slot_wire)
                if (slot_bit(b) != slot_bit(partner)) ok = false;
            for (const auto& [b, v] : slot_var) {
                int bit = slot_bit(b);
                if (assign[v] >= 0 && assign[v] != bit) ok = false;
                assign[v] = bit;
            }
            if (!ok) continue;
            std::size_t idx = 0;
            for (std::size_t i = 0; i < rank; ++i) idx = (idx << 1) | static_cast<std::size_t>(assign[final_t.vars[i]]);
            out.at(r, c) = final_t.data[idx] * loop_factor;
        }
    }
    return out;
}

template <class S>
bool matrices_equal(const Matrix<S>& a, const Matrix<S>& b, double tol);

template <>
inline bool matrices_equal<FloatScalar>(const FloatMatrix& a, const FloatMatrix& b, double tol) {
    if (a.m != b.m || a.n != b.n) throw Error(ErrorCode::ShapeMismatch, "matrix shapes differ");
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (!float_close(a.data[i], b.data[i], tol)) return false;
    return true;
}

template <>
inline bool matrices_equal<ExactScalar>(const ExactMatrix& a, const ExactMatrix& b, double) {
    if (a.m != b.m || a.n != b.n) throw Error(ErrorCode::ShapeMismatch, "matrix shapes differ");
    return a.data == b.data;
}

// Largest entrywise deviation, measured in the complex plane.
template <class S>
double max_deviation(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.m != b.m || a.n != b.n) throw Error(ErrorCode::ShapeMismatch, "matrix shapes differ");
    double worst = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        if constexpr (std::is_same_v<S, ExactScalar>) {
            if (a.data[i] == b.data[i]) continue;
        }
        worst = std::max(worst, std::abs(ScalarOps<S>::to_float(a.data[i]) - ScalarOps<S>::to_float(b.data[i])));
    }
    return worst;
}

// Returns c with a = c*b (within tol), taking c from b's largest entry.
inline std::optional<FloatScalar> proportional(const FloatMatrix& a, const FloatMatrix& b, double tol) {
    if (a.m != b.m || a.n != b.n) throw Error(ErrorCode::ShapeMismatch, "matrix shapes differ");
    std::size_t k = 0;
    for (std::size_t i = 1; i < b.data.size(); ++i)
        if (std::abs(b.data[i]) > std::abs(b.data[k])) k = i;
    if (std::abs(b.data[k]) <= tol) throw Error(ErrorCode::ZeroReference, "reference matrix is zero");
    FloatScalar c = a.data[k] / b.data[k];
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (std::abs(a.data[i] - c * b.data[i]) > tol) return std::nullopt;
    return c;
}

}  // namespace zxalg
