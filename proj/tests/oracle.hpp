#pragma once

// Reference evaluator for tests.  It knows nothing about the library's
// contraction code: every generator is written out from its defining formula
// and a diagram is evaluated by summing over one bit per edge.

#include <zxalg/diagram.hpp>

#include <complex>
#include <vector>

namespace oracle {

using C = std::complex<double>;

struct Mat {
    std::size_t rows = 1, cols = 1;
    std::vector<C> v{1.0};

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
    Mat(std::size_t r, std::size_t c, std::initializer_list<C> xs) : rows(r), cols(c), v(xs) {}
    C& operator()(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    C operator()(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
};

inline Mat mul(const Mat& a, const Mat& b) {
    Mat r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k)
            for (std::size_t j = 0; j < b.cols; ++j) r(i, j) += a(i, k) * b(k, j);
    return r;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l) r(i * b.rows + k, j * b.cols + l) = a(i, j) * b(k, l);
    return r;
}

inline double dist(const Mat& a, const Mat& b) {
    if (a.rows != b.rows || a.cols != b.cols) return 1e300;
    double d = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) d = std::max(d, std::abs(a.v[i] - b.v[i]));
    return d;
}

template <class M>
Mat from(const M& m) {
    Mat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m.at(0, 0))>, zxalg::ExactScalar>) r(i, j) = m.at(i, j).to_float();
            else r(i, j) = m.at(i, j);
        }
    return r;
}

// Tensor entry of a single node; bits are ordered inputs first, then outputs.
inline C node_entry(const zxalg::Node& node, const std::vector<int>& bits) {
    using zxalg::Kind;
    const C a = node.param.value.num;
    const double s = 1.0 / std::sqrt(2.0);
    auto all = [&](int b) { return std::all_of(bits.begin(), bits.end(), [&](int x) { return x == b; }); };
    switch (node.kind) {
        case Kind::Z:
            if (bits.empty()) return 1.0 + a;
            return (all(0) ? 1.0 : 0.0) + (all(1) ? a : 0.0);
        case Kind::X: {
            // |+...+><+...+| + a |-...-><-...-|
            int parity = 0;
            for (int b : bits) parity ^= b;
            return std::pow(s, static_cast<double>(bits.size())) * (1.0 + a * (parity ? -1.0 : 1.0));
        }
        case Kind::H: return s * ((bits[0] & bits[1]) ? -1.0 : 1.0);
        case Kind::T: {
            static const Mat t(2, 2, {1, 1, 0, 1});
            return t(bits[1], bits[0]);
        }
        case Kind::Tinv: {
            static const Mat t(2, 2, {1, -1, 0, 1});
            return t(bits[1], bits[0]);
        }
        case Kind::HBox: return all(1) ? a : 1.0;
    }
    return 0.0;
}

// Sum over all bit assignments of the edges.  Exponential; keep diagrams small.
inline Mat evaluate(const zxalg::Diagram& d) {
    using namespace zxalg;
    Mat out(std::size_t{1} << d.n_out, std::size_t{1} << d.n_in);
    const std::size_t E = d.edges.size();
    std::map<NodePort, std::size_t> edge_of;
    for (std::size_t i = 0; i < E; ++i) {
        if (is_port(d.edges[i].a)) edge_of[as_port(d.edges[i].a)] = i;
        if (is_port(d.edges[i].b)) edge_of[as_port(d.edges[i].b)] = i;
    }
    auto slot_bit = [&](const Bound& b, std::size_t row, std::size_t col) -> int {
        if (b.side == Side::Out) return static_cast<int>((row >> (d.n_out - 1 - b.index)) & 1);
        return static_cast<int>((col >> (d.n_in - 1 - b.index)) & 1);
    };
    for (std::size_t row = 0; row < out.rows; ++row)
        for (std::size_t col = 0; col < out.cols; ++col) {
            C total = 0;
            for (std::size_t mask = 0; mask < (std::size_t{1} << E); ++mask) {
                auto bit = [&](std::size_t e) { return static_cast<int>((mask >> e) & 1); };
                bool ok = true;
                for (std::size_t e = 0; e < E && ok; ++e)
                    for (const Endpoint* p : {&d.edges[e].a, &d.edges[e].b})
                        if (!is_port(*p) && slot_bit(as_bound(*p), row, col) != bit(e)) ok = false;
                if (!ok) continue;
                C term = 1.0;
                for (const auto& [id, node] : d.nodes) {
                    std::vector<int> bits;
                    for (std::uint32_t p = 0; p < node.degree(); ++p) bits.push_back(bit(edge_of.at(NodePort{id, p})));
                    term *= node_entry(node, bits);
                    if (term == 0.0) break;
                }
                total += term;
            }
            out(row, col) = total * std::pow(2.0, static_cast<double>(d.loops));
        }
    return out;
}

}  // namespace oracle
