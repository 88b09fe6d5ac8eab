#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "scalar.hpp"

namespace zxalg {

// A complex value that may also carry an exact representative.  Arithmetic
// keeps the exact part whenever both operands have one.
struct Value {
    FloatScalar num{0.0};
    std::optional<ExactScalar> exact;

    Value() = default;
    Value(FloatScalar v) : num(v) {}  // NOLINT
    Value(double v) : num(v) {}       // NOLINT
    Value(int v) : num(static_cast<double>(v)), exact(ExactScalar(static_cast<long>(v))) {}  // NOLINT
    Value(const ExactScalar& e) : num(e.to_float()), exact(e) {}  // NOLINT

    static Value rational(long num, long den) { return Value(ExactScalar::rational(num, den)); }

    bool is_exact() const { return exact.has_value(); }
    bool is_zero(double tol = 0.0) const { return exact ? exact->is_zero() : std::abs(num) <= tol; }

    friend Value operator+(const Value& a, const Value& b) {
        Value r(a.num + b.num);
        if (a.exact && b.exact) r = Value(*a.exact + *b.exact);
        return r;
    }
    friend Value operator-(const Value& a, const Value& b) {
        Value r(a.num - b.num);
        if (a.exact && b.exact) r = Value(*a.exact - *b.exact);
        return r;
    }
    friend Value operator*(const Value& a, const Value& b) {
        Value r(a.num * b.num);
        if (a.exact && b.exact) r = Value(*a.exact * *b.exact);
        return r;
    }
    friend Value operator-(const Value& a) { return Value(0) - a; }

    Value inverse() const {
        if (exact) return Value(exact->inverse());
        return Value(1.0 / num);
    }
    Value conj() const {
        if (exact) return Value(exact->conj());
        return Value(std::conj(num));
    }
};

inline bool values_close(const Value& a, const Value& b, double tol) {
    if (a.exact && b.exact) return *a.exact == *b.exact || std::abs(a.num - b.num) <= tol;
    return std::abs(a.num - b.num) <= tol;
}

inline double reduce_angle(double a) {
    double r = std::fmod(a, 2 * std::numbers::pi);
    if (r < 0) r += 2 * std::numbers::pi;
    if (r >= 2 * std::numbers::pi) r -= 2 * std::numbers::pi;
    return r;
}

// e^{i alpha}; exact when alpha is a multiple of pi/4 (to within 1e-12).
inline Value phase(double alpha) {
    Value v(std::polar(1.0, alpha));
    double k = alpha / (std::numbers::pi / 4);
    double kr = std::round(k);
    if (std::abs(k - kr) < 1e-12) {
        long idx = static_cast<long>(kr) % 8;
        if (idx < 0) idx += 8;
        const mpq_class h(1, 2);
        static const GaussQ zero;
        // (1+i)/sqrt2 = (1/2 + i/2) sqrt2 and so on around the circle.
        switch (idx) {
            case 0: v.exact = ExactScalar(GaussQ(1)); break;
            case 1: v.exact = ExactScalar(zero, GaussQ(h, h)); break;
            case 2: v.exact = ExactScalar(GaussQ(0, 1)); break;
            case 3: v.exact = ExactScalar(zero, GaussQ(-h, h)); break;
            case 4: v.exact = ExactScalar(GaussQ(-1)); break;
            case 5: v.exact = ExactScalar(zero, GaussQ(-h, -h)); break;
            case 6: v.exact = ExactScalar(GaussQ(0, -1)); break;
            default: v.exact = ExactScalar(zero, GaussQ(h, -h)); break;
        }
        v.num = v.exact->to_float();
    }
    return v;
}

enum class Domain { Complex, NonNegReal, Angle, NonZeroComplex };

inline const char* to_string(Domain d) {
    switch (d) {
        case Domain::Complex: return "complex";
        case Domain::NonNegReal: return "nonneg_real";
        case Domain::Angle: return "angle";
        case Domain::NonZeroComplex: return "nonzero_complex";
    }
    return "?";
}

// Marks a node parameter as the occurrence of a rule variable.  For angle
// variables the node carries e^{i var}; otherwise it carries var + shift.
struct Symbol {
    std::string name;
    Domain domain = Domain::Complex;
    int shift = 0;
};

struct Param {
    Value value{1};
    std::optional<Symbol> symbol;

    Param() = default;
    Param(Value v) : value(std::move(v)) {}  // NOLINT
    Param(Value v, Symbol s) : value(std::move(v)), symbol(std::move(s)) {}
};

using Assignment = std::map<std::string, Value>;
using LegCounts = std::map<std::string, int>;

}  // namespace zxalg
