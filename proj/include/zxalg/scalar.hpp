#pragma once

// Scalar backends.  ExactScalar is an element p + q*sqrt(2) of Q(i)(sqrt2)
// with p, q Gaussian rationals; FloatScalar is a plain complex double.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "error.hpp"

namespace zxalg {

using FloatScalar = std::complex<double>;

inline bool float_close(FloatScalar x, FloatScalar y, double tol) { return std::abs(x - y) <= tol; }

// Gaussian rational re + im*i.  mpq_class keeps both parts canonical.
struct GaussQ {
    mpq_class re{0};
    mpq_class im{0};

    GaussQ() = default;
    // GMP compares rationals by numerator and denominator, so keep them reduced.
    GaussQ(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
        re.canonicalize();
        im.canonicalize();
    }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    GaussQ conj() const { return {re, -im}; }
    mpq_class norm() const { return re * re + im * im; }

    friend GaussQ operator+(const GaussQ& a, const GaussQ& b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussQ operator-(const GaussQ& a, const GaussQ& b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussQ operator-(const GaussQ& a) { return {-a.re, -a.im}; }
    friend GaussQ operator*(const GaussQ& a, const GaussQ& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re == b.re && a.im == b.im; }

    GaussQ inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero Gaussian rational");
        mpq_class n = norm();
        return {re / n, -im / n};
    }
    FloatScalar to_float() const { return {re.get_d(), im.get_d()}; }
};

class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(GaussQ p, GaussQ q = {}) : p_(std::move(p)), q_(std::move(q)) {}
    ExactScalar(long v) : p_(mpq_class(v)) {}  // NOLINT: implicit from integers is intended

    static ExactScalar rational(long num, long den = 1, long inum = 0, long iden = 1) {
        mpq_class r(num, den), i(inum, iden);
        r.canonicalize();
        i.canonicalize();
        return ExactScalar(GaussQ(r, i));
    }
    static ExactScalar i() { return ExactScalar(GaussQ(0, 1)); }
    static ExactScalar sqrt2() { return ExactScalar(GaussQ(), GaussQ(1)); }
    static ExactScalar inv_sqrt2() { return ExactScalar(GaussQ(), GaussQ(mpq_class(1, 2))); }

    const GaussQ& p() const { return p_; }
    const GaussQ& q() const { return q_; }

    bool is_zero() const { return p_.is_zero() && q_.is_zero(); }

    friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) { return {a.p_ + b.p_, a.q_ + b.q_}; }
    friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return {a.p_ - b.p_, a.q_ - b.q_}; }
    friend ExactScalar operator-(const ExactScalar& a) { return {-a.p_, -a.q_}; }
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
        GaussQ two(2);
        return {a.p_ * b.p_ + two * a.q_ * b.q_, a.p_ * b.q_ + a.q_ * b.p_};
    }
    ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
    friend bool operator==(const ExactScalar& a, const ExactScalar& b) { return a.p_ == b.p_ && a.q_ == b.q_; }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    // Complex conjugation; sqrt(2) is real so only the Gaussian parts flip.
    ExactScalar conj() const { return {p_.conj(), q_.conj()}; }

    // The field automorphism sqrt2 -> -sqrt2.
    ExactScalar galois() const { return {p_, -q_}; }

    ExactScalar inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        // x * galois(x) = p^2 - 2 q^2 is a Gaussian rational.
        GaussQ n = p_ * p_ - GaussQ(2) * q_ * q_;
        GaussQ ni = n.inverse();
        return {p_ * ni, -(q_ * ni)};
    }

    FloatScalar to_float() const {
        // Fold q*sqrt2 in long double to stay well inside the 4 ulp budget.
        long double s = std::sqrt(2.0L);
        long double re = static_cast<long double>(p_.re.get_d()) + s * static_cast<long double>(q_.re.get_d());
        long double im = static_cast<long double>(p_.im.get_d()) + s * static_cast<long double>(q_.im.get_d());
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    std::string str() const {
        std::ostringstream os;
        os << "(" << p_.re << (sgn(p_.im) < 0 ? "" : "+") << p_.im << "i)";
        if (!q_.is_zero()) os << "+(" << q_.re << (sgn(q_.im) < 0 ? "" : "+") << q_.im << "i)*sqrt2";
        return os.str();
    }
    friend std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << x.str(); }

private:
    GaussQ p_;
    GaussQ q_;
};

inline ExactScalar exact_mul(const ExactScalar& x, const ExactScalar& y) { return x * y; }
inline FloatScalar exact_to_float(const ExactScalar& x) { return x.to_float(); }

// Exact square root of a nonnegative rational when it lies in Q(sqrt2),
// i.e. r = s^2 or r = 2 s^2 with s rational.
inline std::optional<ExactScalar> exact_sqrt_rational(const mpq_class& r) {
    if (sgn(r) < 0) return std::nullopt;
    auto perfect = [](const mpz_class& z) -> std::optional<mpz_class> {
        if (sgn(z) < 0) return std::nullopt;
        mpz_class s = sqrt(z);
        if (s * s == z) return s;
        return std::nullopt;
    };
    auto n = perfect(r.get_num());
    auto d = perfect(r.get_den());
    if (n && d) return ExactScalar(GaussQ(mpq_class(*n, *d)));
    // r = 2 s^2  <=>  r/2 is a square, and then sqrt(r) = s*sqrt2.
    mpq_class half = r / 2;
    auto n2 = perfect(half.get_num());
    auto d2 = perfect(half.get_den());
    if (n2 && d2) return ExactScalar(GaussQ(), GaussQ(mpq_class(*n2, *d2)));
    return std::nullopt;
}

// Compile-time dispatch for the two backends used by the interpreter.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<FloatScalar> {
    static constexpr const char* name = "float";
    static FloatScalar zero() { return 0.0; }
    static FloatScalar one() { return 1.0; }
    static FloatScalar from_int(long v) { return static_cast<double>(v); }
    static FloatScalar inv_sqrt2() { return 1.0 / std::sqrt(2.0); }
    static bool is_zero(const FloatScalar& x) { return x == 0.0; }
    static FloatScalar conj(const FloatScalar& x) { return std::conj(x); }
    static FloatScalar to_float(const FloatScalar& x) { return x; }
};

template <>
struct ScalarOps<ExactScalar> {
    static constexpr const char* name = "exact";
    static ExactScalar zero() { return ExactScalar(); }
    static ExactScalar one() { return ExactScalar(1); }
    static ExactScalar from_int(long v) { return ExactScalar(v); }
    static ExactScalar inv_sqrt2() { return ExactScalar::inv_sqrt2(); }
    static bool is_zero(const ExactScalar& x) { return x.is_zero(); }
    static ExactScalar conj(const ExactScalar& x) { return x.conj(); }
    static FloatScalar to_float(const ExactScalar& x) { return x.to_float(); }
};

}  // namespace zxalg
