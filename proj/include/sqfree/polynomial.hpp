#pragma once

// Dense univariate polynomials with exact integer coefficients, ascending
// order. Everything here is exact: gcd goes through primitive pseudo-remainder
// sequences, division refuses to round, and evaluation is templated over the
// number type so callers choose their precision.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "sqfree/common.hpp"
#include "sqfree/numeric.hpp"

namespace sqfree {

struct IntPolynomial {
    std::vector<BigInt> c;  // c[i] multiplies x^i; trimmed, so c.back() != 0

    IntPolynomial() = default;
    IntPolynomial(std::initializer_list<BigInt> coeffs) : c(coeffs) { trim(); }
    explicit IntPolynomial(std::vector<BigInt> coeffs) : c(std::move(coeffs)) {
        trim();
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 if zero

    const BigInt& coeff(int i) const {
        static const BigInt zero{0};
        return (i < 0 || i >= static_cast<int>(c.size()))
                   ? zero
                   : c[static_cast<std::size_t>(i)];
    }

    const BigInt& leading() const { return c.back(); }

    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;
};

inline IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<BigInt> r(std::max(a.c.size(), b.c.size()), BigInt(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return IntPolynomial(std::move(r));
}

inline IntPolynomial operator-(const IntPolynomial& a) {
    IntPolynomial r = a;
    for (auto& v : r.c) v = -v;
    return r;
}

inline IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    return a + (-b);
}

inline IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> r(a.c.size() + b.c.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return IntPolynomial(std::move(r));
}

inline IntPolynomial operator*(const BigInt& k, const IntPolynomial& a) {
    if (k == 0) return {};
    IntPolynomial r = a;
    for (auto& v : r.c) v *= k;
    return r;
}

inline IntPolynomial derivative(const IntPolynomial& p) {
    if (p.c.size() <= 1) return {};
    std::vector<BigInt> r(p.c.size() - 1);
    for (std::size_t i = 1; i < p.c.size(); ++i) r[i - 1] = BigInt(i) * p.c[i];
    return IntPolynomial(std::move(r));
}

namespace detail {
template <class T>
T from_bigint(const BigInt& v) {
    if constexpr (std::is_same_v<T, BigComplex>)
        return BigComplex(static_cast<BigFloat>(v));
    else
        return static_cast<T>(v);
}
}  // namespace detail

/// Horner evaluation; T picks the arithmetic (BigInt, Rational, BigFloat,
/// BigComplex, double).
template <class T>
T eval(const IntPolynomial& p, const T& x) {
    T acc = detail::from_bigint<T>(BigInt(0));
    for (std::size_t i = p.c.size(); i != 0; --i)
        acc = acc * x + detail::from_bigint<T>(p.c[i - 1]);
    return acc;
}

/// gcd of all coefficients, non-negative; 0 for the zero polynomial.
inline BigInt content(const IntPolynomial& p) {
    BigInt g = 0;
    for (const auto& v : p.c) {
        g = boost::multiprecision::gcd(g, v);
        if (g == 1) break;
    }
    return g < 0 ? BigInt(-g) : g;
}

/// p divided by its content, sign fixed so the leading coefficient is
/// positive. Zero stays zero.
inline IntPolynomial primitive_part(const IntPolynomial& p) {
    if (p.is_zero()) return {};
    BigInt g = content(p);
    if (p.leading() < 0) g = -g;
    IntPolynomial r = p;
    for (auto& v : r.c) v /= g;
    return r;
}

/// Exact quotient a / b in integer polynomials, or nullopt when b does not
/// divide a exactly.
inline std::optional<IntPolynomial> divide_exact(const IntPolynomial& a,
                                                 const IntPolynomial& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return IntPolynomial{};
    if (a.degree() < b.degree()) return std::nullopt;
    std::vector<BigInt> rem = a.c;
    std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - b.degree()) + 1,
                          BigInt(0));
    for (int d = a.degree(); d >= b.degree(); --d) {
        BigInt& top = rem[static_cast<std::size_t>(d)];
        if (top == 0) continue;
        if (top % b.leading() != 0) return std::nullopt;
        BigInt f = top / b.leading();
        q[static_cast<std::size_t>(d - b.degree())] = f;
        for (int i = 0; i <= b.degree(); ++i)
            rem[static_cast<std::size_t>(d - b.degree() + i)] -=
                f * b.c[static_cast<std::size_t>(i)];
    }
    for (const auto& v : rem)
        if (v != 0) return std::nullopt;
    return IntPolynomial(std::move(q));
}

/// Remainder of a mod b over the rationals, rescaled by a positive rational
/// to a primitive integer polynomial (sign of the true remainder preserved).
inline IntPolynomial rem_scaled(const IntPolynomial& a, const IntPolynomial& b) {
    if (b.is_zero())
        throw ConsistencyError("polynomial", "rem_scaled", "division by zero");
    std::vector<Rational> rem(a.c.size());
    for (std::size_t i = 0; i < a.c.size(); ++i) rem[i] = Rational(a.c[i]);
    Rational lead(b.leading());
    for (int d = a.degree(); d >= b.degree(); --d) {
        Rational f = rem[static_cast<std::size_t>(d)] / lead;
        if (f == 0) continue;
        for (int i = 0; i <= b.degree(); ++i)
            rem[static_cast<std::size_t>(d - b.degree() + i)] -=
                f * Rational(b.c[static_cast<std::size_t>(i)]);
    }
    int top = b.degree() - 1;
    while (top >= 0 && rem[static_cast<std::size_t>(top)] == 0) --top;
    if (top < 0) return {};
    BigInt den = 1;
    for (int i = 0; i <= top; ++i)
        den = boost::multiprecision::lcm(
            den, boost::multiprecision::denominator(rem[static_cast<std::size_t>(i)]));
    std::vector<BigInt> out(static_cast<std::size_t>(top) + 1);
    for (int i = 0; i <= top; ++i) {
        Rational v = rem[static_cast<std::size_t>(i)] * Rational(den);
        out[static_cast<std::size_t>(i)] = boost::multiprecision::numerator(v);
    }
    IntPolynomial r(std::move(out));
    BigInt g = content(r);
    for (auto& v : r.c) v /= g;
    return r;
}

/// Primitive gcd via a pseudo-remainder sequence; result is primitive with
/// positive leading coefficient (a constant gcd comes back as 1).
inline IntPolynomial gcd_primitive(IntPolynomial a, IntPolynomial b) {
    a = primitive_part(a);
    b = primitive_part(b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        if (b.degree() == 0) return IntPolynomial{1};
        IntPolynomial r = rem_scaled(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return primitive_part(a);
}

/// The squarefree part p / gcd(p, p'), primitive, positive leading
/// coefficient. Shares every root of p exactly once.
inline IntPolynomial squarefree_part(const IntPolynomial& p) {
    if (p.degree() <= 0) return primitive_part(p);
    IntPolynomial g = gcd_primitive(p, derivative(p));
    auto q = divide_exact(primitive_part(p), g);
    if (!q)
        throw ConsistencyError("polynomial", "squarefree_part",
                               "gcd does not divide its polynomial");
    return primitive_part(*q);
}

/// Human-readable form like "1 - x - x^3" (ascending powers).
inline std::string to_text(const IntPolynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int i = 0; i <= p.degree(); ++i) {
        const BigInt& v = p.coeff(i);
        if (v == 0) continue;
        BigInt mag = v < 0 ? BigInt(-v) : v;
        if (out.empty())
            out += v < 0 ? "-" : "";
        else
            out += v < 0 ? " - " : " + ";
        bool unit = mag == 1 && i > 0;
        if (!unit) out += mag.str();
        if (i > 0) {
            if (!unit) out += "*";
            out += "x";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

}  // namespace sqfree
