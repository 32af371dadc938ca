#pragma once

// Extended-precision number types and the few conversions the library needs.
// Exact work runs on cpp_int / cpp_rational; root refinement and reporting
// run on a fixed 100-digit binary float (wider than any requested output).

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "sqfree/common.hpp"

namespace sqfree {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using BigFloat =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>>;
using BigComplex = boost::multiprecision::cpp_complex<100>;

/// Working precision of BigFloat in decimal digits.
inline constexpr int kBigFloatDigits = 100;

/// log of a positive big integer, accurate to double precision at any size.
inline double log_big(const BigInt& v) {
    if (v <= 0) throw UsageError("numeric", "log_big", "nonpositive argument");
    long msb = static_cast<long>(boost::multiprecision::msb(v));
    if (msb <= 960) return std::log(v.convert_to<double>());
    // Scale down by a power of two so the mantissa fits a double.
    long shift = msb - 512;
    BigInt top = v >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigFloat& v) { return v.convert_to<double>(); }

/// Parse a plain decimal literal ("0.5", "-3", "12.72") to an exact rational.
inline Rational parse_decimal(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw UsageError("numeric", "parse_decimal", "empty literal");
    bool neg = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
    std::string digits;
    long frac_len = -1;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c == '.') {
            if (frac_len >= 0)
                throw UsageError("numeric", "parse_decimal", "bad literal", s);
            frac_len = 0;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (frac_len >= 0) ++frac_len;
        } else {
            throw UsageError("numeric", "parse_decimal", "bad literal", s);
        }
    }
    if (digits.empty()) throw UsageError("numeric", "parse_decimal", "bad literal", s);
    // A leading zero would flip the integer parser into octal mode.
    std::size_t first = digits.find_first_not_of('0');
    digits = first == std::string::npos ? "0" : digits.substr(first);
    BigInt num(digits);
    BigInt den = 1;
    for (long i = 0; i < std::max<long>(frac_len, 0); ++i) den *= 10;
    if (neg) num = -num;
    return Rational(num, den);
}

/// Fixed-point rendering with `decimals` digits after the point; the only
/// float-to-text path used in persisted outputs, so bytes are reproducible.
inline std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    // Avoid the two spellings of zero.
    std::string s(buf);
    if (s.find_first_of("123456789") == std::string::npos && s[0] == '-')
        s.erase(0, 1);
    return s;
}

/// Deterministic decimal rendering of a BigFloat, `digits` significant digits.
inline std::string fmt_bigfloat(const BigFloat& v, int digits) {
    return v.str(digits, std::ios_base::fmtflags(0));
}

/// Round to `decimals` places and render without exponent.
inline std::string fmt_bigfloat_fixed(const BigFloat& v, int decimals) {
    return v.str(decimals, std::ios_base::fixed);
}

}  // namespace sqfree
