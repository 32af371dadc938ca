#pragma once

// Rational generating functions for period-limited square-free counts.
//
// A word avoids squares of period <= ell iff every one-letter extension is
// checked against its last 2*ell - 1 letters, so those suffixes form the
// states of a finite automaton whose length-n path counts are exactly the
// counts s_n. The generating function is therefore rational; we recover its
// reduced form by fitting the minimal linear recurrence to an exact series
// and verifying it on held-out terms.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sqfree/common.hpp"
#include "sqfree/enumerate.hpp"
#include "sqfree/linalg.hpp"
#include "sqfree/numeric.hpp"
#include "sqfree/polynomial.hpp"
#include "sqfree/word.hpp"

namespace sqfree {

class NoRecurrenceError : public Error {
public:
    using Error::Error;
};

/// Deterministic suffix automaton for words with no square of period <= ell.
/// States are the admissible suffix windows; in quotient mode they are
/// identified up to letter permutation (valid for ell >= 1 and word length
/// >= 2, where letter permutations act freely), cutting the state count by
/// about six.
struct SuffixAutomaton {
    int ell = 0;
    bool quotient = false;
    std::int32_t start = 0;
    std::vector<std::array<std::int32_t, 3>> next;  // -1 = rejected extension

    std::size_t state_count() const { return next.size(); }
};

/// Reduced rational form of the counting series: num/den with den(0) = 1 and
/// gcd(num, den) constant.
struct RationalGF {
    int ell = 0;
    IntPolynomial num, den;
    int d_num = 0, d_den = 0;

    friend bool operator==(const RationalGF&, const RationalGF&) = default;
};

namespace detail {

/// Relabels letters by first occurrence (first distinct letter becomes 'a').
inline std::vector<Symbol> canon_orbit(const std::vector<Symbol>& w) {
    std::array<Symbol, 3> map{3, 3, 3};
    Symbol fresh = 0;
    std::vector<Symbol> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (map[w[i]] == 3) map[w[i]] = fresh++;
        out[i] = map[w[i]];
    }
    return out;
}

}  // namespace detail

/// Builds the automaton. quotient defaults to on for ell >= 8; quotient mode
/// requires ell >= 1 (for ell = 0 one-letter words have nontrivial
/// stabilisers, so orbit counting breaks).
inline SuffixAutomaton build_automaton(int ell,
                                       const RunConfig& cfg = default_config(),
                                       std::optional<bool> quotient = std::nullopt) {
    if (ell < 0) throw UsageError("genfun", "build_automaton", "negative ell");
    bool quot = quotient.value_or(ell >= 8);
    if (quot && ell < 1)
        throw UsageError("genfun", "build_automaton",
                         "quotient mode needs ell >= 1");
    int window = std::max(2 * ell - 1, 0);
    SuffixAutomaton aut;
    aut.ell = ell;
    aut.quotient = quot;

    std::vector<std::vector<Symbol>> words;
    std::map<std::vector<Symbol>, std::int32_t> index;
    auto intern = [&](const std::vector<Symbol>& w) {
        auto it = index.find(w);
        if (it != index.end()) return it->second;
        if (words.size() >= cfg.state_budget)
            throw BudgetError("genfun", "build_automaton", words.size() + 1,
                              cfg.state_budget);
        auto id = static_cast<std::int32_t>(words.size());
        index.emplace(w, id);
        words.push_back(w);
        return id;
    };

    std::vector<Symbol> seed;
    if (quot) {
        seed = {0, 1};  // suffix state of the orbit representative "ab"
        if (static_cast<int>(seed.size()) > window)
            seed.erase(seed.begin(), seed.end() - window);
        seed = detail::canon_orbit(seed);
    }
    aut.start = intern(seed);

    for (std::size_t at = 0; at < words.size(); ++at) {
        std::vector<Symbol> u = words[at];  // copy: words may grow below
        std::array<std::int32_t, 3> row{-1, -1, -1};
        for (Symbol x = 0; x < kAlphabet; ++x) {
            std::vector<Symbol> w = u;
            w.push_back(x);
            std::size_t cap = std::min<std::size_t>(static_cast<std::size_t>(ell),
                                                    w.size() / 2);
            if (has_square_suffix(std::span<const Symbol>(w.data(), w.size()), cap))
                continue;
            if (static_cast<int>(w.size()) > window)
                w.erase(w.begin(), w.end() - window);
            if (quot) w = detail::canon_orbit(w);
            row[x] = intern(w);
        }
        aut.next.resize(words.size());
        aut.next[at] = row;
    }
    return aut;
}

/// Exact counts for n = 0 .. n_terms-1 by state-vector propagation.
inline CountSeries series_from_automaton(const SuffixAutomaton& aut, int n_terms) {
    if (n_terms < 1)
        throw UsageError("genfun", "series_from_automaton", "n_terms < 1");
    CountSeries out;
    out.ell = aut.ell;
    out.values.reserve(static_cast<std::size_t>(n_terms));
    out.values.push_back(1);

    std::vector<BigInt> v(aut.state_count(), BigInt(0));
    std::vector<BigInt> w(aut.state_count());
    int n = 1;
    if (aut.quotient) {
        // Orbit counting starts at length 2 (single orbit, representative
        // "ab"); lengths 0 and 1 are immediate.
        if (n_terms >= 2) out.values.push_back(3);
        if (n_terms >= 3) {
            v[static_cast<std::size_t>(aut.start)] = 1;
            n = 2;
        } else {
            return out;
        }
    } else {
        v[static_cast<std::size_t>(aut.start)] = 1;
        n = 0;
    }

    auto readout = [&]() {
        BigInt total = 0;
        for (const auto& m : v) total += m;
        return aut.quotient ? BigInt(6 * total) : total;
    };
    if (static_cast<int>(out.values.size()) <= n && n > 0)
        out.values.push_back(readout());
    while (static_cast<int>(out.values.size()) < n_terms) {
        std::fill(w.begin(), w.end(), BigInt(0));
        for (std::size_t s = 0; s < v.size(); ++s) {
            if (v[s] == 0) continue;
            for (Symbol x = 0; x < kAlphabet; ++x) {
                auto t = aut.next[s][x];
                if (t >= 0) w[static_cast<std::size_t>(t)] += v[s];
            }
        }
        v.swap(w);
        ++n;
        out.values.push_back(readout());
    }
    return out;
}

/// Minimal-order integer polynomial D(x) = 1 + d_1 x + ... with
/// sum_j D_j s_{n-j} = 0 along the tail of the series. Orders are tried in
/// ascending order; each candidate is fitted on the last order+8 equations.
/// Throws NoRecurrenceError when nothing fits within order_bound.
inline IntPolynomial minimal_recurrence(const std::vector<BigInt>& series,
                                        int order_bound) {
    if (order_bound < 0)
        throw UsageError("genfun", "minimal_recurrence", "negative order bound");
    int len = static_cast<int>(series.size());
    if (len < 2 * order_bound + 2)
        throw UsageError("genfun", "minimal_recurrence",
                         "series too short for the order bound");
    for (int r = 0; r <= order_bound; ++r) {
        int rows = std::min(len - r, r + 8);
        RationalMatrix m(static_cast<std::size_t>(rows));
        for (int i = 0; i < rows; ++i) {
            int n = len - 1 - i;
            auto& row = m[static_cast<std::size_t>(i)];
            row.resize(static_cast<std::size_t>(r) + 1);
            for (int j = 0; j <= r; ++j)
                row[static_cast<std::size_t>(j)] =
                    Rational(series[static_cast<std::size_t>(n - j)]);
        }
        auto basis = nullspace(std::move(m), r + 1);
        for (const auto& vec : basis) {
            if (vec[0] == 0) continue;
            std::vector<BigInt> coeffs(static_cast<std::size_t>(r) + 1);
            bool integral = true;
            for (int j = 0; j <= r; ++j) {
                Rational c = vec[static_cast<std::size_t>(j)] / vec[0];
                if (boost::multiprecision::denominator(c) != 1) {
                    integral = false;
                    break;
                }
                coeffs[static_cast<std::size_t>(j)] =
                    boost::multiprecision::numerator(c);
            }
            if (!integral)
                throw ConsistencyError("genfun", "minimal_recurrence",
                                       "recurrence is not integral",
                                       "order " + std::to_string(r));
            return IntPolynomial(std::move(coeffs));
        }
    }
    throw NoRecurrenceError("genfun", "minimal_recurrence",
                            "no recurrence within bound",
                            "order_bound " + std::to_string(order_bound));
}

inline IntPolynomial minimal_recurrence(const CountSeries& series, int order_bound) {
    return minimal_recurrence(series.values, order_bound);
}

/// Reduced rational generating function for the given ell: fits the minimal
/// denominator to an automaton-generated series (doubling the order guess on
/// failure), forms the numerator as den * series, checks that 50 held-out
/// series terms are reproduced exactly, and reduces by the polynomial gcd.
inline RationalGF rational_gf(int ell, const RunConfig& cfg = default_config()) {
    if (ell < 0) throw UsageError("genfun", "rational_gf", "negative ell");
    SuffixAutomaton aut = build_automaton(ell, cfg);
    constexpr int kHeldOut = 50;
    for (int guess = 16;; guess *= 2) {
        int n_terms = 2 * guess + 64 + kHeldOut;
        CountSeries series = series_from_automaton(aut, n_terms);
        std::vector<BigInt> fit(series.values.begin(),
                                series.values.end() - kHeldOut);
        IntPolynomial den;
        try {
            den = minimal_recurrence(fit, guess);
        } catch (const NoRecurrenceError&) {
            if (static_cast<std::size_t>(guess) > 2 * aut.state_count())
                throw;  // the automaton has a recurrence of order <= states
            continue;
        }

        // Numerator = den * series; exactness of the held-out terms shows up
        // as 50 trailing zero coefficients of the product.
        int r = den.degree();
        std::vector<BigInt> conv(series.values.size(), BigInt(0));
        for (std::size_t n = 0; n < conv.size(); ++n)
            for (int j = 0; j <= r && j <= static_cast<int>(n); ++j)
                conv[n] += den.coeff(j) *
                           series.values[n - static_cast<std::size_t>(j)];
        int last_nonzero = -1;
        for (int n = 0; n < static_cast<int>(conv.size()); ++n)
            if (conv[static_cast<std::size_t>(n)] != 0) last_nonzero = n;
        if (last_nonzero >= static_cast<int>(conv.size()) - kHeldOut)
            throw ConsistencyError("genfun", "rational_gf",
                                   "recurrence fails on held-out terms",
                                   "ell " + std::to_string(ell));
        conv.resize(static_cast<std::size_t>(last_nonzero) + 1);
        IntPolynomial num(std::move(conv));

        IntPolynomial common = gcd_primitive(num, den);
        if (common.degree() > 0) {
            auto qn = divide_exact(num, common);
            auto qd = divide_exact(den, common);
            if (!qn || !qd)
                throw ConsistencyError("genfun", "rational_gf",
                                       "gcd fails to divide exactly");
            num = *qn;
            den = *qd;
        }
        if (den.coeff(0) == 0)
            throw ConsistencyError("genfun", "rational_gf",
                                   "denominator lost its constant term");
        if (den.coeff(0) < 0) {
            num = -num;
            den = -den;
        }
        if (den.coeff(0) != 1)
            throw ConsistencyError("genfun", "rational_gf",
                                   "denominator constant term is not a unit");

        RationalGF gf;
        gf.ell = ell;
        gf.num = std::move(num);
        gf.den = std::move(den);
        gf.d_num = gf.num.degree();
        gf.d_den = gf.den.degree();
        return gf;
    }
}

/// First n_terms series coefficients of num/den (den(0) = 1).
inline std::vector<BigInt> expand_series(const RationalGF& gf, int n_terms) {
    if (n_terms < 0)
        throw UsageError("genfun", "expand_series", "negative n_terms");
    std::vector<BigInt> s(static_cast<std::size_t>(n_terms));
    for (int n = 0; n < n_terms; ++n) {
        BigInt v = gf.num.coeff(n);
        for (int j = 1; j <= gf.den.degree() && j <= n; ++j)
            v -= gf.den.coeff(j) * s[static_cast<std::size_t>(n - j)];
        s[static_cast<std::size_t>(n)] = v;
    }
    return s;
}

}  // namespace sqfree
