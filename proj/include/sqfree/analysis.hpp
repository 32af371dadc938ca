#pragma once

// Series analysis. The logarithmic derivative of a counting series is fitted
// by Pade approximants over exact rationals; the smallest positive real pole
// of the approximant estimates the radius of convergence, its residue the
// singularity exponent, and a Richardson/Neville sweep in 1/n estimates the
// amplitude. Floating point enters only at root refinement and evaluation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqfree/common.hpp"
#include "sqfree/enumerate.hpp"
#include "sqfree/linalg.hpp"
#include "sqfree/numeric.hpp"
#include "sqfree/polynomial.hpp"
#include "sqfree/roots.hpp"

namespace sqfree {

/// Pade orders: numerator degree L, denominator degree M.
struct PadeOrder {
    int L = 0;
    int M = 0;
};

struct DlogPadeResult {
    int L = 0;
    int M = 0;
    bool defect = false;
    std::string defect_reason;
    double x_c = 0.0;
    double gamma = 0.0;
};

struct AmplitudeEstimate {
    double value = 0.0;
    bool monotone_tail = true;
};

struct ApproximantEstimate {
    double x_c_est = 0.0;
    double gamma_est = 0.0;
    double A_est = 0.0;
    double x_c_spread = 0.0;
    double gamma_spread = 0.0;
    double A_spread = 0.0;
    std::vector<DlogPadeResult> family;
    int survivors = 0;
    bool amplitude_monotone = true;
};

namespace detail {

/// Coefficients of S'(x)/S(x) from those of S; length one less than s.
inline std::vector<Rational> log_derivative(const std::vector<BigInt>& s) {
    if (s.empty() || s[0] == 0)
        throw UsageError("analysis", "log_derivative", "series must start nonzero");
    std::size_t len = s.size() - 1;
    std::vector<Rational> g(len);
    for (std::size_t n = 0; n < len; ++n) {
        Rational acc = Rational(BigInt(static_cast<std::int64_t>(n + 1)) * s[n + 1]);
        for (std::size_t j = 0; j < n; ++j) acc -= g[j] * Rational(s[n - j]);
        g[n] = acc / Rational(s[0]);
    }
    return g;
}

inline BigFloat eval_rational(const std::vector<Rational>& c, const BigFloat& x) {
    BigFloat acc(0);
    for (std::size_t i = c.size(); i != 0; --i)
        acc = acc * x + static_cast<BigFloat>(c[i - 1]);
    return acc;
}

/// Clears denominators; the positive rescale keeps the root set.
inline IntPolynomial to_integer_poly(const std::vector<Rational>& c) {
    BigInt scale(1);
    for (const Rational& v : c) {
        BigInt den = boost::multiprecision::denominator(v);
        scale = scale / boost::multiprecision::gcd(scale, den) * den;
    }
    IntPolynomial p;
    p.c.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        Rational scaled = c[i] * Rational(scale);
        p.c[i] = boost::multiprecision::numerator(scaled);
    }
    p.trim();
    return p;
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Fits the [L/M] Pade approximant P/Q to the logarithmic derivative of the
/// series, exactly over the rationals, and reads off the smallest positive
/// real pole x_p in (0,1) with gamma = -P(x_p)/Q'(x_p). Flagged as defective
/// (not an error) when the system is singular, no pole lies in (0,1), or a
/// real numerator zero sits within 1e-3 of the pole.
inline DlogPadeResult dlog_pade(const CountSeries& series, int L, int M) {
    DlogPadeResult out;
    out.L = L;
    out.M = M;
    if (L < 0 || M < 1) throw UsageError("analysis", "dlog_pade", "orders out of range");
    if (static_cast<int>(series.values.size()) < L + M + 2)
        throw UsageError("analysis", "dlog_pade", "series too short",
                         "need " + std::to_string(L + M + 2) + " terms");
    for (const BigInt& v : series.values)
        if (v <= 0)
            throw UsageError("analysis", "dlog_pade", "coefficients must be positive");

    auto g = detail::log_derivative(series.values);
    auto at = [&](int idx) { return idx < 0 ? Rational(0) : g[static_cast<std::size_t>(idx)]; };

    // Toeplitz system for q_1..q_M: sum_i q_i g_{n-i} = -g_n, n = L+1..L+M.
    RationalMatrix a(static_cast<std::size_t>(M), std::vector<Rational>(static_cast<std::size_t>(M)));
    std::vector<Rational> rhs(static_cast<std::size_t>(M));
    for (int r = 0; r < M; ++r) {
        for (int i = 0; i < M; ++i) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = at(L + r - i);
        rhs[static_cast<std::size_t>(r)] = -at(L + 1 + r);
    }
    auto q = solve_unique(a, rhs);
    if (!q) {
        out.defect = true;
        out.defect_reason = "singular system";
        return out;
    }
    std::vector<Rational> den(static_cast<std::size_t>(M) + 1);
    den[0] = 1;
    for (int i = 0; i < M; ++i) den[static_cast<std::size_t>(i + 1)] = (*q)[static_cast<std::size_t>(i)];
    std::vector<Rational> num(static_cast<std::size_t>(L) + 1);
    for (int n = 0; n <= L; ++n) {
        Rational acc(0);
        for (int i = 0; i <= std::min(n, M); ++i)
            acc += den[static_cast<std::size_t>(i)] * at(n - i);
        num[static_cast<std::size_t>(n)] = acc;
    }

    IntPolynomial den_int = detail::to_integer_poly(den);
    IntPolynomial sf = squarefree_part(den_int);
    auto bracket = detail::isolate_smallest_positive(sf, Rational(1));
    if (!bracket) {
        out.defect = true;
        out.defect_reason = "no pole in (0,1)";
        return out;
    }
    BigFloat x = static_cast<BigFloat>(Rational((bracket->first + bracket->second) / 2));
    for (int it = 0; it < 8; ++it) {
        BigFloat f = eval(sf, x);
        BigFloat fp = eval(derivative(sf), x);
        if (fp == 0) break;
        x -= f / fp;
    }
    if (!(x > 0) || !(x < 1)) {
        out.defect = true;
        out.defect_reason = "no pole in (0,1)";
        return out;
    }

    // Real numerator zero within 1e-3 of the pole marks a spurious
    // pole-zero pair.
    IntPolynomial num_int = detail::to_integer_poly(num);
    if (num_int.degree() >= 1) {
        auto num_chain = sturm::chain(squarefree_part(num_int));
        Rational center((bracket->first + bracket->second) / 2);
        Rational tol(1, 1000);
        if (sturm::count_in(num_chain, center - tol, center + tol) > 0) {
            out.defect = true;
            out.defect_reason = "zero near pole";
            return out;
        }
    } else if (num_int.degree() < 0) {
        out.defect = true;
        out.defect_reason = "vanishing numerator";
        return out;
    }

    std::vector<Rational> den_deriv(den.size() - 1);
    for (std::size_t i = 1; i < den.size(); ++i)
        den_deriv[i - 1] = den[i] * Rational(static_cast<std::int64_t>(i));
    BigFloat dq = detail::eval_rational(den_deriv, x);
    if (dq == 0) {
        out.defect = true;
        out.defect_reason = "multiple pole";
        return out;
    }
    BigFloat gamma = -detail::eval_rational(num, x) / dq;
    out.x_c = to_double(x);
    out.gamma = to_double(gamma);
    return out;
}

/// A_n = s_n x_c^n n^(1-gamma) over the last points of the series. The
/// Neville tableau in 1/n supplies extrapolants of increasing order; the most
/// stable consecutive pair is trusted only once it has converged to 2%.
/// Otherwise the raw endpoint is returned: a drifting tail means the inputs
/// disagree with the data, and polynomial extrapolation would only amplify
/// the drift.
inline AmplitudeEstimate amplitude_estimate(const CountSeries& series, double x_c,
                                            double gamma) {
    if (!(x_c > 0)) throw UsageError("analysis", "amplitude_estimate", "x_c must be positive");
    int n_max = series.n_max();
    if (n_max < 3) throw UsageError("analysis", "amplitude_estimate", "series too short");
    std::size_t points = static_cast<std::size_t>(std::min(10, n_max));
    std::vector<double> h(points), y(points);
    for (std::size_t i = 0; i < points; ++i) {
        int n = n_max - static_cast<int>(points) + 1 + static_cast<int>(i);
        h[i] = 1.0 / n;
        y[i] = std::exp(log_big(series.values[static_cast<std::size_t>(n)]) +
                        n * std::log(x_c) + (1.0 - gamma) * std::log(static_cast<double>(n)));
    }
    AmplitudeEstimate out;
    double scale = 0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    // sign-consistent differences; noise-level ones do not count
    out.monotone_tail = true;
    double prev = 0;
    for (std::size_t i = 1; i < points; ++i) {
        double d = y[i] - y[i - 1];
        if (std::abs(d) < 1e-9 * scale) continue;
        if (prev != 0 && d * prev < 0) out.monotone_tail = false;
        prev = d;
    }
    // Neville at h = 0; diag[j] extrapolates with the last j+1 points.
    std::vector<double> diag;
    diag.reserve(points);
    std::vector<double> t = y;
    diag.push_back(t[points - 1]);
    for (std::size_t j = 1; j < points; ++j) {
        for (std::size_t i = points - 1; i >= j; --i) {
            t[i] = ((0.0 - h[i - j]) * t[i] - (0.0 - h[i]) * t[i - 1]) / (h[i] - h[i - j]);
            if (i == j) break;
        }
        diag.push_back(t[points - 1]);
    }
    std::size_t best = 1;
    double gap = std::abs(diag[1] - diag[0]);
    for (std::size_t j = 2; j < diag.size(); ++j) {
        double d = std::abs(diag[j] - diag[j - 1]);
        if (d < gap) {
            best = j;
            gap = d;
        }
    }
    out.value = gap <= 0.02 * std::abs(diag[best]) ? diag[best] : diag[0];
    return out;
}

/// Orders within `band` of the diagonal whose data requirement L+M+2
/// exhausts one of the last three truncation lengths, so a family pools
/// over both numerator-denominator balance and truncation.
inline std::vector<PadeOrder> banded_family(int n_terms, int band) {
    if (band < 0)
        throw UsageError("analysis", "banded_family", "negative band");
    std::vector<PadeOrder> fam;
    for (int need = std::max(8, n_terms - 2); need <= n_terms; ++need) {
        int total = need - 2;
        for (int L = 2; L <= total - 2; ++L) {
            int M = total - L;
            if (std::abs(L - M) > band) continue;
            fam.push_back({L, M});
        }
    }
    return fam;
}

inline std::vector<PadeOrder> default_family(int n_terms) {
    return banded_family(n_terms, 6);
}

/// Family presets by name: "default" (band six) or "diagK" with a digit K
/// for orders within K of the diagonal.
inline std::vector<PadeOrder> named_family(const std::string& name,
                                           int n_terms) {
    if (name == "default") return default_family(n_terms);
    if (name.size() == 5 && name.compare(0, 4, "diag") == 0 &&
        name[4] >= '0' && name[4] <= '9')
        return banded_family(n_terms, name[4] - '0');
    throw UsageError("analysis", "named_family", "unknown family preset", name);
}

/// Runs the family, drops members that do not fit the series or are flagged
/// defective, and pools the survivors by median with max-min spreads. The
/// amplitude is estimated per survivor and pooled the same way.
inline ApproximantEstimate pooled_estimate(const CountSeries& series,
                                           const std::vector<PadeOrder>& family,
                                           const RunConfig& cfg = default_config()) {
    if (family.empty())
        throw UsageError("analysis", "pooled_estimate", "empty family");
    std::vector<PadeOrder> fitting;
    for (const PadeOrder& o : family)
        if (o.L + o.M + 2 <= static_cast<int>(series.values.size())) fitting.push_back(o);

    ApproximantEstimate out;
    out.family.resize(fitting.size());
    parallel_for(fitting.size(), cfg.effective_threads(), [&](std::size_t i) {
        out.family[i] = dlog_pade(series, fitting[i].L, fitting[i].M);
    });

    std::vector<double> xs, gs, as;
    for (const auto& r : out.family) {
        if (r.defect) continue;
        auto amp = amplitude_estimate(series, r.x_c, r.gamma);
        if (!amp.monotone_tail) out.amplitude_monotone = false;
        xs.push_back(r.x_c);
        gs.push_back(r.gamma);
        as.push_back(amp.value);
    }
    out.survivors = static_cast<int>(xs.size());
    if (out.survivors < 3)
        throw ConsistencyError("analysis", "pooled_estimate", "insufficient approximants",
                               std::to_string(out.survivors) + " of " +
                                   std::to_string(family.size()) + " usable");
    auto spread = [](const std::vector<double>& v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi - *lo;
    };
    out.x_c_est = detail::median_of(xs);
    out.gamma_est = detail::median_of(gs);
    out.A_est = detail::median_of(as);
    out.x_c_spread = spread(xs);
    out.gamma_spread = spread(gs);
    out.A_spread = spread(as);
    return out;
}

}  // namespace sqfree
