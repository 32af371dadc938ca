#pragma once

// Letter-weighted ensemble built on the triangle s_{n,k}: partition
// polynomials s_n(q), finite-size free energy F_n(q) with its rigorous
// envelope, the critical curve x_c(q), and the entropy-of-density transform
// P_n(eps). Evaluation is log-domain throughout; q^k spans hundreds of
// orders of magnitude across the default grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sqfree/common.hpp"
#include "sqfree/enumerate.hpp"
#include "sqfree/numeric.hpp"

namespace sqfree {

/// Density window (eps_minus, eps_plus) on which the entropy transform is
/// taken: the proven bounds on the letter density of infinite square-free
/// words.
inline constexpr double kEpsMinusNum = 1780.0, kEpsMinusDen = 6481.0;
inline constexpr double kEpsPlusNum = 469.0, kEpsPlusDen = 1201.0;

/// Reference radius of convergence at q = 1 used by the bound envelopes.
inline constexpr double kCriticalPoint = 0.768189;

struct FreeEnergyBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Free-energy values over a (n, q) grid, kept alongside the exact triangle
/// they were computed from.
struct ThermoTable {
    CountTable source;
    int n_used = 0;
    std::vector<double> q_grid;
    /// values[n][j] = F_n(q_grid[j]) for 1 <= n <= n_used; row 0 is empty.
    std::vector<std::vector<double>> values;
    /// argmax[n][j] = least k maximising s_{n,k} q^k; row 0 is empty.
    std::vector<std::vector<int>> argmax;
};

struct CriticalPoint {
    Rational q;
    double x_c = 0.0;
    double uncertainty = 0.0;
    bool defective = false;      // estimator did not converge at this q
    bool within_bounds = false;  // inside the rigorous envelope, with slack
};

struct CriticalCurve {
    std::vector<CriticalPoint> points;
    std::string method;
};

/// Radius estimator contract: given the integer coefficient series, return
/// (radius, uncertainty). Throwing ConsistencyError marks the point
/// defective without aborting the curve.
using RadiusEstimator =
    std::function<std::pair<double, double>(const CountSeries&)>;

struct EntropyPoint {
    double eps = 0.0;
    double value = 0.0;
    double q = 0.0;  // minimising weight
};

struct EntropyCurve {
    std::vector<EntropyPoint> points;
    double eps_minus = kEpsMinusNum / kEpsMinusDen;
    double eps_plus = kEpsPlusNum / kEpsPlusDen;
    int n_used = 0;
    double max_eps = 0.0;    // grid maximiser
    double max_value = 0.0;
    double q_at_max = 0.0;
    /// Largest raw second difference of value over the grid; at most
    /// line-search noise for a concave curve.
    double max_second_difference = 0.0;
};

namespace detail {

inline void require_row(const CountTable& table, int n, const char* op) {
    if (n < 0 || n > table.n_max())
        throw UsageError("thermo", op, "row out of range",
                         "n=" + std::to_string(n));
}

/// log s_{n,k} per k; empty counts marked with -inf so they drop out of
/// the max-shift sum.
inline std::vector<double> log_row(const CountTable& table, int n) {
    const auto& row = table.rows[static_cast<std::size_t>(n)];
    std::vector<double> out(row.size(),
                            -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < row.size(); ++k)
        if (row[k] > 0) out[k] = log_big(row[k]);
    return out;
}

/// log sum_k exp(logs[k] + k t) with max-shift; t = log q.
inline double log_partition(const std::vector<double>& logs, double t) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < logs.size(); ++k)
        m = std::max(m, logs[k] + static_cast<double>(k) * t);
    double acc = 0.0;
    for (std::size_t k = 0; k < logs.size(); ++k) {
        double e = logs[k] + static_cast<double>(k) * t - m;
        if (e > -745.0) acc += std::exp(e);
    }
    return m + std::log(acc);
}

}  // namespace detail

/// log s_n(q) = log sum_k s_{n,k} q^k, evaluated stably in the log domain.
inline double partition_polynomial(const CountTable& table, int n, double q) {
    detail::require_row(table, n, "partition_polynomial");
    if (!(q > 0))
        throw UsageError("thermo", "partition_polynomial", "q must be positive");
    return detail::log_partition(detail::log_row(table, n), std::log(q));
}

/// s_n(q) evaluated exactly for rational q; the oracle for the log-domain
/// path and for submultiplicativity checks.
inline Rational partition_value(const CountTable& table, int n,
                                const Rational& q) {
    detail::require_row(table, n, "partition_value");
    if (q <= 0)
        throw UsageError("thermo", "partition_value", "q must be positive");
    const auto& row = table.rows[static_cast<std::size_t>(n)];
    Rational acc(0);
    for (std::size_t k = row.size(); k != 0; --k)
        acc = acc * q + Rational(row[k - 1]);
    return acc;
}

/// F_n(q) = (1/n) log s_n(q).
inline double finite_free_energy(const CountTable& table, int n, double q) {
    if (n == 0)
        throw UsageError("thermo", "finite_free_energy", "n must be positive");
    return partition_polynomial(table, n, q) / n;
}

/// Rigorous two-sided envelope for the limit free energy:
/// max{(64/233) log q, (13/36) log q} below, and
/// -log x_c + max{(1780/6481) log q, (469/1201) log q} above.
inline FreeEnergyBounds free_energy_bounds(double q,
                                           double x_c = kCriticalPoint) {
    if (!(q > 0))
        throw UsageError("thermo", "free_energy_bounds", "q must be positive");
    double lq = std::log(q);
    FreeEnergyBounds out;
    out.lower = std::max((64.0 / 233.0) * lq, (13.0 / 36.0) * lq);
    out.upper = -std::log(x_c) + std::max((kEpsMinusNum / kEpsMinusDen) * lq,
                                          (kEpsPlusNum / kEpsPlusDen) * lq);
    return out;
}

/// Least k maximising s_{n,k} q^k, decided exactly: for q = a/b the
/// candidates s_{n,k} a^k b^(n-k) are compared as integers.
inline int argmax_k(const CountTable& table, int n, const Rational& q) {
    detail::require_row(table, n, "argmax_k");
    if (q <= 0)
        throw UsageError("thermo", "argmax_k", "q must be positive");
    BigInt a = boost::multiprecision::numerator(q);
    BigInt b = boost::multiprecision::denominator(q);
    const auto& row = table.rows[static_cast<std::size_t>(n)];
    std::size_t terms = row.size();
    std::vector<BigInt> apow(terms), bpow(terms);
    apow[0] = 1;
    bpow[0] = 1;
    for (std::size_t i = 1; i < terms; ++i) {
        apow[i] = apow[i - 1] * a;
        bpow[i] = bpow[i - 1] * b;
    }
    int best = 0;
    BigInt best_value = row[0] * bpow[terms - 1];
    for (std::size_t k = 1; k < terms; ++k) {
        BigInt value = row[k] * apow[k] * bpow[terms - 1 - k];
        if (value > best_value) {
            best = static_cast<int>(k);
            best_value = value;
        }
    }
    return best;
}

inline int argmax_k(const CountTable& table, int n, double q) {
    if (!(q > 0))
        throw UsageError("thermo", "argmax_k", "q must be positive");
    return argmax_k(table, n, Rational(q));
}

/// 81 log-spaced weights covering [1e-2, 1e2].
inline std::vector<double> default_q_grid() {
    std::vector<double> grid(81);
    for (int j = 0; j < 81; ++j)
        grid[static_cast<std::size_t>(j)] =
            std::exp(std::log(10.0) * (-2.0 + 0.05 * j));
    return grid;
}

/// F_n(q) and the exact maximiser index over rows 1..n_used.
inline ThermoTable make_thermo_table(const CountTable& table, int n_used,
                                     std::vector<double> q_grid = default_q_grid(),
                                     const RunConfig& cfg = default_config()) {
    if (n_used < 1)
        throw UsageError("thermo", "make_thermo_table", "n_used must be positive");
    detail::require_row(table, n_used, "make_thermo_table");
    if (q_grid.empty())
        throw UsageError("thermo", "make_thermo_table", "empty q grid");
    for (double q : q_grid)
        if (!(q > 0))
            throw UsageError("thermo", "make_thermo_table", "q must be positive");
    ThermoTable out;
    out.source = table;
    out.n_used = n_used;
    out.q_grid = std::move(q_grid);
    out.values.resize(static_cast<std::size_t>(n_used) + 1);
    out.argmax.resize(static_cast<std::size_t>(n_used) + 1);
    parallel_for(static_cast<std::size_t>(n_used), cfg.effective_threads(),
                 [&](std::size_t i) {
                     int n = static_cast<int>(i) + 1;
                     auto logs = detail::log_row(out.source, n);
                     auto& vrow = out.values[static_cast<std::size_t>(n)];
                     auto& arow = out.argmax[static_cast<std::size_t>(n)];
                     vrow.resize(out.q_grid.size());
                     arow.resize(out.q_grid.size());
                     for (std::size_t j = 0; j < out.q_grid.size(); ++j) {
                         double q = out.q_grid[j];
                         vrow[j] = detail::log_partition(logs, std::log(q)) / n;
                         arow[j] = argmax_k(out.source, n, q);
                     }
                 });
    return out;
}

/// Radius of the weighted series per q. The integer series handed to the
/// estimator is s_n(a/b) b^n, whose radius is x_c(q)/b; the returned point
/// is rescaled back. A point is flagged when it leaves the rigorous
/// envelope by more than its uncertainty plus a small finite-size
/// allowance (the q = 1 estimate sits a few 1e-4 below the envelope
/// corner it converges to).
inline CriticalCurve critical_curve(const CountTable& table,
                                    const std::vector<Rational>& q_grid,
                                    const RadiusEstimator& estimator,
                                    std::string method = "dlog-pade",
                                    const RunConfig& cfg = default_config()) {
    if (q_grid.empty())
        throw UsageError("thermo", "critical_curve", "empty q grid");
    for (const Rational& q : q_grid)
        if (q <= 0)
            throw UsageError("thermo", "critical_curve", "q must be positive");
    CriticalCurve out;
    out.method = std::move(method);
    out.points.resize(q_grid.size());
    int n_max = table.n_max();
    parallel_for(q_grid.size(), cfg.effective_threads(), [&](std::size_t i) {
        const Rational& q = q_grid[i];
        BigInt a = boost::multiprecision::numerator(q);
        BigInt b = boost::multiprecision::denominator(q);
        CountSeries weighted;
        weighted.values.resize(static_cast<std::size_t>(n_max) + 1);
        for (int n = 0; n <= n_max; ++n) {
            const auto& row = table.rows[static_cast<std::size_t>(n)];
            BigInt acc(0);
            BigInt apow(1);
            BigInt bpow = boost::multiprecision::pow(
                b, static_cast<unsigned>(row.size() - 1));
            for (std::size_t k = 0; k < row.size(); ++k) {
                acc += row[k] * apow * bpow;
                apow *= a;
                if (k + 1 < row.size()) bpow /= b;
            }
            weighted.values[static_cast<std::size_t>(n)] = acc;
        }
        CriticalPoint& pt = out.points[i];
        pt.q = q;
        double scale = to_double(Rational(b));
        try {
            auto [radius, unc] = estimator(weighted);
            pt.x_c = radius * scale;
            pt.uncertainty = unc * scale;
        } catch (const ConsistencyError&) {
            pt.defective = true;
            return;
        }
        double qd = to_double(q);
        double lower = kCriticalPoint *
                       std::min(std::pow(qd, -kEpsMinusNum / kEpsMinusDen),
                                std::pow(qd, -kEpsPlusNum / kEpsPlusDen));
        double upper = std::min(std::pow(qd, -64.0 / 233.0),
                                std::pow(qd, -13.0 / 36.0));
        double slack = pt.uncertainty + 2e-3;
        pt.within_bounds = pt.x_c >= lower - slack && pt.x_c <= upper + slack;
    });
    return out;
}

namespace detail {

/// Minimises t -> log_partition(logs, t)/n - eps t: coarse pass over the
/// default grid's log range, then golden-section inside the bracketing
/// cell (valid since the objective is convex in t).
inline EntropyPoint legendre_point(const std::vector<double>& logs, int n,
                                   double eps) {
    auto objective = [&](double t) {
        return log_partition(logs, t) / n - eps * t;
    };
    double lo = -2.0 * std::log(10.0), hi = 2.0 * std::log(10.0);
    int coarse = 80;
    double best_t = lo, best_v = objective(lo);
    for (int j = 1; j <= coarse; ++j) {
        double t = lo + (hi - lo) * j / coarse;
        double v = objective(t);
        if (v < best_v) {
            best_v = v;
            best_t = t;
        }
    }
    double step = (hi - lo) / coarse;
    double a = std::max(lo, best_t - step), b = std::min(hi, best_t + step);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    for (int it = 0; it < 90; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    double t = 0.5 * (a + b);
    EntropyPoint pt;
    pt.eps = eps;
    pt.value = objective(t);
    pt.q = std::exp(t);
    return pt;
}

}  // namespace detail

/// Finite-n entropy transform P_n(eps) = inf_q {F_n(q) - eps log q} over a
/// density grid inside the proven window, with the minimising q per point,
/// the grid maximiser, and a concavity diagnostic.
inline EntropyCurve entropy_curve(const CountTable& table,
                                  const std::vector<double>& eps_grid, int n,
                                  const RunConfig& cfg = default_config()) {
    if (n == 0)
        throw UsageError("thermo", "entropy_curve", "n must be positive");
    detail::require_row(table, n, "entropy_curve");
    if (eps_grid.empty())
        throw UsageError("thermo", "entropy_curve", "empty density grid");
    EntropyCurve out;
    for (double eps : eps_grid)
        if (!(eps > out.eps_minus && eps < out.eps_plus))
            throw UsageError("thermo", "entropy_curve",
                             "density outside the proven window",
                             "eps=" + std::to_string(eps));
    out.n_used = n;
    out.points.resize(eps_grid.size());
    auto logs = detail::log_row(table, n);
    parallel_for(eps_grid.size(), cfg.effective_threads(), [&](std::size_t i) {
        out.points[i] = detail::legendre_point(logs, n, eps_grid[i]);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.points.size(); ++i)
        if (out.points[i].value > out.points[best].value) best = i;
    out.max_eps = out.points[best].eps;
    out.max_value = out.points[best].value;
    out.q_at_max = out.points[best].q;
    out.max_second_difference = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < out.points.size(); ++i) {
        double d2 = out.points[i + 1].value - 2.0 * out.points[i].value +
                    out.points[i - 1].value;
        out.max_second_difference = std::max(out.max_second_difference, d2);
    }
    if (out.points.size() < 3) out.max_second_difference = 0.0;
    return out;
}

/// Uniform density grid of `points` values spanning the interior of
/// (16/51, 6/17), the window on which the transform is known positive.
inline std::vector<double> default_eps_grid(int points = 41) {
    if (points < 2)
        throw UsageError("thermo", "default_eps_grid", "need at least 2 points");
    double lo = 16.0 / 51.0 + 1e-6, hi = 6.0 / 17.0 - 1e-6;
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return grid;
}

}  // namespace sqfree
