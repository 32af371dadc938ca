#pragma once

// Root location for denominator and numerator polynomials: a certified
// smallest positive real root (exact rational bracketing via Sturm counts
// and sign bisection, then Newton polish in high-precision floats) and the
// full complex root set via simultaneous Aberth iteration on the squarefree
// factors from Yun decomposition.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqfree/common.hpp"
#include "sqfree/genfun.hpp"
#include "sqfree/numeric.hpp"
#include "sqfree/polynomial.hpp"

namespace sqfree {

/// Smallest positive real root of a denominator, with exact certificate.
struct RootResult {
    std::optional<int> ell;
    BigFloat x_c;       // polished value, far beyond 30 significant digits
    Rational lo, hi;    // den changes sign across [lo, hi]; no root in (0, lo]
};

/// One complex root with its multiplicity and a relative residual.
struct RootPoint {
    BigComplex z;
    int multiplicity = 1;
    BigFloat residual;
};

/// Poles and zeros of a rational generating function.
struct PoleSet {
    int ell = 0;
    std::vector<RootPoint> poles, zeros;
    Rational near_unit_fraction;  // pole mass with | |z| - 1 | <= 1/10
};

namespace sturm {

/// Sturm chain of a squarefree polynomial. rem_scaled only rescales by
/// positive rationals, so the sign pattern of the true remainders survives.
inline std::vector<IntPolynomial> chain(const IntPolynomial& p) {
    std::vector<IntPolynomial> c;
    c.push_back(p);
    c.push_back(derivative(p));
    while (!c.back().is_zero() && c.back().degree() >= 1) {
        IntPolynomial r = rem_scaled(c[c.size() - 2], c.back());
        if (r.is_zero()) break;
        c.push_back(-r);
    }
    return c;
}

inline int sign_of(const Rational& v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

/// Sign variations of the chain at x.
inline int variations(const std::vector<IntPolynomial>& c, const Rational& x) {
    int var = 0, prev = 0;
    for (const auto& p : c) {
        int s = sign_of(eval(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

/// Number of distinct real roots in (lo, hi].
inline int count_in(const std::vector<IntPolynomial>& c, const Rational& lo,
                    const Rational& hi) {
    return variations(c, lo) - variations(c, hi);
}

}  // namespace sturm

namespace detail {

/// Isolates the smallest real root of squarefree p in (0, bound]: returns an
/// exact rational bracket of width < 2^-117 with a sign change across it and
/// a Sturm certificate that (0, lo] holds no root. nullopt when there is no
/// root in (0, bound].
inline std::optional<std::pair<Rational, Rational>> isolate_smallest_positive(
    const IntPolynomial& p, const Rational& bound) {
    auto ch = sturm::chain(p);
    if (sturm::count_in(ch, Rational(0), bound) == 0) return std::nullopt;
    Rational lo(0), hi = bound;
    // Shrink towards the smallest root: keep >= 1 root in (lo, hi], none in
    // (0, lo].
    while (sturm::count_in(ch, lo, hi) > 1) {
        Rational mid = (lo + hi) / 2;
        if (sturm::count_in(ch, lo, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    // One root left: narrow by sign bisection (simple root, so signs differ
    // once the bracket is tight). Until then keep using Sturm counts.
    const Rational width_goal = Rational(1) / (BigInt(1) << 117);
    while (hi - lo > width_goal) {
        Rational mid = (lo + hi) / 2;
        Rational v = eval(p, mid);
        if (v == 0) {  // exact rational root: pin a tiny sign-change bracket
            Rational eps = Rational(1) / (BigInt(1) << 130);
            return std::make_pair(mid - eps, mid + eps);
        }
        if (sturm::count_in(ch, lo, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return std::make_pair(lo, hi);
}

}  // namespace detail

/// Smallest positive real root of den (den(0) = 1) in (0, 1], certified by
/// Sturm counts, polished by Newton to the working float precision, and
/// cross-checked against the full complex root set for smallest modulus.
std::vector<RootPoint> all_roots(const IntPolynomial& p, int digits);

inline RootResult dominant_real_root(const IntPolynomial& den,
                                     std::optional<int> ell = std::nullopt,
                                     bool check_modulus = true) {
    if (den.coeff(0) != 1)
        throw UsageError("roots", "dominant_real_root",
                         "denominator constant term must be 1");
    IntPolynomial sf = squarefree_part(den);
    auto bracket = detail::isolate_smallest_positive(sf, Rational(1));
    if (!bracket)
        throw UsageError("roots", "dominant_real_root",
                         "no positive real root in (0,1]");
    auto [lo, hi] = *bracket;

    BigFloat x = static_cast<BigFloat>(Rational((lo + hi) / 2));
    for (int it = 0; it < 8; ++it) {
        BigFloat f = eval(sf, x);
        BigFloat fp = eval(derivative(sf), x);
        if (fp == 0) break;
        x -= f / fp;
    }

    if (check_modulus) {
        BigFloat min_abs(-1);
        for (const auto& r : all_roots(sf, 40)) {
            BigFloat a = abs(r.z);
            if (min_abs < 0 || a < min_abs) min_abs = a;
        }
        if (abs(min_abs - x) > BigFloat("1e-25"))
            throw ConsistencyError("roots", "dominant_real_root",
                                   "a smaller-modulus root exists",
                                   "min modulus " + fmt_bigfloat(min_abs, 20));
    }

    RootResult out;
    out.ell = ell;
    out.x_c = x;
    out.lo = lo;
    out.hi = hi;
    return out;
}

namespace detail {

/// Aberth-Ehrlich simultaneous iteration on a squarefree polynomial with
/// q(0) != 0. Deterministic start on a Cauchy-radius circle with a fixed
/// angular offset; immediate (Gauss-Seidel) updates.
inline std::vector<BigComplex> aberth(const IntPolynomial& q, int digits,
                                      int max_iter, BigFloat& worst_residual) {
    int d = q.degree();
    IntPolynomial dq = derivative(q);
    std::vector<BigComplex> z(static_cast<std::size_t>(d));
    BigFloat radius(1);
    BigFloat lead = abs(static_cast<BigFloat>(q.leading()));
    for (int i = 0; i < d; ++i) {
        BigFloat m = abs(static_cast<BigFloat>(q.coeff(i))) / lead;
        if (1 + m > radius) radius = 1 + m;
    }
    const BigFloat two_pi = 8 * atan(BigFloat(1));
    for (int j = 0; j < d; ++j) {
        BigFloat theta = two_pi * (BigFloat(j) + BigFloat("0.354")) / d;
        z[static_cast<std::size_t>(j)] =
            BigComplex(radius * cos(theta), radius * sin(theta));
    }

    const BigFloat tol = pow(BigFloat(10), -digits);
    for (int it = 0; it < max_iter; ++it) {
        BigFloat max_step(0);
        for (int j = 0; j < d; ++j) {
            BigComplex& zj = z[static_cast<std::size_t>(j)];
            BigComplex f = eval(q, zj);
            BigComplex fp = eval(dq, zj);
            if (abs(f) == 0) continue;
            if (abs(fp) == 0) {  // saddle start: nudge deterministically
                zj += BigComplex(tol + BigFloat("1e-3"), BigFloat("1e-3"));
                max_step = 1;
                continue;
            }
            BigComplex w = f / fp;
            BigComplex s(0);
            for (int k = 0; k < d; ++k)
                if (k != j) s += BigComplex(1) / (zj - z[static_cast<std::size_t>(k)]);
            BigComplex denom = BigComplex(1) - w * s;
            BigComplex step = abs(denom) == 0 ? w : w / denom;
            zj -= step;
            BigFloat rel = abs(step) / (1 + abs(zj));
            if (rel > max_step) max_step = rel;
        }
        if (max_step <= tol) break;
    }

    // Conjugate symmetrisation: real coefficients force mirror symmetry.
    BigFloat im_tol = pow(BigFloat(10), -(digits - 5));
    std::vector<bool> done(static_cast<std::size_t>(d), false);
    for (int j = 0; j < d; ++j) {
        auto& zj = z[static_cast<std::size_t>(j)];
        if (done[static_cast<std::size_t>(j)]) continue;
        if (abs(zj.imag()) <= im_tol * (1 + abs(zj))) {
            zj = BigComplex(zj.real(), BigFloat(0));
            done[static_cast<std::size_t>(j)] = true;
            continue;
        }
        int best = -1;
        BigFloat best_dist(0);
        for (int k = j + 1; k < d; ++k) {
            if (done[static_cast<std::size_t>(k)]) continue;
            BigFloat dist = abs(conj(z[static_cast<std::size_t>(k)]) - zj);
            if (best < 0 || dist < best_dist) {
                best = k;
                best_dist = dist;
            }
        }
        if (best >= 0) {
            BigComplex w = (zj + conj(z[static_cast<std::size_t>(best)])) /
                           BigComplex(2);
            zj = w;
            z[static_cast<std::size_t>(best)] = conj(w);
            done[static_cast<std::size_t>(j)] = true;
            done[static_cast<std::size_t>(best)] = true;
        }
    }

    // Relative residuals.
    worst_residual = 0;
    for (int j = 0; j < d; ++j) {
        const auto& zj = z[static_cast<std::size_t>(j)];
        BigFloat scale(0), pw(1);
        BigFloat az = abs(zj);
        BigFloat base = az > 1 ? az : BigFloat(1);
        for (int i = 0; i <= d; ++i) {
            scale += abs(static_cast<BigFloat>(q.coeff(i))) * pw;
            pw *= base;
        }
        BigFloat res = abs(eval(q, zj)) / scale;
        if (res > worst_residual) worst_residual = res;
    }
    return z;
}

/// Squarefree decomposition (Musser's repeated-gcd scheme): returns
/// (factor, multiplicity) pairs, factors primitive with degree >= 1; the
/// product of factor^multiplicity reproduces p up to a constant.
inline std::vector<std::pair<IntPolynomial, int>> squarefree_factors(
    IntPolynomial p) {
    std::vector<std::pair<IntPolynomial, int>> out;
    p = primitive_part(p);
    IntPolynomial g = gcd_primitive(p, derivative(p));
    if (g.degree() == 0) {
        out.emplace_back(p, 1);
        return out;
    }
    auto c0 = divide_exact(p, g);
    if (!c0)
        throw ConsistencyError("roots", "squarefree_factors",
                               "gcd does not divide");
    IntPolynomial c = primitive_part(*c0);  // product of distinct factors
    int cap = p.degree() + 1;
    for (int k = 1; c.degree() >= 1; ++k) {
        if (k > cap)
            throw ConsistencyError("roots", "squarefree_factors",
                                   "decomposition does not terminate");
        IntPolynomial w = gcd_primitive(c, g);  // factors of multiplicity > k
        auto fk = divide_exact(c, w);
        if (!fk)
            throw ConsistencyError("roots", "squarefree_factors",
                                   "cofactor does not divide");
        if (fk->degree() >= 1) out.emplace_back(primitive_part(*fk), k);
        if (g.degree() >= 1 && w.degree() >= 1) {
            auto gg = divide_exact(g, w);
            if (!gg)
                throw ConsistencyError("roots", "squarefree_factors",
                                       "gcd chain does not divide");
            g = primitive_part(*gg);
        }
        c = std::move(w);
    }
    return out;
}

}  // namespace detail

/// All complex roots of p with multiplicities, via Aberth iteration on each
/// squarefree factor. digits controls the convergence tolerance (must leave
/// headroom inside the fixed working precision). Roots are sorted by real
/// part, then imaginary part.
inline std::vector<RootPoint> all_roots(const IntPolynomial& p, int digits = 50) {
    if (p.degree() < 1) throw UsageError("roots", "all_roots", "degree < 1");
    if (digits < 5 || digits > 80)
        throw UsageError("roots", "all_roots", "digits out of range [5,80]");

    IntPolynomial q = p;
    int zero_mult = 0;
    while (!q.c.empty() && q.c.front() == 0) {
        q.c.erase(q.c.begin());
        ++zero_mult;
    }

    std::vector<RootPoint> out;
    if (zero_mult > 0)
        out.push_back({BigComplex(0), zero_mult, BigFloat(0)});

    if (q.degree() >= 1) {
        for (auto& [factor, mult] : detail::squarefree_factors(q)) {
            if (factor.degree() == 1) {
                Rational root = Rational(-factor.coeff(0)) / Rational(factor.coeff(1));
                out.push_back(
                    {BigComplex(static_cast<BigFloat>(root)), mult, BigFloat(0)});
                continue;
            }
            BigFloat worst(0);
            auto roots = detail::aberth(factor, digits, 600, worst);
            if (worst > pow(BigFloat(10), -(digits - 10)))
                throw ConsistencyError(
                    "roots", "all_roots", "iteration did not converge",
                    "worst residual " + fmt_bigfloat(worst, 10));
            for (const auto& z : roots) out.push_back({z, mult, worst});
        }
    }

    std::sort(out.begin(), out.end(), [](const RootPoint& a, const RootPoint& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return out;
}

/// Poles and zeros of a reduced rational generating function, with the
/// fraction of pole mass near the unit circle.
inline PoleSet pole_zero_report(const RationalGF& gf, int digits = 50) {
    PoleSet out;
    out.ell = gf.ell;
    out.poles = all_roots(gf.den, digits);
    if (gf.num.degree() >= 1) out.zeros = all_roots(gf.num, digits);

    int total = 0, near = 0;
    for (const auto& r : out.poles) {
        total += r.multiplicity;
        if (abs(abs(r.z) - 1) <= BigFloat(1) / 10) near += r.multiplicity;
    }
    if (total != gf.d_den)
        throw ConsistencyError("roots", "pole_zero_report",
                               "pole count does not match denominator degree",
                               std::to_string(total) + " vs " +
                                   std::to_string(gf.d_den));
    out.near_unit_fraction = total > 0 ? Rational(near, total) : Rational(0);
    return out;
}

}  // namespace sqfree
