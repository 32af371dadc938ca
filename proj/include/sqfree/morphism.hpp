#pragma once

// Substitution systems on the three-letter alphabet: triples of image lists
// (one list per letter, a uniform number k of images of uniform length m),
// their letter-count matrices, exact Perron-Frobenius letter frequencies,
// and bounded verification that substitution preserves square-freeness.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqfree/common.hpp"
#include "sqfree/enumerate.hpp"
#include "sqfree/linalg.hpp"
#include "sqfree/numeric.hpp"
#include "sqfree/word.hpp"

namespace sqfree {

/// Per-letter lists of substitution images. Invariants (enforced by
/// make_triple): k >= 1 images per letter, every image square-free and of
/// length exactly m.
struct SubstitutionTriple {
    std::array<std::vector<Word>, 3> images;
    int m = 0;
    int k = 0;
};

inline SubstitutionTriple make_triple(std::vector<Word> images_a,
                                      std::vector<Word> images_b,
                                      std::vector<Word> images_c) {
    SubstitutionTriple t;
    t.images = {std::move(images_a), std::move(images_b), std::move(images_c)};
    if (t.images[0].empty() || t.images[1].empty() || t.images[2].empty())
        throw UsageError("morphism", "make_triple", "empty image list");
    t.k = static_cast<int>(t.images[0].size());
    for (int x = 1; x < 3; ++x)
        if (static_cast<int>(t.images[static_cast<std::size_t>(x)].size()) != t.k)
            throw UsageError("morphism", "make_triple", "image lists differ in size",
                             std::string(1, symbol_char(static_cast<Symbol>(x))));
    t.m = static_cast<int>(t.images[0][0].size());
    if (t.m < 1) throw UsageError("morphism", "make_triple", "empty image word");
    for (int x = 0; x < 3; ++x)
        for (int j = 0; j < t.k; ++j) {
            const Word& w = t.images[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)];
            if (static_cast<int>(w.size()) != t.m)
                throw UsageError("morphism", "make_triple", "image lengths differ",
                                 w.str());
            if (!is_square_free(w))
                throw UsageError("morphism", "make_triple", "image contains a square",
                                 w.str());
        }
    return t;
}

/// entry[y][x] = occurrences of letter y in each image of letter x.
/// Every column sums to m.
struct SubstitutionMatrix {
    std::array<std::array<std::int64_t, 3>, 3> entry{};
    int m = 0;

    std::int64_t operator()(int y, int x) const {
        return entry[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
    }
    friend bool operator==(const SubstitutionMatrix&, const SubstitutionMatrix&) = default;
};

/// The shared letter-count vector of each image list; all k images of a
/// letter must agree, else the offending pair is reported.
inline std::array<std::array<std::uint64_t, 3>, 3> require_equal_counts(
    const SubstitutionTriple& t) {
    std::array<std::array<std::uint64_t, 3>, 3> out{};
    for (int x = 0; x < 3; ++x) {
        const auto& list = t.images[static_cast<std::size_t>(x)];
        out[static_cast<std::size_t>(x)] = letter_counts(list[0]);
        for (std::size_t j = 1; j < list.size(); ++j)
            if (letter_counts(list[j]) != out[static_cast<std::size_t>(x)])
                throw UsageError(
                    "morphism", "require_equal_counts", "heterogeneous counts",
                    std::string("images of ") + symbol_char(static_cast<Symbol>(x)) +
                        ": #1 vs #" + std::to_string(j + 1));
    }
    return out;
}

inline SubstitutionMatrix substitution_matrix(const SubstitutionTriple& t) {
    auto counts = require_equal_counts(t);
    SubstitutionMatrix mat;
    mat.m = t.m;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            mat.entry[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] =
                static_cast<std::int64_t>(counts[static_cast<std::size_t>(x)]
                                                [static_cast<std::size_t>(y)]);
    return mat;
}

/// Exact letter frequencies: the kernel of (M - mI) normalised to sum 1,
/// where m is the common column sum. The kernel must be one-dimensional.
inline std::array<Rational, 3> pf_frequencies(const SubstitutionMatrix& mat) {
    std::int64_t m = mat(0, 0) + mat(1, 0) + mat(2, 0);
    for (int x = 1; x < 3; ++x)
        if (mat(0, x) + mat(1, x) + mat(2, x) != m)
            throw UsageError("morphism", "pf_frequencies", "column sums differ",
                             "column " + std::string(1, symbol_char(static_cast<Symbol>(x))));
    RationalMatrix a(3, std::vector<Rational>(3));
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x)
            a[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] =
                Rational(mat(y, x) - (y == x ? m : 0));
    auto basis = nullspace(a, 3);
    if (basis.size() != 1)
        throw ConsistencyError("morphism", "pf_frequencies", "degenerate eigenspace",
                               "kernel dimension " + std::to_string(basis.size()));
    Rational sum = basis[0][0] + basis[0][1] + basis[0][2];
    if (sum == 0)
        throw ConsistencyError("morphism", "pf_frequencies", "eigenvector sums to zero");
    std::array<Rational, 3> f{basis[0][0] / sum, basis[0][1] / sum, basis[0][2] / sum};
    for (const Rational& v : f)
        if (v <= 0)
            throw ConsistencyError("morphism", "pf_frequencies", "non-positive frequency");
    return f;
}

/// Growth estimate k^(1/(m-1)) attached to a verified triple. k = 1 carries
/// no growth information beyond existence of arbitrarily long words.
struct GrowthBound {
    int k = 0;
    int m = 0;
    bool existence_only = false;
    double value = 1.0;
    std::string decimal;
};

inline GrowthBound growth_bound(int k, int m) {
    if (m < 2)
        throw UsageError("morphism", "growth_bound", "undefined exponent",
                         "m = " + std::to_string(m));
    if (k < 1) throw UsageError("morphism", "growth_bound", "k must be positive");
    GrowthBound g;
    g.k = k;
    g.m = m;
    g.existence_only = (k == 1);
    g.value = std::pow(static_cast<double>(k), 1.0 / (m - 1));
    g.decimal = fmt_fixed(g.value, 5);
    return g;
}

/// First square factor of w by (end, period) order, as (start, period).
inline std::optional<std::pair<std::size_t, std::size_t>> find_square(const Word& w) {
    auto s = w.symbols();
    for (std::size_t end = 2; end <= s.size(); ++end)
        for (std::size_t p = 1; 2 * p <= end; ++p)
            if (std::equal(s.begin() + static_cast<std::ptrdiff_t>(end - 2 * p),
                           s.begin() + static_cast<std::ptrdiff_t>(end - p),
                           s.begin() + static_cast<std::ptrdiff_t>(end - p)))
                return std::make_pair(end - 2 * p, p);
    return std::nullopt;
}

/// Per-position image selection: choices[i] picks the image of w[i].
inline Word substitute(const SubstitutionTriple& t, const Word& w,
                       std::span<const int> choices) {
    if (choices.size() != w.size())
        throw UsageError("morphism", "substitute", "choice count mismatch");
    Word out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        int j = choices[i];
        if (j < 0 || j >= t.k)
            throw UsageError("morphism", "substitute", "choice out of range");
        out.append(t.images[w[i]][static_cast<std::size_t>(j)]);
    }
    return out;
}

/// Ordinary morphism application (image 0 everywhere).
inline Word substitute(const SubstitutionTriple& t, const Word& w) {
    std::vector<int> zeros(w.size(), 0);
    return substitute(t, w, zeros);
}

struct SquareWitness {
    Word input;
    std::vector<int> choices;
    Word substituted;
    std::size_t square_start = 0;
    std::size_t square_period = 0;
};

/// Outcome of the bounded check. valid = true means: every substitution of
/// every square-free input of length <= check_length is square-free. That is
/// a statement about check_length only, not about all lengths.
struct TripleCertificate {
    bool valid = false;
    int check_length = 0;
    std::optional<SquareWitness> witness;
    GrowthBound growth;
};

inline GrowthBound growth_lower_bound(const SubstitutionTriple& t) {
    return growth_bound(t.k, t.m);
}

/// Substitutes every square-free word of length 1..input_length under every
/// independent image choice and checks the results for squares. Inputs are
/// ordered by (length, lex) and choices by lex; the reported witness is the
/// first failure in that order. Work is charged per input word as
/// k^n * n * m against cfg.node_budget.
inline TripleCertificate verify_triple(const SubstitutionTriple& t,
                                       int input_length = 3,
                                       const RunConfig& cfg = default_config()) {
    if (input_length < 3)
        throw UsageError("morphism", "verify_triple", "input_length below 3");
    std::vector<Word> inputs;
    for (int n = 1; n <= input_length; ++n)
        for_each_square_free(n, [&](const Word& w) { inputs.push_back(w); }, cfg);

    struct Hit {
        std::uint64_t choice_rank = 0;
        SquareWitness wit;
    };
    std::vector<std::optional<Hit>> hits(inputs.size());
    WorkBudget budget(cfg.node_budget);
    std::atomic<std::size_t> hit_floor{inputs.size()};

    parallel_for(inputs.size(), cfg.effective_threads(), [&](std::size_t i) {
        if (i > hit_floor.load(std::memory_order_relaxed)) return;
        if (budget.exceeded()) return;
        const Word& w = inputs[i];
        std::size_t n = w.size();
        std::uint64_t cost = static_cast<std::uint64_t>(n) *
                             static_cast<std::uint64_t>(t.m);
        for (std::size_t j = 0; j < n; ++j) {
            if (cost > budget.ceiling()) break;  // saturate; charge will trip
            cost *= static_cast<std::uint64_t>(t.k);
        }
        if (!budget.charge(cost)) return;
        std::vector<int> choice(n, 0);
        std::uint64_t rank = 0;
        while (true) {
            Word sub = substitute(t, w, choice);
            if (!is_square_free(sub)) {
                auto sq = find_square(sub);
                Hit h;
                h.choice_rank = rank;
                h.wit = SquareWitness{w, choice, sub, sq->first, sq->second};
                hits[i] = std::move(h);
                std::size_t cur = hit_floor.load(std::memory_order_relaxed);
                while (i < cur &&
                       !hit_floor.compare_exchange_weak(cur, i, std::memory_order_relaxed))
                    ;
                return;
            }
            // odometer over choices, last position fastest
            std::size_t pos = n;
            while (pos > 0 && ++choice[pos - 1] == t.k) choice[--pos] = 0;
            if (pos == 0) break;
            ++rank;
        }
    });

    if (budget.exceeded()) budget.raise("morphism", "verify_triple");

    TripleCertificate cert;
    cert.check_length = input_length;
    cert.growth = growth_lower_bound(t);
    for (auto& h : hits)
        if (h) {
            cert.valid = false;
            cert.witness = std::move(h->wit);
            return cert;
        }
    cert.valid = true;
    return cert;
}

/// Builds a triple from per-letter generator words: images of 'a' are the
/// generators (plus their reversals when requested), images of 'b' and 'c'
/// apply the letter cycle once and twice respectively.
inline SubstitutionTriple build_sigma_triple(const std::vector<Word>& gen_a,
                                             const std::vector<Word>& gen_b,
                                             const std::vector<Word>& gen_c,
                                             bool with_reversals = true) {
    if (gen_a.empty() || gen_a.size() != gen_b.size() || gen_a.size() != gen_c.size())
        throw UsageError("morphism", "build_sigma_triple", "generator lists differ in size");
    std::size_t len = gen_a[0].size();
    for (const auto* gens : {&gen_a, &gen_b, &gen_c})
        for (const Word& g : *gens)
            if (g.size() != len)
                throw UsageError("morphism", "build_sigma_triple", "length mismatch",
                                 g.str());
    auto expand = [&](const std::vector<Word>& gens) {
        std::vector<Word> out;
        for (const Word& g : gens) {
            out.push_back(g);
            if (with_reversals) out.push_back(reverse(g));
        }
        return out;
    };
    LetterPermutation s = LetterPermutation::sigma();
    LetterPermutation s2 = s.after(s);
    std::vector<Word> a = expand(gen_a);
    std::vector<Word> b = expand(gen_b);
    std::vector<Word> c = expand(gen_c);
    for (Word& w : b) w = permute(w, s);
    for (Word& w : c) w = permute(w, s2);
    return make_triple(std::move(a), std::move(b), std::move(c));
}

}  // namespace sqfree
