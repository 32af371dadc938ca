#pragma once

// Exact counting and enumeration of (length-limited) square-free words by
// depth-first backtracking.
//
// Counts come out exact: every visited node increments one per-length
// counter once, and the shared node budget (RunConfig::node_budget) bounds
// total increments well below 2^63, so plain uint64 accumulators per worker
// are safe; results are widened to BigInt on merge. Work is split over the
// square-free prefixes of a configurable depth; merging is by slot index,
// so results never depend on thread scheduling.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <vector>

#include "sqfree/common.hpp"
#include "sqfree/numeric.hpp"
#include "sqfree/word.hpp"

namespace sqfree {

/// Counts s_n (or s_n^(ell)) for n = 0..n_max; ell == nullopt means fully
/// square-free.
struct CountSeries {
    std::optional<int> ell;
    std::vector<BigInt> values;

    int n_max() const { return static_cast<int>(values.size()) - 1; }
};

/// Square-free counts split by occurrences of the letter 'a':
/// rows[n][k] = number of square-free words of length n with exactly k a's.
struct CountTable {
    std::vector<std::vector<BigInt>> rows;

    int n_max() const { return static_cast<int>(rows.size()) - 1; }

    const BigInt& at(int n, int k) const {
        static const BigInt zero{0};
        if (n < 0 || n > n_max() || k < 0 ||
            k >= static_cast<int>(rows[static_cast<std::size_t>(n)].size()))
            return zero;
        return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }

    BigInt row_sum(int n) const {
        BigInt s = 0;
        for (const auto& v : rows[static_cast<std::size_t>(n)]) s += v;
        return s;
    }
};

/// Shortest and longest square-free words containing exactly k letters 'a'.
/// n_max is empty when the search was truncated before proving a maximum.
struct FrequencyExtent {
    int k = 0;
    int n_min = 0;
    std::optional<int> n_max;
    Word witness_min, witness_max;
    std::optional<Rational> freq_lower;  // k / n_max
    std::optional<Rational> freq_upper;  // k / n_min
};

namespace detail {

struct BudgetHit {};

/// Batches node charges against the shared budget.
class NodeMeter {
public:
    explicit NodeMeter(WorkBudget& budget) : budget_(budget) {}

    void tick() {
        if (++local_ == kFlushEvery) flush();
    }

    void flush() {
        if (local_ != 0) {
            bool ok = budget_.charge(local_);
            local_ = 0;
            if (!ok) throw BudgetHit{};
        } else if (budget_.exceeded()) {
            throw BudgetHit{};
        }
    }

private:
    static constexpr std::uint64_t kFlushEvery = 8192;
    WorkBudget& budget_;
    std::uint64_t local_ = 0;
};

inline constexpr std::size_t kNoPeriodCap = std::numeric_limits<std::size_t>::max();
inline constexpr Symbol kAnyFirst = 3;

/// DFS over valid extensions of `st`. `sink(st, letter_counts)` fires once
/// per visited node, in lexicographic order of the words.
template <class Sink>
void walk(std::vector<Symbol>& st, std::array<std::uint32_t, 3>& cnt, int n_max,
          std::size_t period_cap, std::uint32_t max_a, Symbol first_only,
          NodeMeter& meter, Sink& sink) {
    if (static_cast<int>(st.size()) >= n_max) return;
    for (Symbol sym = 0; sym < kAlphabet; ++sym) {
        if (st.empty() && first_only != kAnyFirst && sym != first_only) continue;
        if (sym == 0 && cnt[0] >= max_a) continue;
        st.push_back(sym);
        std::size_t i = st.size();
        if (!has_square_suffix(std::span<const Symbol>(st.data(), i),
                               std::min(period_cap, i / 2))) {
            meter.tick();
            ++cnt[sym];
            sink(st, cnt);
            walk(st, cnt, n_max, period_cap, max_a, first_only, meter, sink);
            --cnt[sym];
        }
        st.pop_back();
    }
}

/// Serial walk to `split_depth` (sinking every node), collecting the words
/// of exactly that length as roots for the parallel phase.
template <class Sink>
std::vector<std::vector<Symbol>> walk_prefixes(int split_depth, std::size_t period_cap,
                                               std::uint32_t max_a, Symbol first_only,
                                               NodeMeter& meter, Sink& sink) {
    std::vector<std::vector<Symbol>> prefixes;
    std::vector<Symbol> st;
    std::array<std::uint32_t, 3> cnt{0, 0, 0};
    auto collecting = [&](const std::vector<Symbol>& w,
                          const std::array<std::uint32_t, 3>& c) {
        sink(w, c);
        if (static_cast<int>(w.size()) == split_depth) prefixes.push_back(w);
    };
    walk(st, cnt, split_depth, period_cap, max_a, first_only, meter, collecting);
    return prefixes;
}

/// Parallel traversal of all valid words of length 1..n_max. Each word is
/// delivered exactly once: lengths up to the split depth go to slot 0
/// (serial), extensions of the i-th prefix go to slot i+1. make_sink(slot)
/// must hand out an independent accumulator per slot; the caller merges
/// them in slot order afterwards.
template <class MakeSink>
void traverse(int n_max, std::size_t period_cap, std::uint32_t max_a,
              Symbol first_only, const RunConfig& cfg, const char* op,
              MakeSink&& make_sink) {
    WorkBudget budget(cfg.node_budget);
    int split = std::min(cfg.prefix_depth, n_max);
    std::vector<std::vector<Symbol>> prefixes;
    try {
        NodeMeter meter(budget);
        auto sink0 = make_sink(std::size_t{0});
        prefixes = walk_prefixes(split, period_cap, max_a, first_only, meter, sink0);
        meter.flush();
    } catch (BudgetHit&) {
        budget.raise("enumerate", op);
    }
    if (split >= n_max) return;
    try {
        parallel_for(prefixes.size(), cfg.effective_threads(), [&](std::size_t i) {
            NodeMeter meter(budget);
            auto sink = make_sink(i + 1);
            std::vector<Symbol> st = prefixes[i];
            std::array<std::uint32_t, 3> cnt{0, 0, 0};
            for (Symbol s : st) ++cnt[s];
            walk(st, cnt, n_max, period_cap, max_a, first_only, meter, sink);
            meter.flush();
        });
    } catch (BudgetHit&) {
        budget.raise("enumerate", op);
    }
}

/// Slot store with stable element addresses (deque never moves elements).
template <class T>
class Slots {
public:
    explicit Slots(T blank) : blank_(std::move(blank)) {}

    T* get(std::size_t slot) {
        std::lock_guard<std::mutex> lk(mu_);
        while (items_.size() <= slot) items_.push_back(blank_);
        return &items_[slot];
    }

    const std::deque<T>& all() const { return items_; }

private:
    T blank_;
    std::mutex mu_;
    std::deque<T> items_;
};

}  // namespace detail

/// s_n for n = 0..n_max. Counts words starting with 'a' and multiplies by 3
/// (letter permutations act freely on nonempty square-free words).
inline CountSeries count_square_free(int n_max,
                                     const RunConfig& cfg = default_config()) {
    if (n_max < 0)
        throw UsageError("enumerate", "count_square_free", "negative n_max");
    detail::Slots<std::vector<std::uint64_t>> slots(
        std::vector<std::uint64_t>(static_cast<std::size_t>(n_max) + 1, 0));
    detail::traverse(
        n_max, detail::kNoPeriodCap, std::numeric_limits<std::uint32_t>::max(),
        Symbol{0}, cfg, "count_square_free", [&](std::size_t slot) {
            auto* mine = slots.get(slot);
            return [mine](const std::vector<Symbol>& w,
                          const std::array<std::uint32_t, 3>&) {
                ++(*mine)[w.size()];
            };
        });
    CountSeries out;
    out.values.assign(static_cast<std::size_t>(n_max) + 1, BigInt(0));
    out.values[0] = 1;
    for (const auto& part : slots.all())
        for (std::size_t n = 1; n < part.size(); ++n)
            out.values[n] += 3 * BigInt(part[n]);
    return out;
}

/// s_n^(ell) for n = 0..n_max: words with no square of period <= ell.
inline CountSeries count_lsf(int ell, int n_max,
                             const RunConfig& cfg = default_config()) {
    if (ell < 0) throw UsageError("enumerate", "count_lsf", "negative ell");
    if (n_max < 0) throw UsageError("enumerate", "count_lsf", "negative n_max");
    detail::Slots<std::vector<std::uint64_t>> slots(
        std::vector<std::uint64_t>(static_cast<std::size_t>(n_max) + 1, 0));
    detail::traverse(
        n_max, static_cast<std::size_t>(ell),
        std::numeric_limits<std::uint32_t>::max(), Symbol{0}, cfg, "count_lsf",
        [&](std::size_t slot) {
            auto* mine = slots.get(slot);
            return [mine](const std::vector<Symbol>& w,
                          const std::array<std::uint32_t, 3>&) {
                ++(*mine)[w.size()];
            };
        });
    CountSeries out;
    out.ell = ell;
    out.values.assign(static_cast<std::size_t>(n_max) + 1, BigInt(0));
    out.values[0] = 1;
    for (const auto& part : slots.all())
        for (std::size_t n = 1; n < part.size(); ++n)
            out.values[n] += 3 * BigInt(part[n]);
    return out;
}

/// Triangle s_{n,k}: square-free words of length n with exactly k 'a's.
/// Enumerates all first letters directly (the split by k is not symmetric
/// under the three-fold first-letter shortcut).
inline CountTable count_by_letter(int n_max,
                                  const RunConfig& cfg = default_config()) {
    if (n_max < 0)
        throw UsageError("enumerate", "count_by_letter", "negative n_max");
    using Tri = std::vector<std::vector<std::uint64_t>>;
    Tri blank(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        blank[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n) + 1, 0);
    detail::Slots<Tri> slots(blank);
    detail::traverse(
        n_max, detail::kNoPeriodCap, std::numeric_limits<std::uint32_t>::max(),
        detail::kAnyFirst, cfg, "count_by_letter", [&](std::size_t slot) {
            auto* mine = slots.get(slot);
            return [mine](const std::vector<Symbol>& w,
                          const std::array<std::uint32_t, 3>& cnt) {
                ++(*mine)[w.size()][cnt[0]];
            };
        });
    CountTable out;
    out.rows.resize(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        out.rows[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n) + 1,
                                                     BigInt(0));
    out.rows[0][0] = 1;
    for (const auto& part : slots.all())
        for (std::size_t n = 1; n < part.size(); ++n)
            for (std::size_t k = 0; k < part[n].size(); ++k)
                out.rows[n][k] += BigInt(part[n][k]);
    return out;
}

/// Streams every square-free word of length exactly n, lexicographically.
inline void for_each_square_free(
    int n, const std::function<void(const Word&)>& visit,
    const RunConfig& cfg = default_config()) {
    if (n < 0) throw UsageError("enumerate", "for_each_square_free", "negative n");
    if (n == 0) {
        visit(Word{});
        return;
    }
    WorkBudget budget(cfg.node_budget);
    std::vector<Symbol> st;
    std::array<std::uint32_t, 3> cnt{0, 0, 0};
    detail::NodeMeter meter(budget);
    auto sink = [&](const std::vector<Symbol>& w, const std::array<std::uint32_t, 3>&) {
        if (static_cast<int>(w.size()) == n)
            visit(Word::from_symbols(std::span<const Symbol>(w.data(), w.size())));
    };
    try {
        detail::walk(st, cnt, n, detail::kNoPeriodCap,
                     std::numeric_limits<std::uint32_t>::max(), detail::kAnyFirst,
                     meter, sink);
        meter.flush();
    } catch (detail::BudgetHit&) {
        budget.raise("enumerate", "for_each_square_free");
    }
}

/// All square-free words of length n, lexicographic.
inline std::vector<Word> enumerate_words(int n,
                                         const RunConfig& cfg = default_config()) {
    std::vector<Word> out;
    for_each_square_free(n, [&](const Word& w) { out.push_back(w); }, cfg);
    return out;
}

/// Extremal lengths of square-free words with exactly k letters 'a', by
/// exhaustive DFS over words with at most k 'a's. Any such word has length
/// at most 4k+3 (a square-free word over {b,c} has length at most 3), so
/// the default search bound is never reached and the maximum is proven; a
/// caller-supplied smaller bound may leave n_max unknown.
inline FrequencyExtent letter_extent(int k, int search_bound = -1,
                                     const RunConfig& cfg = default_config()) {
    if (k < 0) throw UsageError("enumerate", "letter_extent", "negative k");
    if (search_bound < 0) search_bound = 4 * k + 8;
    struct Best {
        int min_len = std::numeric_limits<int>::max();
        std::vector<Symbol> min_word;
        int max_len = -1;
        std::vector<Symbol> max_word;
        int deepest = 0;  // longest visited word of any letter count
    };
    detail::Slots<Best> slots(Best{});
    detail::traverse(
        search_bound, detail::kNoPeriodCap, static_cast<std::uint32_t>(k),
        detail::kAnyFirst, cfg, "letter_extent", [&](std::size_t slot) {
            Best* mine = slots.get(slot);
            auto kk = static_cast<std::uint32_t>(k);
            return [mine, kk](const std::vector<Symbol>& w,
                              const std::array<std::uint32_t, 3>& cnt) {
                int len = static_cast<int>(w.size());
                mine->deepest = std::max(mine->deepest, len);
                if (cnt[0] != kk) return;
                if (len < mine->min_len) {
                    mine->min_len = len;
                    mine->min_word = w;
                }
                if (len > mine->max_len) {
                    mine->max_len = len;
                    mine->max_word = w;
                }
            };
        });
    Best best;
    if (k == 0) {  // the empty word has zero 'a's; DFS nodes start at length 1
        best.min_len = 0;
        best.min_word.clear();
    }
    for (const auto& b : slots.all()) {  // slot order = prefix order: lex-stable
        best.deepest = std::max(best.deepest, b.deepest);
        if (b.min_len < best.min_len) {
            best.min_len = b.min_len;
            best.min_word = b.min_word;
        }
        if (b.max_len > best.max_len) {
            best.max_len = b.max_len;
            best.max_word = b.max_word;
        }
    }
    if (best.min_len == std::numeric_limits<int>::max())
        throw ConsistencyError("enumerate", "letter_extent",
                               "no witness within search bound",
                               "k=" + std::to_string(k));
    FrequencyExtent out;
    out.k = k;
    out.n_min = best.min_len;
    out.witness_min = Word::from_symbols(
        std::span<const Symbol>(best.min_word.data(), best.min_word.size()));
    bool proven = best.deepest < search_bound;
    if (proven) {
        out.n_max = best.max_len;
        out.witness_max = Word::from_symbols(
            std::span<const Symbol>(best.max_word.data(), best.max_word.size()));
        out.freq_lower = k > 0 ? Rational(k, *out.n_max) : Rational(0);
    }
    if (k > 0) out.freq_upper = Rational(k, out.n_min);
    return out;
}

}  // namespace sqfree
