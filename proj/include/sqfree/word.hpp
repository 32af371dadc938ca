#pragma once

// Ternary words and the square tests everything else is built on.
//
// Symbols are 0/1/2 internally and render as a/b/c. Word packs 2 bits per
// symbol; up to 64 symbols live inline, longer words spill to the heap
// transparently (substitution images of long inputs need this).

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "sqfree/common.hpp"

namespace sqfree {

using Symbol = std::uint8_t;  // 0, 1, 2
inline constexpr int kAlphabet = 3;

inline char symbol_char(Symbol s) { return static_cast<char>('a' + s); }

class Word {
public:
    Word() = default;

    static Word from_string(std::string_view text) {
        Word w;
        for (char c : text) {
            if (c < 'a' || c > 'c')
                throw UsageError("word", "from_string", "symbol outside a..c",
                                 std::string(text));
            w.push_back(static_cast<Symbol>(c - 'a'));
        }
        return w;
    }

    static Word from_symbols(std::span<const Symbol> syms) {
        Word w;
        for (Symbol s : syms) w.push_back(s);
        return w;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    Symbol operator[](std::size_t i) const {
        return static_cast<Symbol>((blocks_[i >> 5] >> ((i & 31) * 2)) & 3u);
    }

    void push_back(Symbol s) {
        std::size_t block = size_ >> 5, off = (size_ & 31) * 2;
        if (block == blocks_.size()) blocks_.push_back(0);
        blocks_[block] |= static_cast<std::uint64_t>(s & 3u) << off;
        ++size_;
    }

    void pop_back() {
        --size_;
        std::size_t block = size_ >> 5, off = (size_ & 31) * 2;
        blocks_[block] &= ~(std::uint64_t{3} << off);
        if (block + 1 < blocks_.size()) blocks_.pop_back();
    }

    void append(const Word& other) {
        for (std::size_t i = 0; i < other.size_; ++i) push_back(other[i]);
    }

    std::string str() const {
        std::string s;
        s.reserve(size_);
        for (std::size_t i = 0; i < size_; ++i) s.push_back(symbol_char((*this)[i]));
        return s;
    }

    std::vector<Symbol> symbols() const {
        std::vector<Symbol> out(size_);
        for (std::size_t i = 0; i < size_; ++i) out[i] = (*this)[i];
        return out;
    }

    friend bool operator==(const Word& a, const Word& b) {
        return a.size_ == b.size_ &&
               std::equal(a.blocks_.begin(), a.blocks_.end(), b.blocks_.begin());
    }

    /// Lexicographic by symbols, shorter prefix first.
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        std::size_t n = std::min(a.size_, b.size_);
        for (std::size_t i = 0; i < n; ++i)
            if (auto c = a[i] <=> b[i]; c != 0) return c;
        return a.size_ <=> b.size_;
    }

private:
    std::uint32_t size_ = 0;
    boost::container::small_vector<std::uint64_t, 2> blocks_;
};

/// Permutation of the three letters; the group S_3.
class LetterPermutation {
public:
    constexpr LetterPermutation() : map_{0, 1, 2} {}
    constexpr explicit LetterPermutation(std::array<Symbol, 3> map) : map_(map) {}

    constexpr Symbol operator()(Symbol s) const { return map_[s]; }

    /// (a·b)(x) = a(b(x))
    constexpr LetterPermutation after(const LetterPermutation& inner) const {
        return LetterPermutation({map_[inner.map_[0]], map_[inner.map_[1]],
                                  map_[inner.map_[2]]});
    }

    constexpr LetterPermutation inverse() const {
        std::array<Symbol, 3> inv{};
        for (Symbol i = 0; i < 3; ++i) inv[map_[i]] = i;
        return LetterPermutation(inv);
    }

    static constexpr LetterPermutation identity() { return LetterPermutation(); }

    /// The cyclic shift a -> b -> c -> a.
    static constexpr LetterPermutation sigma() {
        return LetterPermutation({1, 2, 0});
    }

    /// All six elements, identity first, fixed enumeration order.
    static const std::array<LetterPermutation, 6>& all() {
        static const std::array<LetterPermutation, 6> elems = {
            LetterPermutation({0, 1, 2}), LetterPermutation({0, 2, 1}),
            LetterPermutation({1, 0, 2}), LetterPermutation({1, 2, 0}),
            LetterPermutation({2, 0, 1}), LetterPermutation({2, 1, 0})};
        return elems;
    }

    friend bool operator==(const LetterPermutation&, const LetterPermutation&) = default;

private:
    std::array<Symbol, 3> map_;
};

/// Does the word held in `w` end in a square yy with 1 <= |y| <= max_period?
/// Span overload: the enumeration hot path works on raw symbol buffers.
inline bool has_square_suffix(std::span<const Symbol> w, std::size_t max_period) {
    std::size_t n = w.size();
    std::size_t pmax = std::min(max_period, n / 2);
    for (std::size_t p = 1; p <= pmax; ++p) {
        const Symbol* one = w.data() + n - p;
        const Symbol* two = w.data() + n - 2 * p;
        std::size_t i = p;
        while (i != 0 && one[i - 1] == two[i - 1]) --i;
        if (i == 0) return true;
    }
    return false;
}

inline bool has_square_suffix(const Word& w, std::size_t max_period) {
    auto syms = w.symbols();
    return has_square_suffix(std::span<const Symbol>(syms), max_period);
}

/// No factor yy with |y| <= ell anywhere. ell = 0 accepts everything.
inline bool is_length_l_square_free(std::span<const Symbol> w, std::size_t ell) {
    for (std::size_t i = 2; i <= w.size(); ++i)
        if (has_square_suffix(w.first(i), std::min(ell, i / 2))) return false;
    return true;
}

inline bool is_length_l_square_free(const Word& w, std::size_t ell) {
    auto syms = w.symbols();
    return is_length_l_square_free(std::span<const Symbol>(syms), ell);
}

/// No square factor of any period.
inline bool is_square_free(std::span<const Symbol> w) {
    return is_length_l_square_free(w, w.size() / 2);
}

inline bool is_square_free(const Word& w) {
    auto syms = w.symbols();
    return is_square_free(std::span<const Symbol>(syms));
}

inline Word permute(const Word& w, const LetterPermutation& pi) {
    Word out;
    for (std::size_t i = 0; i < w.size(); ++i) out.push_back(pi(w[i]));
    return out;
}

inline Word reverse(const Word& w) {
    Word out;
    for (std::size_t i = w.size(); i != 0; --i) out.push_back(w[i - 1]);
    return out;
}

/// Occurrence counts (n_a, n_b, n_c).
inline std::array<std::uint64_t, 3> letter_counts(const Word& w) {
    std::array<std::uint64_t, 3> c{0, 0, 0};
    for (std::size_t i = 0; i < w.size(); ++i) ++c[w[i]];
    return c;
}

}  // namespace sqfree
