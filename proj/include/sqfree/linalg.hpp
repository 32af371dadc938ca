#pragma once

// Small exact linear algebra over the rationals: reduced row echelon form,
// unique solve, and nullspace bases. Pivoting picks the first nonzero entry,
// so results are deterministic; there is no rounding anywhere.

#include <optional>
#include <vector>

#include "sqfree/numeric.hpp"

namespace sqfree {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// In-place reduced row echelon form. Returns the pivot column of each pivot
/// row, in order.
inline std::vector<int> rref(RationalMatrix& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    int rows = static_cast<int>(m.size());
    int cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int col = 0; col < cols && r < rows; ++col) {
        int sel = -1;
        for (int i = r; i < rows; ++i)
            if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[static_cast<std::size_t>(sel)], m[static_cast<std::size_t>(r)]);
        auto& row = m[static_cast<std::size_t>(r)];
        Rational inv = row[static_cast<std::size_t>(col)];
        for (auto& v : row) v /= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            Rational f = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int j = col; j < cols; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    f * row[static_cast<std::size_t>(j)];
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

/// Unique solution of A x = b; nullopt when A is singular or the system is
/// inconsistent or underdetermined.
inline std::optional<std::vector<Rational>> solve_unique(RationalMatrix a,
                                                         std::vector<Rational> b) {
    if (a.empty()) return std::nullopt;
    std::size_t cols = a[0].size();
    for (std::size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
    auto pivots = rref(a);
    std::vector<Rational> x(cols, Rational(0));
    std::size_t seen = 0;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == static_cast<int>(cols)) return std::nullopt;  // 0 = 1 row
        ++seen;
        x[static_cast<std::size_t>(pivots[r])] = a[r].back();
    }
    if (seen != cols) return std::nullopt;
    return x;
}

/// Basis of the right nullspace of m (with `cols` columns), one vector per
/// free column in ascending column order; each vector has 1 in its free
/// position.
inline std::vector<std::vector<Rational>> nullspace(RationalMatrix m, int cols) {
    std::vector<std::vector<Rational>> basis;
    if (m.empty()) {
        for (int j = 0; j < cols; ++j) {
            std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
            v[static_cast<std::size_t>(j)] = 1;
            basis.push_back(std::move(v));
        }
        return basis;
    }
    auto pivots = rref(m);
    std::vector<int> pivot_of_col(static_cast<std::size_t>(cols), -1);
    for (std::size_t r = 0; r < pivots.size(); ++r)
        pivot_of_col[static_cast<std::size_t>(pivots[r])] = static_cast<int>(r);
    for (int j = 0; j < cols; ++j) {
        if (pivot_of_col[static_cast<std::size_t>(j)] >= 0) continue;
        std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
        v[static_cast<std::size_t>(j)] = 1;
        for (int col = 0; col < cols; ++col) {
            int r = pivot_of_col[static_cast<std::size_t>(col)];
            if (r >= 0)
                v[static_cast<std::size_t>(col)] =
                    -m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace sqfree
