#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "oracle.hpp"
#include "sqfree/enumerate.hpp"

using namespace sqfree;

namespace {

// First terms of the square-free count sequence, verified against the 3^n
// filter below and frozen here so a regression cannot slip past the small
// oracle range.
const std::vector<std::uint64_t> kSquareFreeCounts = {
    1,   3,   6,   12,  18,  30,  42,  60,   78,   108,
    144, 204, 264, 342, 456, 618, 798, 1044, 1392, 1830};

// Counts of words with no square of period <= 3. Satisfies
// c_n = c_{n-1} + c_{n-3} from n = 6 on.
const std::vector<std::uint64_t> kPeriod3Counts = {
    1,   3,   6,   12,  18,  30,   42,   60,   90,   132,  192,
    282, 414, 606, 888, 1302, 1908, 2796, 4098, 6006, 8802};

RunConfig serial_config() {
    RunConfig cfg;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST_CASE("square-free counts match the exhaustive filter and frozen terms") {
    auto series = count_square_free(19);
    REQUIRE(series.values.size() == 20);
    REQUIRE_FALSE(series.ell.has_value());
    for (int n = 0; n <= 19; ++n)
        CHECK(series.values[static_cast<std::size_t>(n)] ==
              kSquareFreeCounts[static_cast<std::size_t>(n)]);
    for (int n = 0; n <= 10; ++n)
        CHECK(series.values[static_cast<std::size_t>(n)] ==
              oracle::count_square_free(n));
}

TEST_CASE("square-free counts are submultiplicative") {
    auto s = count_square_free(16).values;
    for (int m = 1; m <= 8; ++m)
        for (int n = 1; n + m <= 16; ++n)
            CHECK(s[static_cast<std::size_t>(m + n)] <=
                  s[static_cast<std::size_t>(m)] * s[static_cast<std::size_t>(n)]);
}

TEST_CASE("period-limited counts: base cases") {
    CHECK(count_lsf(0, 2).values == std::vector<BigInt>{1, 3, 9});
    CHECK(count_lsf(1, 3).values == std::vector<BigInt>{1, 3, 6, 12});
    CHECK(count_lsf(2, 4).values == std::vector<BigInt>{1, 3, 6, 12, 18});
    auto unlimited = count_lsf(0, 6);
    BigInt p = 1;
    for (int n = 0; n <= 6; ++n) {
        CHECK(unlimited.values[static_cast<std::size_t>(n)] == p);
        p *= 3;
    }
}

TEST_CASE("period-limited counts match the filter oracle") {
    for (int ell : {1, 2, 3, 4})
        for (int n = 0; n <= 9; ++n)
            CHECK(count_lsf(ell, n).values.back() ==
                  oracle::count_length_l_square_free(ell, n));
}

TEST_CASE("period-limited counts agree with square-free counts up to 2*ell+1 "
          "and first exceed them at 2*ell+2 (for ell <= 3)") {
    auto sf = count_square_free(12);
    for (int ell : {1, 2, 3}) {
        auto limited = count_lsf(ell, 2 * ell + 2);
        for (int n = 0; n <= 2 * ell + 1; ++n)
            CHECK(limited.values[static_cast<std::size_t>(n)] ==
                  sf.values[static_cast<std::size_t>(n)]);
        CHECK(limited.values[static_cast<std::size_t>(2 * ell + 2)] >
              sf.values[static_cast<std::size_t>(2 * ell + 2)]);
    }
}

TEST_CASE("period caps 4 and 5 count the same words") {
    // No doubling xx with |x| = 5 avoids every square of period <= 4, so the
    // cap-4 and cap-5 counts coincide; both first exceed the square-free
    // counts at n = 12, not at 10.
    auto four = count_lsf(4, 12);
    auto five = count_lsf(5, 12);
    auto sf = count_square_free(12);
    CHECK(four.values == five.values);
    for (int n = 0; n <= 11; ++n)
        CHECK(four.values[static_cast<std::size_t>(n)] ==
              sf.values[static_cast<std::size_t>(n)]);
    CHECK(four.values[12] > sf.values[12]);
    CHECK(four.values[12] == oracle::count_length_l_square_free(4, 12));
}

TEST_CASE("period-3-limited counts: frozen series and its recurrence") {
    auto series = count_lsf(3, 20);
    REQUIRE(series.ell == 3);
    for (int n = 0; n <= 20; ++n)
        CHECK(series.values[static_cast<std::size_t>(n)] ==
              kPeriod3Counts[static_cast<std::size_t>(n)]);
    for (int n = 6; n <= 20; ++n)
        CHECK(series.values[static_cast<std::size_t>(n)] ==
              series.values[static_cast<std::size_t>(n - 1)] +
                  series.values[static_cast<std::size_t>(n - 3)]);
}

TEST_CASE("counts are non-increasing in the period cap") {
    auto sf = count_square_free(8);
    BigInt prev = 0;
    for (int ell = 4; ell >= 0; --ell) {
        BigInt v = count_lsf(ell, 8).values[8];
        if (ell < 4) CHECK(v >= prev);
        prev = v;
    }
    CHECK(count_lsf(4, 8).values[8] == sf.values[8]);
}

TEST_CASE("letter-count triangle matches the oracle and the plain counts") {
    const int n_top = 9;
    auto table = count_by_letter(n_top);
    auto series = count_square_free(n_top);

    REQUIRE(table.rows[0] == std::vector<BigInt>{1});
    REQUIRE(table.rows[1] == std::vector<BigInt>{2, 1});

    for (int n = 0; n <= n_top; ++n) {
        CHECK(table.row_sum(n) == series.values[static_cast<std::size_t>(n)]);
        auto expect = oracle::count_by_letter_a(n);
        for (int k = 0; k <= n; ++k) {
            auto it = expect.find(k);
            BigInt want = it == expect.end() ? 0 : BigInt(it->second);
            CHECK(table.at(n, k) == want);
        }
    }

    SECTION("zero outside the support window") {
        for (int n = 4; n <= n_top; ++n) CHECK(table.at(n, 0) == 0);
        CHECK(table.at(4, 4) == 0);
        CHECK(table.at(-1, 0) == 0);
        CHECK(table.at(2, 5) == 0);
    }
}

TEST_CASE("word enumeration is lexicographic and complete") {
    auto words = enumerate_words(3);
    std::vector<std::string> got;
    for (const auto& w : words) got.push_back(w.str());
    CHECK(got == std::vector<std::string>{"aba", "abc", "aca", "acb", "bab",
                                          "bac", "bca", "bcb", "cab", "cac",
                                          "cba", "cbc"});

    CHECK(enumerate_words(0).size() == 1);
    CHECK(enumerate_words(0)[0].size() == 0);

    for (int n : {5, 7}) {
        auto ws = enumerate_words(n);
        auto expect = oracle::square_free_strings(n);
        REQUIRE(ws.size() == expect.size());
        for (std::size_t i = 0; i < ws.size(); ++i)
            CHECK(ws[i].str() == expect[i]);
    }
}

TEST_CASE("letter extents match the independent exhaustive oracle for k <= 4") {
    for (int k = 0; k <= 4; ++k) {
        auto oracle_extent = oracle::extent_of(k);
        auto got = letter_extent(k);
        INFO("k = " << k);
        REQUIRE(got.k == k);
        CHECK(got.n_min == oracle_extent.n_min);
        REQUIRE(got.n_max.has_value());
        CHECK(*got.n_max == oracle_extent.n_max);

        // Witnesses are real: square-free, right length, right letter count.
        CHECK(static_cast<int>(got.witness_min.size()) == got.n_min);
        CHECK(static_cast<int>(got.witness_max.size()) == *got.n_max);
        CHECK(oracle::is_square_free(got.witness_min.str()));
        CHECK(oracle::is_square_free(got.witness_max.str()));
        CHECK(static_cast<int>(letter_counts(got.witness_min)[0]) == k);
        CHECK(static_cast<int>(letter_counts(got.witness_max)[0]) == k);

        if (k > 0) {
            REQUIRE(got.freq_lower.has_value());
            REQUIRE(got.freq_upper.has_value());
            CHECK(*got.freq_lower == Rational(k, *got.n_max));
            CHECK(*got.freq_upper == Rational(k, got.n_min));
        }
    }

    SECTION("known endpoints") {
        auto e0 = letter_extent(0);
        CHECK(e0.n_min == 0);
        CHECK(e0.n_max == 3);
        auto e1 = letter_extent(1);
        CHECK(e1.n_min == 1);
        CHECK(e1.n_max == 7);
        CHECK(e1.witness_min.str() == "a");
    }

    SECTION("frequency bounds move monotonically") {
        Rational lower_prev(0), upper_prev(2);
        for (int k = 1; k <= 4; ++k) {
            auto e = letter_extent(k);
            CHECK(*e.freq_lower > lower_prev);
            CHECK(*e.freq_upper < upper_prev);
            lower_prev = *e.freq_lower;
            upper_prev = *e.freq_upper;
        }
    }
}

TEST_CASE("a too-small search bound leaves the maximum unknown") {
    auto got = letter_extent(1, 5);
    CHECK(got.n_min == 1);
    CHECK_FALSE(got.n_max.has_value());
    CHECK_FALSE(got.freq_lower.has_value());
    REQUIRE(got.freq_upper.has_value());
    CHECK(*got.freq_upper == Rational(1));
}

TEST_CASE("results do not depend on the thread count or split depth") {
    RunConfig one = serial_config();
    RunConfig four;
    four.threads = 4;
    RunConfig shallow;
    shallow.threads = 4;
    shallow.prefix_depth = 2;

    auto a = count_square_free(14, one);
    auto b = count_square_free(14, four);
    auto c = count_square_free(14, shallow);
    CHECK(a.values == b.values);
    CHECK(a.values == c.values);

    auto ta = count_by_letter(10, one);
    auto tb = count_by_letter(10, four);
    CHECK(ta.rows == tb.rows);

    auto ea = letter_extent(2, -1, one);
    auto eb = letter_extent(2, -1, four);
    CHECK(ea.witness_min == eb.witness_min);
    CHECK(ea.witness_max == eb.witness_max);
    CHECK(ea.n_min == eb.n_min);
    CHECK(ea.n_max == eb.n_max);
}

TEST_CASE("the node budget is enforced with a typed error") {
    RunConfig tiny;
    tiny.node_budget = 50;
    try {
        count_square_free(14, tiny);
        FAIL("expected a budget error");
    } catch (const BudgetError& e) {
        CHECK(e.module() == "enumerate");
        CHECK(e.operation() == "count_square_free");
    }
    CHECK_THROWS_AS(count_by_letter(14, tiny), BudgetError);
    CHECK_THROWS_AS(enumerate_words(14, tiny), BudgetError);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(count_square_free(-1), UsageError);
    CHECK_THROWS_AS(count_lsf(-1, 4), UsageError);
    CHECK_THROWS_AS(count_lsf(2, -4), UsageError);
    CHECK_THROWS_AS(count_by_letter(-2), UsageError);
    CHECK_THROWS_AS(letter_extent(-1), UsageError);
}
