#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include "sqfree/analysis.hpp"
#include "sqfree/enumerate.hpp"
#include "sqfree/thermo.hpp"

using namespace sqfree;

TEST_CASE("partition values match direct evaluation") {
    auto table = count_by_letter(12);

    // Row n=3 splits the 12 words as 2 + 8 + 2 by letter-a count.
    CHECK(table.at(3, 0) == 2);
    CHECK(table.at(3, 1) == 8);
    CHECK(table.at(3, 2) == 2);
    CHECK(table.at(3, 3) == 0);

    CHECK_THAT(partition_polynomial(table, 1, 2.0),
               Catch::Matchers::WithinAbs(std::log(4.0), 1e-12));
    // As q -> 0 only the a-free words survive; at n=1 those are b and c.
    CHECK_THAT(partition_polynomial(table, 1, 1e-300),
               Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
    CHECK_THAT(partition_polynomial(table, 3, 1.0),
               Catch::Matchers::WithinAbs(std::log(12.0), 1e-12));

    CHECK(partition_value(table, 3, Rational(2)) == Rational(26));
    for (int n = 0; n <= 12; ++n)
        CHECK(partition_value(table, n, Rational(1)) == Rational(table.row_sum(n)));

    // Log-domain path against the exact rational path at an integer weight.
    Rational exact = partition_value(table, 12, Rational(3));
    CHECK_THAT(partition_polynomial(table, 12, 3.0),
               Catch::Matchers::WithinAbs(
                   log_big(boost::multiprecision::numerator(exact)), 1e-10));

    CHECK_THROWS_AS(partition_polynomial(table, 1, 0.0), UsageError);
    CHECK_THROWS_AS(partition_polynomial(table, 1, -1.0), UsageError);
    CHECK_THROWS_AS(partition_polynomial(table, 13, 1.0), UsageError);
    CHECK_THROWS_AS(partition_value(table, 1, Rational(0)), UsageError);
}

TEST_CASE("free energy dominates its envelope and shrinks by doubling") {
    auto table = count_by_letter(16);

    CHECK_THAT(finite_free_energy(table, 3, 1.0),
               Catch::Matchers::WithinAbs(std::log(12.0) / 3.0, 1e-12));
    CHECK_THROWS_AS(finite_free_energy(table, 0, 1.0), UsageError);

    auto b1 = free_energy_bounds(1.0);
    CHECK(b1.lower == 0.0);
    CHECK_THAT(b1.upper, Catch::Matchers::WithinAbs(-std::log(0.768189), 1e-12));
    auto be = free_energy_bounds(std::exp(1.0));
    CHECK_THAT(be.lower, Catch::Matchers::WithinAbs(13.0 / 36.0, 1e-12));
    CHECK_THAT(be.upper, Catch::Matchers::WithinAbs(
                             -std::log(0.768189) + 469.0 / 1201.0, 1e-12));
    auto bi = free_energy_bounds(std::exp(-1.0));
    CHECK_THAT(bi.lower, Catch::Matchers::WithinAbs(-64.0 / 233.0, 1e-12));
    CHECK_THROWS_AS(free_energy_bounds(0.0), UsageError);

    // Doubling a length cannot grow the per-letter value: s_{n+m} <= s_n s_m.
    for (Rational q : {Rational(1, 3), Rational(1), Rational(5, 2)}) {
        CHECK(partition_value(table, 6, q) <=
              partition_value(table, 3, q) * partition_value(table, 3, q));
        CHECK(partition_value(table, 12, q) <=
              partition_value(table, 5, q) * partition_value(table, 7, q));
        CHECK(partition_value(table, 16, q) <=
              partition_value(table, 8, q) * partition_value(table, 8, q));
    }
    double f1 = finite_free_energy(table, 1, 1.0);
    double f2 = finite_free_energy(table, 2, 1.0);
    double f4 = finite_free_energy(table, 4, 1.0);
    double f8 = finite_free_energy(table, 8, 1.0);
    double f16 = finite_free_energy(table, 16, 1.0);
    CHECK(f1 >= f2);
    CHECK(f2 >= f4);
    CHECK(f4 >= f8);
    CHECK(f8 >= f16);
}

TEST_CASE("the maximising letter count is exact and ties break low") {
    auto table = count_by_letter(12);

    // Row n=1 is {2, 1}: 2 beats 1 at q=1, loses at q=3, ties at q=2.
    CHECK(argmax_k(table, 1, Rational(1)) == 0);
    CHECK(argmax_k(table, 1, Rational(3)) == 1);
    CHECK(argmax_k(table, 1, Rational(2)) == 0);
    CHECK(argmax_k(table, 1, 2.0) == 0);

    for (int n : {5, 9, 12}) {
        for (Rational q : {Rational(1, 3), Rational(1), Rational(7, 5), Rational(4)}) {
            int k_star = argmax_k(table, n, q);
            Rational best(0);
            Rational pw(1);
            std::vector<Rational> cand(static_cast<std::size_t>(n) + 1);
            for (int k = 0; k <= n; ++k) {
                cand[static_cast<std::size_t>(k)] = Rational(table.at(n, k)) * pw;
                pw *= q;
            }
            for (int k = 0; k <= n; ++k) {
                INFO("n=" << n << " k=" << k);
                CHECK(cand[static_cast<std::size_t>(k_star)] >=
                      cand[static_cast<std::size_t>(k)]);
                if (cand[static_cast<std::size_t>(k)] ==
                    cand[static_cast<std::size_t>(k_star)])
                    CHECK(k_star <= k);
            }
        }
    }

    // Unweighted maximiser sits near density 1/3.
    int k12 = argmax_k(table, 12, Rational(1));
    CHECK(std::abs(k12 - 4) <= 1);

    CHECK_THROWS_AS(argmax_k(table, 13, Rational(1)), UsageError);
    CHECK_THROWS_AS(argmax_k(table, 5, Rational(-2)), UsageError);
}

TEST_CASE("free energy tables are convex in log weight") {
    auto table = count_by_letter(20);
    auto tt = make_thermo_table(table, 20);

    REQUIRE(tt.q_grid.size() == 81);
    REQUIRE(tt.q_grid[40] == 1.0);
    CHECK(tt.values[0].empty());
    for (int n = 1; n <= 20; ++n) {
        const auto& row = tt.values[static_cast<std::size_t>(n)];
        REQUIRE(row.size() == 81);
        CHECK_THAT(row[40], Catch::Matchers::WithinAbs(
                                log_big(table.row_sum(n)) / n, 1e-12));
        for (std::size_t j = 1; j + 1 < row.size(); ++j) {
            INFO("n=" << n << " j=" << j);
            CHECK(row[j + 1] - 2.0 * row[j] + row[j - 1] >= -1e-9);
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            int k = tt.argmax[static_cast<std::size_t>(n)][j];
            CHECK(k >= 0);
            CHECK(k <= n);
        }
        // The maximising count is non-decreasing along the weight grid.
        for (std::size_t j = 1; j < row.size(); ++j)
            CHECK(tt.argmax[static_cast<std::size_t>(n)][j] >=
                  tt.argmax[static_cast<std::size_t>(n)][j - 1]);
    }

    // The deepest row clears the rigorous lower envelope everywhere.
    for (std::size_t j = 0; j < tt.q_grid.size(); ++j) {
        auto bounds = free_energy_bounds(tt.q_grid[j]);
        INFO("q=" << tt.q_grid[j]);
        CHECK(tt.values[20][j] >= bounds.lower);
    }

    CHECK_THROWS_AS(make_thermo_table(table, 0), UsageError);
    CHECK_THROWS_AS(make_thermo_table(table, 21), UsageError);
    CHECK_THROWS_AS(make_thermo_table(table, 5, std::vector<double>{}), UsageError);
    CHECK_THROWS_AS(make_thermo_table(table, 5, std::vector<double>{1.0, -1.0}),
                    UsageError);
}

TEST_CASE("entropy transform is concave with the symmetric maximiser") {
    auto table = count_by_letter(20);
    auto curve = entropy_curve(table, default_eps_grid(), 20);

    REQUIRE(curve.points.size() == 41);
    CHECK(curve.n_used == 20);
    CHECK(curve.max_second_difference <= 1e-9);
    for (const auto& pt : curve.points) CHECK(pt.value > 0.0);

    // The window is symmetric about 1/3, where the unweighted ensemble has
    // its mean density; the maximiser lands there with weight one.
    CHECK_THAT(curve.max_eps, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-9));
    CHECK_THAT(curve.q_at_max, Catch::Matchers::WithinAbs(1.0, 1e-6));
    CHECK_THAT(curve.max_value, Catch::Matchers::WithinAbs(
                                    finite_free_energy(table, 20, 1.0), 1e-10));
    for (const auto& pt : curve.points) CHECK(pt.value <= curve.max_value);

    // Transform value is the infimum: below every grid weight, equal at the
    // reported minimiser.
    for (const auto& pt : curve.points) {
        for (double q : default_q_grid())
            CHECK(pt.value <=
                  finite_free_energy(table, 20, q) - pt.eps * std::log(q) + 1e-12);
        CHECK_THAT(pt.value,
                   Catch::Matchers::WithinAbs(finite_free_energy(table, 20, pt.q) -
                                                  pt.eps * std::log(pt.q),
                                              1e-9));
    }

    CHECK_THROWS_AS(entropy_curve(table, {0.20}, 20), UsageError);
    CHECK_THROWS_AS(entropy_curve(table, {0.45}, 20), UsageError);
    CHECK_THROWS_AS(entropy_curve(table, default_eps_grid(), 0), UsageError);
    CHECK_THROWS_AS(entropy_curve(table, default_eps_grid(), 21), UsageError);
    CHECK_THROWS_AS(entropy_curve(table, {}, 20), UsageError);
    CHECK_THROWS_AS(default_eps_grid(1), UsageError);
}

TEST_CASE("the minimising weight matches the density derivative") {
    auto table = count_by_letter(32);
    auto curve = entropy_curve(table, default_eps_grid(9), 32);
    double h = 1e-5;
    for (const auto& pt : curve.points) {
        double slope = (finite_free_energy(table, 32, pt.q * std::exp(h)) -
                        finite_free_energy(table, 32, pt.q * std::exp(-h))) /
                       (2.0 * h);
        INFO("eps=" << pt.eps << " q=" << pt.q);
        CHECK_THAT(slope, Catch::Matchers::WithinAbs(pt.eps, 1e-3));
    }
}

TEST_CASE("the critical curve brackets the phase boundary") {
    auto table = count_by_letter(30);
    RadiusEstimator estimator = [](const CountSeries& s) {
        auto pooled = pooled_estimate(s, default_family(s.n_max() + 1));
        return std::pair<double, double>(pooled.x_c_est, pooled.x_c_spread);
    };
    auto curve = critical_curve(
        table, {Rational(1, 2), Rational(1), Rational(2)}, estimator);

    REQUIRE(curve.points.size() == 3);
    CHECK(curve.method == "dlog-pade");
    for (const auto& pt : curve.points) {
        INFO("q=" << pt.q);
        CHECK_FALSE(pt.defective);
        CHECK(pt.within_bounds);
        double qd = to_double(pt.q);
        // Estimates shadow the reference curve x_c q^{-1/3}.
        CHECK(std::fabs(std::log(pt.x_c) -
                        std::log(0.768189 * std::pow(qd, -1.0 / 3.0))) < 0.02);
        // Radius times growth rate is 1 in the limit; the finite-depth free
        // energy overshoots it by its 1/n correction.
        double ratio = pt.x_c * std::exp(finite_free_energy(table, 30, qd));
        CHECK(ratio > 1.0);
        CHECK(ratio < 1.25);
    }
    const auto& at_one = curve.points[1];
    CHECK(at_one.q == Rational(1));
    CHECK(std::fabs(at_one.x_c - 0.768189) <= at_one.uncertainty);
    CHECK(at_one.uncertainty < 0.03);

    CHECK_THROWS_AS(critical_curve(table, {}, estimator), UsageError);
    CHECK_THROWS_AS(critical_curve(table, {Rational(0)}, estimator), UsageError);
}

TEST_CASE("estimator failures mark points defective without aborting") {
    auto table = count_by_letter(6);
    RadiusEstimator needs_depth = [](const CountSeries& s) {
        auto pooled = pooled_estimate(s, default_family(46));
        return std::pair<double, double>(pooled.x_c_est, pooled.x_c_spread);
    };
    auto curve = critical_curve(table, {Rational(1)}, needs_depth, "starved");
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].defective);
    CHECK(curve.method == "starved");
}
