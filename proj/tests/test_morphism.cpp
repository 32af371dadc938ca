#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "sqfree/morphism.hpp"

using sqfree::BudgetError;
using sqfree::ConsistencyError;
using sqfree::Rational;
using sqfree::RunConfig;
using sqfree::SubstitutionMatrix;
using sqfree::SubstitutionTriple;
using sqfree::UsageError;
using sqfree::Word;

namespace {

Word W(const char* s) { return Word::from_string(s); }

std::vector<Word> words(std::initializer_list<const char*> ws) {
    std::vector<Word> out;
    for (const char* w : ws) out.push_back(W(w));
    return out;
}

SubstitutionTriple load_fixture(const std::string& name) {
    std::ifstream in(std::string(SQFREE_FIXTURE_DIR) + "/" + name + ".json");
    REQUIRE(in.good());
    nlohmann::json doc = nlohmann::json::parse(in);
    auto list = [&](const char* letter) {
        std::vector<Word> out;
        for (const auto& s : doc["images"][letter])
            out.push_back(Word::from_string(s.get<std::string>()));
        return out;
    };
    auto t = sqfree::make_triple(list("a"), list("b"), list("c"));
    CHECK(t.m == doc["m"].get<int>());
    CHECK(t.k == doc["k"].get<int>());
    return t;
}

SubstitutionMatrix matrix(int m, std::initializer_list<std::int64_t> rows) {
    SubstitutionMatrix mat;
    mat.m = m;
    auto it = rows.begin();
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) mat.entry[y][x] = *it++;
    return mat;
}

}  // namespace

TEST_CASE("make_triple validates its input") {
    auto t = sqfree::make_triple(words({"abc"}), words({"bca"}), words({"cab"}));
    CHECK(t.m == 3);
    CHECK(t.k == 1);

    CHECK_THROWS_AS(sqfree::make_triple({}, words({"b"}), words({"c"})), UsageError);
    CHECK_THROWS_AS(
        sqfree::make_triple(words({"abc", "acb"}), words({"bca"}), words({"cab"})),
        UsageError);
    CHECK_THROWS_AS(
        sqfree::make_triple(words({"abc"}), words({"bc"}), words({"cab"})),
        UsageError);
    CHECK_THROWS_AS(
        sqfree::make_triple(words({"abca"}), words({"bcab"}), words({"caca"})),
        UsageError);
}

TEST_CASE("equal counts are extracted and heterogeneity is reported") {
    auto m18 = load_fixture("m18_pair");
    auto counts = sqfree::require_equal_counts(m18);
    CHECK(counts[0] == std::array<std::uint64_t, 3>{7, 5, 6});
    CHECK(counts[1] == std::array<std::uint64_t, 3>{6, 7, 5});
    CHECK(counts[2] == std::array<std::uint64_t, 3>{5, 6, 7});

    auto singleton = sqfree::make_triple(words({"abc"}), words({"bca"}), words({"cab"}));
    CHECK(sqfree::require_equal_counts(singleton)[0] ==
          std::array<std::uint64_t, 3>{1, 1, 1});

    auto permuted = sqfree::make_triple(words({"abc", "acb"}), words({"bca", "bac"}),
                                        words({"cab", "cba"}));
    CHECK(sqfree::require_equal_counts(permuted)[0] ==
          std::array<std::uint64_t, 3>{1, 1, 1});

    auto uneven = sqfree::make_triple(words({"aba", "abc"}), words({"bab", "bca"}),
                                      words({"cac", "cab"}));
    try {
        sqfree::require_equal_counts(uneven);
        FAIL("expected heterogeneous counts");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("heterogeneous counts") != std::string::npos);
        CHECK(std::string(e.what()).find("images of a") != std::string::npos);
    }
}

TEST_CASE("substitution matrices count letters per source column") {
    auto zech = load_fixture("zech_subs");
    CHECK(sqfree::substitution_matrix(zech) == matrix(12, {4, 4, 3, 4, 4, 5, 4, 4, 4}));

    auto m18 = load_fixture("m18_pair");
    CHECK(sqfree::substitution_matrix(m18) == matrix(18, {7, 6, 5, 5, 7, 6, 6, 5, 7}));

    auto identity = sqfree::make_triple(words({"a"}), words({"b"}), words({"c"}));
    CHECK(sqfree::substitution_matrix(identity) ==
          matrix(1, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
}

TEST_CASE("eigenvector frequencies are exact rationals") {
    struct Expected {
        const char* name;
        Rational fa, fb, fc;
    };
    const Expected table[] = {
        {"zech_subs", {11, 36}, {13, 36}, {1, 3}},
        {"m18_pair", {1, 3}, {1, 3}, {1, 3}},
        {"m29", {9, 28}, {10, 29}, {271, 812}},
        {"m30_alpha1", {10, 29}, {271, 841}, {280, 841}},
        {"m30_alpha2", {10, 29}, {1, 3}, {28, 87}},
        {"m33_alpha1", {1, 3}, {11, 32}, {31, 96}},
        {"m33_alpha2", {331, 1024}, {11, 32}, {341, 1024}},
        {"m35", {1, 3}, {16, 51}, {6, 17}},
    };
    for (const auto& row : table) {
        INFO(row.name);
        auto f = sqfree::pf_frequencies(sqfree::substitution_matrix(load_fixture(row.name)));
        CHECK(f[0] == row.fa);
        CHECK(f[1] == row.fb);
        CHECK(f[2] == row.fc);
        CHECK(f[0] + f[1] + f[2] == Rational(1));
    }

    CHECK_THROWS_AS(sqfree::pf_frequencies(matrix(2, {2, 0, 0, 0, 2, 0, 0, 0, 2})),
                    ConsistencyError);
    CHECK_THROWS_AS(sqfree::pf_frequencies(matrix(0, {1, 2, 3, 4, 5, 6, 7, 8, 9})),
                    UsageError);
}

TEST_CASE("sigma constructions reproduce the shipped fixtures") {
    struct Gen {
        const char* name;
        const char* a;
        const char* b;
        const char* c;
    };
    const char* w29a = "abcbacabacbcabacabcbacbcabcba";
    const char* w29b = "abcbacabacbcacbacabcacbcabcba";
    const char* w30a = "abcbacabacbabcabacabcacbcabcba";
    const char* w30b = "abcbacabacbcabcbacabcacbcabcba";
    const char* w33a = "abcacbacabcbabcabacbcabcbacbcacba";
    const char* w33b = "abcacbcabacabcacbabcbacabacbcacba";
    const Gen table[] = {
        {"m18_pair", "abcacbacabacbcacba", "abcacbacabacbcacba", "abcacbacabacbcacba"},
        {"m29", w29a, w29a, w29b},
        {"m30_alpha1", w30a, w30b, w30a},
        {"m30_alpha2", w30a, w30b, w30b},
        {"m33_alpha1", w33a, w33b, w33a},
        {"m33_alpha2", w33a, w33b, w33b},
        {"m35", "abcacbacabacbcabacabcacbcabacbcacba",
         "abcacbcabacbabcbacabcbabcabacbcacba",
         "abcacbacabacbcabacabcbabcabacbcacba"},
    };
    for (const auto& row : table) {
        INFO(row.name);
        auto built = sqfree::build_sigma_triple({W(row.a)}, {W(row.b)}, {W(row.c)}, true);
        auto fixture = load_fixture(row.name);
        CHECK(built.m == fixture.m);
        CHECK(built.k == fixture.k);
        for (int x = 0; x < 3; ++x) {
            REQUIRE(built.images[x].size() == fixture.images[x].size());
            for (std::size_t j = 0; j < built.images[x].size(); ++j)
                CHECK(built.images[x][j] == fixture.images[x][j]);
        }
    }

    CHECK_THROWS_AS(sqfree::build_sigma_triple({W("abc")}, {W("abca")}, {W("abc")}, true),
                    UsageError);

    auto single = sqfree::build_sigma_triple({W("abc")}, {W("abc")}, {W("abc")}, false);
    CHECK(single.k == 1);
    CHECK(single.images[1][0] == W("bca"));
    CHECK(single.images[2][0] == W("cab"));
}

TEST_CASE("fixture triples verify at the default depth") {
    const char* names[] = {"zech_subs", "m18_pair",   "m29",        "m30_alpha1",
                           "m30_alpha2", "m33_alpha1", "m33_alpha2", "m35"};
    for (const char* name : names) {
        INFO(name);
        auto cert = sqfree::verify_triple(load_fixture(name));
        CHECK(cert.valid);
        CHECK(cert.check_length == 3);
        CHECK_FALSE(cert.witness.has_value());
    }

    auto m18 = sqfree::verify_triple(load_fixture("m18_pair"));
    CHECK(m18.growth.k == 2);
    CHECK(m18.growth.m == 18);
    CHECK_FALSE(m18.growth.existence_only);
    CHECK(m18.growth.decimal == "1.04162");

    auto zech = sqfree::verify_triple(load_fixture("zech_subs"));
    CHECK(zech.growth.k == 1);
    CHECK(zech.growth.existence_only);
}

TEST_CASE("a failing triple yields the first witness in scan order") {
    auto bad = sqfree::make_triple(words({"aba"}), words({"bab"}), words({"cac"}));
    for (int threads : {1, 4}) {
        RunConfig cfg;
        cfg.threads = threads;
        auto cert = sqfree::verify_triple(bad, 3, cfg);
        REQUIRE_FALSE(cert.valid);
        REQUIRE(cert.witness.has_value());
        const auto& wit = *cert.witness;
        CHECK(wit.input == W("ab"));
        CHECK(wit.choices == std::vector<int>{0, 0});
        CHECK(wit.substituted == W("ababab"));
        CHECK(wit.square_start == 0);
        CHECK(wit.square_period == 2);

        CHECK_FALSE(sqfree::is_square_free(wit.substituted));
        auto syms = wit.substituted.symbols();
        for (std::size_t i = 0; i < wit.square_period; ++i)
            CHECK(syms[wit.square_start + i] ==
                  syms[wit.square_start + wit.square_period + i]);
    }
}

TEST_CASE("growth bounds match the quoted decimals") {
    auto lemma = sqfree::growth_bound(39, 43);
    CHECK(lemma.decimal == "1.09115");
    CHECK_FALSE(lemma.existence_only);

    CHECK(sqfree::growth_bound(30, 41).decimal == "1.08875");

    auto best = sqfree::growth_bound(110, 43);
    CHECK(best.value == Catch::Approx(1.1184).epsilon(1e-4));
    CHECK(sqfree::fmt_fixed(best.value, 4) == "1.1184");

    CHECK(sqfree::growth_bound(1, 12).existence_only);
    CHECK_THROWS_AS(sqfree::growth_bound(5, 1), UsageError);
    CHECK_THROWS_AS(sqfree::growth_bound(0, 10), UsageError);
}

TEST_CASE("repeated substitution stays square-free with stable frequencies") {
    auto zech = load_fixture("zech_subs");
    Word w = W("c");
    std::vector<std::array<std::uint64_t, 3>> counts;
    for (int t = 1; t <= 4; ++t) {
        w = sqfree::substitute(zech, w);
        counts.push_back(sqfree::letter_counts(w));
        if (t <= 3) CHECK(sqfree::is_square_free(w));
        // frequency error of the iterates decays at least like 1/length
        double len = static_cast<double>(w.size());
        CHECK(std::abs(static_cast<double>(counts.back()[0]) / len - 11.0 / 36.0) <=
              1.0 / len);
    }
    CHECK(counts[0] == std::array<std::uint64_t, 3>{3, 5, 4});
    CHECK(counts[1] == std::array<std::uint64_t, 3>{44, 52, 48});
    CHECK(counts[2] == std::array<std::uint64_t, 3>{528, 624, 576});
    CHECK(counts[3] == std::array<std::uint64_t, 3>{6336, 7488, 6912});

    // the count matrix kills its nilpotent part after two steps: M^3 = 12 M^2
    auto M = sqfree::substitution_matrix(zech);
    std::int64_t M2[3][3]{}, M3[3][3]{};
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x)
            for (int i = 0; i < 3; ++i) M2[y][x] += M(y, i) * M(i, x);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x)
            for (int i = 0; i < 3; ++i) M3[y][x] += M2[y][i] * M(i, x);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) CHECK(M3[y][x] == 12 * M2[y][x]);
}

TEST_CASE("frequency components cover the positive-entropy list") {
    const char* names[] = {"m18_pair",   "m29",        "m30_alpha1", "m30_alpha2",
                           "m33_alpha1", "m33_alpha2", "m35"};
    std::set<Rational> seen;
    for (const char* name : names) {
        auto f = sqfree::pf_frequencies(sqfree::substitution_matrix(load_fixture(name)));
        seen.insert(f.begin(), f.end());
    }
    const std::set<Rational> expected = {
        {16, 51},   {9, 28},    {28, 87},  {271, 841}, {31, 96},  {331, 1024},
        {280, 841}, {341, 1024}, {1, 3},   {271, 812}, {11, 32},  {10, 29},
        {6, 17}};
    CHECK(seen == expected);
}

TEST_CASE("subsets of a verified triple still verify") {
    auto m29 = load_fixture("m29");
    auto sub = sqfree::make_triple({m29.images[0][0]}, {m29.images[1][0]},
                                   {m29.images[2][0]});
    CHECK(sub.k == 1);
    CHECK(sqfree::verify_triple(sub).valid);
}

TEST_CASE("verification respects the work budget") {
    RunConfig cfg;
    cfg.node_budget = 5000;
    CHECK_THROWS_AS(sqfree::verify_triple(load_fixture("m29"), 10, cfg), BudgetError);

    CHECK_THROWS_AS(sqfree::verify_triple(load_fixture("m29"), 2), UsageError);
}
