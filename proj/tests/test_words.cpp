#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <string>

#include "afkit/words.hpp"
#include "oracle_words.hpp"

using namespace afkit;

namespace {
AdjacentFunction fn(std::vector<int> v, int k) { return AdjacentFunction{std::move(v), k}; }
}  // namespace

TEST_CASE("adjacency of courses") {
    CHECK(is_adjacent_fn(fn({3, 2, 1, 2, 2, 2, 3, 4, 3}, 4)));
    CHECK_FALSE(is_adjacent_fn(fn({1, 3, 2}, 3)));
    CHECK(is_adjacent_fn(fn({1}, 1), /*require_final=*/true));
    CHECK_FALSE(is_adjacent_fn(fn({1, 2}, 3), /*require_final=*/true));
    CHECK_THROWS_AS(is_adjacent_fn(fn({0, 1}, 2)), Error);
    CHECK_THROWS_AS(is_adjacent_fn(fn({1, 3}, 2)), Error);
}

TEST_CASE("walks") {
    std::string a = "cbadefba";
    AdjacentFunction course = fn({3, 2, 1, 2, 3, 3, 3, 4, 5, 6, 5, 4, 3, 4, 5, 6, 7, 8, 7, 6}, 8);
    CHECK(apply_walk(a, course) == "abcbaaadefedadefbabf");
    CHECK(apply_walk(std::string("abc"), identity_fn(3)) == "abc");
    CHECK(apply_walk(std::string("abc"), reversal_fn(3)) == "cba");
    CHECK_THROWS_AS(apply_walk(std::string("ab"), identity_fn(3)), DimensionError);
}

TEST_CASE("generation with deterministic courses") {
    auto f = generates(std::string("abcd"), std::string("babcd"));
    REQUIRE(f.has_value());
    CHECK(f->values == std::vector<int>{2, 1, 2, 3, 4});

    CHECK_FALSE(generates(std::string("abc"), std::string("ab")).has_value());

    auto g = generates(std::string("abcbd"), std::string("abcbcbd"));
    REQUIRE(g.has_value());
    CHECK(g->values == std::vector<int>{1, 2, 3, 2, 3, 4, 5});  // least of the two valid courses
    CHECK(is_surjective_fn(*g));
}

TEST_CASE("primitive generators") {
    auto [g, w] = primitive_generator(std::string("abcbaaadefedadefbabf"));
    CHECK(g == "abfedabc");  // min("cbadefba", "abfedabc")
    CHECK(apply_walk(g, w) == "abcbaaadefedadefbabf");

    auto [g2, w2] = primitive_generator(std::string("abcbcd"));
    CHECK(g2.size() == 4);
    CHECK((g2 == "abcd" || g2 == "dcba"));
    CHECK(apply_walk(g2, w2) == "abcbcd");

    CHECK(primitive_generator(std::string("abcbda")).first == "abcbda");
    CHECK(is_primitive(std::string("abcbda")));
    CHECK_FALSE(is_primitive(std::string("babcd")));
    CHECK(primitive_generator(std::string("a")).first == "a");
    CHECK_THROWS_AS(primitive_generator(std::string("")), Error);
}

TEST_CASE("defect sets") {
    CHECK(defects(std::string("abcbd")).pairs == std::vector<std::pair<int, int>>{{2, 4}});
    CHECK(defects(std::string("abc")).pairs.empty());
    CHECK(defects(std::string("aa")).pairs == std::vector<std::pair<int, int>>{{1, 2}});
}

TEST_CASE("D-equality") {
    DefectSet d{5, {{2, 4}}};
    CHECK(d_equal(fn({1, 2, 3, 4, 3, 4, 5}, 5), fn({1, 2, 3, 2, 3, 4, 5}, 5), d));
    CHECK(d_equal(fn({1, 2, 3, 4, 3, 4, 5}, 5), fn({1, 2, 3, 4, 3, 4, 5}, 5), d));
    DefectSet empty2{2, {}};
    CHECK_FALSE(d_equal(fn({1, 2}, 2), fn({2, 1}, 2), empty2));
    CHECK_THROWS_AS(d_equal(fn({1}, 2), fn({1, 2}, 2), empty2), DimensionError);
}

TEST_CASE("extension classification") {
    auto c1 = classify_extension(std::string("abc"), 'd');
    CHECK(c1.count(ExtensionCase::Primitive) == 1);
    auto c2 = classify_extension(std::string("abc"), 'c');
    CHECK(c2.count(ExtensionCase::LastElement) == 1);
    auto c3 = classify_extension(std::string("abcb"), 'a');
    CHECK(c3.count(ExtensionCase::OddPalindromeSuffix) == 1);
}

TEST_CASE("lambda closures") {
    auto cl1 = lambda_closure(std::set<std::string>{"011"}, 1);
    CHECK(cl1.count("010") == 1);
    CHECK(cl1.count("011") == 1);

    auto cl2 = lambda_closure(std::set<std::string>{"0111"}, 2);
    for (std::string w : {"0100", "0101", "0110", "0111"}) CHECK(cl2.count(w) == 1);

    CHECK(lambda_closure(std::set<std::string>{}, 3).empty());
    CHECK_THROWS_AS(lambda_closure(std::set<std::string>{"011"}, 2), DimensionError);
    CHECK_THROWS_AS(lambda_closure(std::set<std::string>{"0111"}, 2, 2), CapacityError);
}

TEST_CASE("generator uniqueness up to reversal (small exhaustive)") {
    for (int len = 1; len <= 5; ++len) {
        for (const auto& c : oracle::all_words("abc", len)) {
            auto mins = oracle::minimal_generators_brute(c);
            auto [g, w] = primitive_generator(c);
            std::set<std::string> expect{g, reversed(g)};
            INFO("word " << c);
            CHECK(mins == expect);
            CHECK(apply_walk(g, w) == c);
        }
    }
}

TEST_CASE("generator uniqueness on random words") {
    std::mt19937 rng(20240811);
    for (int round = 0; round < 120; ++round) {
        int len = 1 + (int)(rng() % 12);
        std::string c;
        for (int i = 0; i < len; ++i) c.push_back("abcd"[rng() % 4]);
        auto mins = oracle::minimal_generators_brute(c);
        auto g = primitive_generator(c).first;
        std::set<std::string> expect{g, reversed(g)};
        INFO("word " << c);
        CHECK(mins == expect);
    }
}

TEST_CASE("walk identity via defects (small exhaustive)") {
    for (int len = 1; len <= 3; ++len) {
        for (const auto& a : oracle::all_words("abcd", len)) {
            if (!is_primitive(a)) continue;
            auto d = defects(a);
            for (int m = len; m <= 5; ++m) {
                auto fs = enumerate_adjacent(m, len, false, true);
                for (const auto& f : fs)
                    for (const auto& g : fs) {
                        bool same = apply_walk(a, f) == apply_walk(a, g);
                        CHECK(same == d_equal(f, g, d));
                    }
            }
        }
    }
}

TEST_CASE("transitivity of generation") {
    for (int la = 1; la <= 3; ++la)
        for (const auto& a : oracle::all_words("ab", la))
            for (int lc = la; lc <= 6; ++lc)
                for (const auto& c : oracle::all_words("ab", lc))
                    for (int lb = la; lb <= lc; ++lb)
                        for (const auto& b : oracle::all_words("ab", lb)) {
                            if (generates(a, b) && generates(b, c)) {
                                INFO(a << " -> " << b << " -> " << c);
                                CHECK(generates(a, c).has_value());
                            }
                        }
}

TEST_CASE("reversal closure of the canonical generator") {
    std::mt19937 rng(7);
    for (int round = 0; round < 200; ++round) {
        int len = 1 + (int)(rng() % 10);
        std::string c;
        for (int i = 0; i < len; ++i) c.push_back("abc"[rng() % 3]);
        CHECK(primitive_generator(c).first == primitive_generator(reversed(c)).first);
    }
}

TEST_CASE("classification is never empty and propagates non-primitivity") {
    for (int len = 1; len <= 6; ++len) {
        for (const auto& b : oracle::all_words("abc", len)) {
            for (char x : std::string("abc")) {
                auto cases = classify_extension(b, x);
                INFO("b=" << b << " x=" << x);
                CHECK_FALSE(cases.empty());
            }
            // fresh letter not occurring in b
            char fresh = 'z';
            auto cases = classify_extension(b, fresh);
            std::string bx = b + fresh;
            if (!is_primitive(bx)) {
                INFO("b=" << b);
                CHECK(is_terminal(b));
            }
        }
    }
}

TEST_CASE("adjacent function enumeration basics") {
    CHECK(enumerate_adjacent(0, 3).size() == 1);   // the empty function
    CHECK(enumerate_adjacent(2, 0).empty());
    CHECK(enumerate_adjacent(1, 1, true).size() == 1);
    // A^2_1 = {[1,1]}
    auto a21 = enumerate_adjacent(2, 1);
    REQUIRE(a21.size() == 1);
    CHECK(a21[0].values == std::vector<int>{1, 1});
    // final adjacent functions end at k
    for (const auto& f : enumerate_adjacent(4, 3, true)) CHECK(f.values.back() == 3);
    // surjective adjacent = visits 1 and k
    for (const auto& f : enumerate_adjacent(4, 3, false, true)) {
        CHECK(*std::min_element(f.values.begin(), f.values.end()) == 1);
        CHECK(*std::max_element(f.values.begin(), f.values.end()) == 3);
    }
}
