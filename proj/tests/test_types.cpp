#include <catch2/catch_amalgamated.hpp>

#include "afkit/parser.hpp"
#include "afkit/types.hpp"
#include "gen_helpers.hpp"

using namespace afkit;

namespace {

UniversePtr full_universe(const Signature& sig, int k, bool with_eq = true) {
    return std::make_shared<AtomUniverse>(AtomUniverse::full(sig, k, with_eq));
}

Signature sig_r2() {
    Signature s;
    s.declare("r", 2);
    return s;
}

}  // namespace

TEST_CASE("atp basics") {
    Signature sig = sig_r2();
    Structure a;
    a.domain_size = 1;
    a.declare("r", 2);
    auto u2 = full_universe(sig, 2);
    auto t = atp(a, {0, 0}, u2);
    for (bool b : t.polarity) CHECK_FALSE(b);
    REQUIRE(t.eq.size() == 1);
    CHECK(t.eq[0]);
    CHECK(is_consistent(t));
}

TEST_CASE("walk types are determined by the generator's type") {
    gen::Rng rng(51);
    Signature sig = sig_r2();
    auto u3 = full_universe(sig, 3);
    for (int round = 0; round < 50; ++round) {
        auto a = gen::random_structure(rng, sig, 3);
        Tuple base = {gen::pick(rng, 3), gen::pick(rng, 3), gen::pick(rng, 3)};
        auto t3 = atp(a, base, u3);
        for (const auto& g : enumerate_adjacent(4, 3)) {
            auto u4 = full_universe(sig, 4);
            auto walked = atp(a, apply_walk(base, g), u4);
            // polarity of (p, f) at level 4 equals polarity of (p, g o f) at level 3
            for (std::size_t i = 0; i < u4->templates.size(); ++i) {
                const auto& tpl = u4->templates[i];
                int idx = u3->index_of(tpl.pred, compose_fn(g, tpl.fn));
                REQUIRE(idx >= 0);
                CHECK(walked.polarity[i] == t3.polarity[idx]);
            }
        }
    }
}

TEST_CASE("composition identity xi = zeta ∪ eta+ ∪ iota") {
    gen::Rng rng(53);
    Signature sig = sig_r2();
    sig.declare("q", 3);
    auto u3 = full_universe(sig, 3);
    auto u2 = full_universe(sig, 2);
    for (int round = 0; round < 60; ++round) {
        auto a = gen::random_structure(rng, sig, 4);
        Tuple c = {gen::pick(rng, 4), gen::pick(rng, 4), gen::pick(rng, 4)};
        auto xi = atp(a, c, u3);
        auto zeta = atp(a, {c[0], c[1]}, u2);
        auto eta = atp(a, {c[1], c[2]}, u2);
        auto iota = increment(xi);
        auto composed = compose_types(u3, zeta, eta, iota);
        CHECK(composed == xi);
        // restriction and shift recover the pieces
        CHECK(head_type(xi) == zeta);
        CHECK(tail_type(xi) == eta);
        CHECK(increment(composed) == iota);
        CHECK(restrict_type(xi, 1, 3) == xi);
    }
}

TEST_CASE("D-compatibility") {
    Signature sig;
    sig.declare("p", 7);
    auto u5cov = full_universe(sig, 5, false)->covering_subuniverse();

    // empty D: classes are singletons, every incremental type is compatible
    IncrementalType any{u5cov, std::vector<bool>(u5cov->templates.size(), false), {}};
    any.polarity[0] = true;
    CHECK(is_d_compatible(any, DefectSet{5, {}}));

    // the counterexample: p(x1x2x3x2x3x4x5) positive, p(x1x2x3x4x3x4x5) negative
    AdjacentFunction f1{{1, 2, 3, 2, 3, 4, 5}, 5};
    AdjacentFunction f2{{1, 2, 3, 4, 3, 4, 5}, 5};
    int i1 = u5cov->index_of("p", f1);
    int i2 = u5cov->index_of("p", f2);
    REQUIRE(i1 >= 0);
    REQUIRE(i2 >= 0);
    IncrementalType bad{u5cov, std::vector<bool>(u5cov->templates.size(), false), {}};
    bad.polarity[i1] = true;
    CHECK_FALSE(is_d_compatible(bad, DefectSet{5, {{2, 4}}}));
    CHECK(is_d_compatible(bad, DefectSet{5, {}}));

    // the incremental type of a real tuple is compatible with the tuple's defects
    gen::Rng rng(59);
    Signature sig3;
    sig3.declare("q", 3);
    auto u3 = full_universe(sig3, 3, false);
    for (int round = 0; round < 60; ++round) {
        auto a = gen::random_structure(rng, sig3, 3);
        Tuple c = {gen::pick(rng, 3), gen::pick(rng, 3), gen::pick(rng, 3)};
        if (!is_primitive(c)) continue;
        CHECK(is_d_compatible(increment(atp(a, c, u3)), defects(c)));
    }
}

TEST_CASE("D-compatibility is monotone decreasing in D") {
    Signature sig;
    sig.declare("p", 3);
    auto ucov = full_universe(sig, 3, false)->covering_subuniverse();
    std::vector<std::pair<int, int>> all_pairs{{1, 2}, {1, 3}, {2, 3}};
    for (const auto& iota : enumerate_types(ucov)) {
        for (std::size_t m1 = 0; m1 < 8; ++m1)
            for (std::size_t m2 = 0; m2 < 8; ++m2) {
                if ((m1 & m2) != m1) continue;  // D1 subseteq D2
                DefectSet d1{3, {}}, d2{3, {}};
                for (int b = 0; b < 3; ++b) {
                    if (m1 & (1u << b)) d1.pairs.push_back(all_pairs[b]);
                    if (m2 & (1u << b)) d2.pairs.push_back(all_pairs[b]);
                }
                if (is_d_compatible(iota, d2)) CHECK(is_d_compatible(iota, d1));
            }
    }
}

TEST_CASE("canonical structures realize incremental types") {
    Signature sig;
    sig.declare("r", 2);
    sig.declare("q", 3);
    auto u3 = full_universe(sig, 3, true);
    auto ucov = u3->covering_subuniverse();

    // all-negative type: no facts at all
    IncrementalType neg{ucov, std::vector<bool>(ucov->templates.size(), false), {}};
    auto s = canonical_structure(neg, {0, 1, 2});
    for (const auto& [p, rel] : s.relations) CHECK(rel.tuples.empty());

    // exhaustive round trip on a primitive tuple with no defects
    Tuple e = {0, 1, 2};
    int found = 0;
    for (const auto& iota : enumerate_types(ucov)) {
        auto a = canonical_structure(iota, e);
        auto back = increment(atp(a, e, u3));
        CHECK(back == iota);
        ++found;
    }
    CHECK(found == 4);  // two surjective ternary walks, independent polarities

    // incompatible type rejected on a defective tuple
    Signature sigp;
    sigp.declare("p", 7);
    auto u5cov = full_universe(sigp, 5, false)->covering_subuniverse();
    IncrementalType bad{u5cov, std::vector<bool>(u5cov->templates.size(), false), {}};
    bad.polarity[u5cov->index_of("p", AdjacentFunction{{1, 2, 3, 2, 3, 4, 5}, 5})] = true;
    // tuple (0,1,2,1,3) has the defect <2,4>
    CHECK_THROWS_AS(canonical_structure(bad, Tuple{0, 1, 2, 1, 3}), ConstructionError);
    CHECK_THROWS_AS(canonical_structure(bad, Tuple{0, 1, 0, 1, 0}), ConstructionError);  // not primitive
}

TEST_CASE("D+-consistency") {
    // a deliberately small universe: the two walks of interest plus a spare
    Signature sig;
    sig.declare("p", 7);
    auto u5 = std::make_shared<AtomUniverse>();
    u5->sig = sig;
    u5->k = 5;
    u5->with_equality = false;
    u5->templates = {{"p", AdjacentFunction{{1, 2, 3, 2, 3, 4, 5}, 5}},
                     {"p", AdjacentFunction{{1, 2, 3, 4, 3, 4, 5}, 5}},
                     {"p", AdjacentFunction{{1, 2, 3, 4, 5, 4, 5}, 5}}};
    std::sort(u5->templates.begin(), u5->templates.end());

    auto any = is_d_plus_consistent(f_true(), DefectSet{3, {}}, u5);
    CHECK(any.has_value());

    auto chi = f_and({f_atom("p", {1, 2, 3, 2, 3, 4, 5}), f_not(f_atom("p", {1, 2, 3, 4, 3, 4, 5}))});
    // D = {<1,3>} over 3 positions lifts to D+ = {<2,4>} over 5
    CHECK_FALSE(is_d_plus_consistent(chi, DefectSet{3, {{1, 3}}}, u5).has_value());
    auto wit = is_d_plus_consistent(chi, DefectSet{3, {}}, u5);
    REQUIRE(wit.has_value());
    CHECK(entails(*wit, chi));
}

TEST_CASE("palindromic, blunt and hooked types arise semantically") {
    gen::Rng rng(61);
    Signature sig;
    sig.declare("q", 3);
    auto u3 = full_universe(sig, 3);
    auto u5 = full_universe(sig, 5);
    for (int round = 0; round < 40; ++round) {
        auto a = gen::random_structure(rng, sig, 4);
        int x = gen::pick(rng, 4), y = gen::pick(rng, 4);
        CHECK(is_palindromic(atp(a, {x, y, x}, u3)));
        CHECK(is_blunt(atp(a, {x, y, y}, u3)));
        // proper suffix palindrome of length 3 -> 1-hooked at level 5
        int z = gen::pick(rng, 4), w = gen::pick(rng, 4);
        CHECK(is_hooked(atp(a, {z, w, x, y, x}, u5), 1));
    }
    CHECK_THROWS_AS(is_hooked(atp(gen::random_structure(rng, sig, 2), {0, 1, 0}, u3), 1), Error);
}

TEST_CASE("consistency coincides with realizability (small exhaustive)") {
    Signature sig = sig_r2();
    for (int k = 1; k <= 3; ++k) {
        auto u = full_universe(sig, k);
        std::set<std::vector<bool>> realized;  // polarity+eq fingerprints
        for (int n = 1; n <= k; ++n) {
            for (const auto& s : gen::all_structures(sig, n)) {
                std::vector<Tuple> tuples;
                Tuple t(k, 0);
                std::function<void(int)> go = [&](int i) {
                    if (i == k) {
                        tuples.push_back(t);
                        return;
                    }
                    for (int e = 0; e < n; ++e) {
                        t[i] = e;
                        go(i + 1);
                    }
                };
                go(0);
                for (const auto& tup : tuples) {
                    auto ty = atp(s, tup, u);
                    std::vector<bool> fp = ty.polarity;
                    fp.insert(fp.end(), ty.eq.begin(), ty.eq.end());
                    realized.insert(std::move(fp));
                }
            }
        }
        std::set<std::vector<bool>> enumerated;
        for (const auto& ty : enumerate_types(u)) {
            CHECK(is_consistent(ty));
            // each enumerated type really is realized by its canonical witness
            auto [s, q] = canonical_witness(ty);
            CHECK(atp(s, q, u) == ty);
            std::vector<bool> fp = ty.polarity;
            fp.insert(fp.end(), ty.eq.begin(), ty.eq.end());
            enumerated.insert(std::move(fp));
        }
        CHECK(realized == enumerated);
    }
}

TEST_CASE("define_layer") {
    Signature sig;
    sig.declare("q", 3);
    auto u3 = full_universe(sig, 3, true);
    auto ucov = u3->covering_subuniverse();

    Structure l;
    l.domain_size = 3;
    l.height = 2;
    l.declare("q", 3);
    l.add("q", {0, 1, 0});  // primitive length 2, allowed at height 2

    IncrementalType neg{ucov, std::vector<bool>(ucov->templates.size(), false), {}};
    auto l3 = define_layer(l, {0, 1, 2}, neg);
    CHECK(l3.height == 3);
    CHECK(l3.holds("q", {0, 1, 0}));  // previously defined tuples unchanged
    CHECK(approx_equiv(truncate_to_height(l3, 2), l, 2));

    // a positive covering literal also fixes the reversal's walks
    IncrementalType pos = neg;
    int idx = ucov->index_of("q", AdjacentFunction{{1, 2, 3}, 3});
    int idx_rev = ucov->index_of("q", AdjacentFunction{{3, 2, 1}, 3});
    REQUIRE(idx >= 0);
    REQUIRE(idx_rev >= 0);
    pos.polarity[idx] = true;
    pos.polarity[idx_rev] = true;
    auto l4 = define_layer(l, {0, 1, 2}, pos);
    CHECK(l4.holds("q", {0, 1, 2}));
    CHECK(l4.holds("q", {2, 1, 0}));

    CHECK_THROWS_AS(define_layer(l, {0, 1, 1}, neg), ConstructionError);  // not primitive
    auto view = atp(l4, Tuple{0, 1, 2}, u3);
    CHECK(increment(view) == pos);
}
