#include <catch2/catch_amalgamated.hpp>

#include "afkit/formula.hpp"
#include "afkit/fragments.hpp"
#include "afkit/parser.hpp"
#include "afkit/transform.hpp"
#include "gen_helpers.hpp"

using namespace afkit;

TEST_CASE("parse and print round-trip") {
    CHECK(print(parse("(forall x1 (R x1 x1))")) == "(forall x1 (R x1 x1))");
    auto sym = parse("(forall x1 (forall x2 (-> (r x1 x2) (r x2 x1))))");
    CHECK(struct_eq(parse(print(sym)), sym));
    CHECK_THROWS_AS(parse("(exists x1"), ParseError);
    CHECK_THROWS_AS(parse("(and)"), ParseError);
    CHECK_THROWS_AS(parse("(forall x0 (p x0))"), ParseError);
    CHECK_THROWS_AS(parse("(and (p x1) (p x1 x2))"), ParseError);  // arity clash
    CHECK(parse("true")->kind == Kind::True);

    gen::Rng rng(42);
    Signature sig;
    sig.declare("p", 1);
    sig.declare("r", 2);
    for (int i = 0; i < 200; ++i) {
        auto f = gen::random_af_sentence(rng, 3, sig, true);
        CHECK(struct_eq(parse(print(f)), f));
    }
}

TEST_CASE("fragment membership") {
    // Eq. (1): a 5-variable adjacent validity
    auto eq1 = parse(
        "(forall x1 (forall x2 (forall x3 (exists x4 (forall x5 "
        "(-> (p x1 x2 x3 x2 x3 x4 x5) (p x1 x2 x3 x4 x3 x4 x5)))))))");
    auto r1 = check_fragments(eq1);
    CHECK(r1.in_af);
    CHECK(r1.af_variable_count == 5);
    CHECK(r1.af_bracket_level == 0);
    CHECK_FALSE(r1.in_fo2);

    auto bad = parse("(forall x1 (forall x2 (forall x3 (p x1 x3 x2))))");
    auto r2 = check_fragments(bad);
    CHECK_FALSE(r2.in_af);
    CHECK(r2.index_normal);  // the discipline holds; the atom is just not adjacent

    auto prop = check_fragments(parse("(P)"));
    CHECK(prop.in_af);
    CHECK(prop.af_bracket_level == 0);
    CHECK(prop.af_variable_count == 0);

    CHECK(check_fragments(parse("(forall x1 (r x1 x1))")).in_af);
    CHECK(check_fragments(parse("(forall x1 (forall x2 (-> (r x1 x2) (r x2 x1))))")).in_af);

    auto skip = check_fragments(parse("(forall x2 (p x2))"));
    CHECK_FALSE(skip.in_af);
    CHECK_FALSE(skip.index_normal);

    auto guarded = parse("(forall x1 (forall x2 (-> (g x1 x2) (exists x3 (and (g x2 x3) (p x3))))))");
    auto r3 = check_fragments(guarded);
    CHECK(r3.in_af);
    CHECK(r3.in_gf);
    CHECK(r3.in_ga);
    CHECK_FALSE(check_fragments(parse("(forall x1 (forall x2 (r x1 x2)))")).in_gf);
    CHECK(check_fragments(parse("(not (exists x1 (exists x2 (q x1 x2))))")).in_gf);
    CHECK(check_fragments(parse("(= x1 x2)")).equality_used);
    CHECK(check_fragments(parse("(= x1 x1)")).in_af);
    CHECK_FALSE(check_fragments(parse("(exists x1 (exists x2 (exists x3 (= x1 x3))))")).in_af);
}

TEST_CASE("substitution") {
    auto chi = parse("(p x1 x2)");
    CHECK(print(substitute(chi, AdjacentFunction{{2, 3}, 3})) == "(p x2 x3)");
    CHECK(print(substitute(parse("(p x1 x2 x1)"), AdjacentFunction{{1, 1}, 1})) == "(p x1 x1 x1)");
    CHECK_THROWS_AS(substitute(parse("(forall x1 (p x1))"), identity_fn(1)), ShapeError);

    // composition: (chi^g)^h == chi^(h o g) on random quantifier-free formulas
    gen::Rng rng(7);
    Signature sig;
    sig.declare("p", 2);
    sig.declare("q", 3);
    for (int i = 0; i < 200; ++i) {
        auto f = gen::random_qf(rng, 3, sig, true);
        auto gs = enumerate_adjacent(3, 4);
        auto hs = enumerate_adjacent(4, 3);
        const auto& g = gs[gen::pick(rng, (int)gs.size())];
        const auto& h = hs[gen::pick(rng, (int)hs.size())];
        CHECK(struct_eq(substitute(substitute(f, g), h), substitute(f, compose_fn(h, g))));
    }
}

TEST_CASE("inversion and hat") {
    CHECK(print(invert(parse("(p x1 x2)"), 2)) == "(p x2 x1)");
    gen::Rng rng(11);
    Signature sig;
    sig.declare("p", 2);
    for (int i = 0; i < 100; ++i) {
        auto f = gen::random_qf(rng, 3, sig, true);
        CHECK(struct_eq(invert(invert(f, 3), 3), f));
    }
    // hat is semantically idempotent: evaluate hat(hat(chi)) == hat(chi) on
    // exhaustive 2-element structures.
    Signature s2;
    s2.declare("p", 2);
    for (int i = 0; i < 40; ++i) {
        auto chi = gen::random_qf(rng, 2, s2, false);
        auto h1 = hat(chi, 2);
        auto h2 = hat(h1, 2);
        for (const auto& a : gen::all_structures(s2, 2))
            for (int e1 = 0; e1 < 2; ++e1)
                for (int e2 = 0; e2 < 2; ++e2) {
                    std::map<int, int> asg{{1, e1}, {2, e2}};
                    CHECK(evaluate(a, h1, asg) == evaluate(a, h2, asg));
                }
    }
}

TEST_CASE("substitution lemma: evaluate(chi^g, a) == evaluate(chi, a^g)") {
    gen::Rng rng(13);
    Signature sig;
    sig.declare("p", 2);
    sig.declare("q", 1);
    for (int round = 0; round < 150; ++round) {
        auto chi = gen::random_qf(rng, 2, sig, true);
        auto a = gen::random_structure(rng, sig, 3);
        for (const auto& g : enumerate_adjacent(2, 3)) {
            Tuple t = {gen::pick(rng, 3), gen::pick(rng, 3), gen::pick(rng, 3)};
            Tuple tg;
            for (int v : g.values) tg.push_back(t[v - 1]);
            std::map<int, int> whole{{1, t[0]}, {2, t[1]}, {3, t[2]}};
            std::map<int, int> walked{{1, tg[0]}, {2, tg.size() > 1 ? tg[1] : 0}};
            CHECK(evaluate(a, substitute(chi, g), whole) == evaluate(a, chi, walked));
        }
    }
}

TEST_CASE("normal form shapes") {
    auto nf1 = to_normal_form(parse("(P)"));
    CHECK(nf1.ell == 1);
    REQUIRE(nf1.gammas.size() == 1);
    CHECK(struct_eq(nf1.gammas[0], f_true()));
    auto shaped = parse_normal_form(nf1.to_formula());
    CHECK(shaped.ell == 1);

    auto nf2 = to_normal_form(parse("(forall x1 (exists x2 (r x1 x2)))"));
    CHECK(nf2.ell == 1);
    bool has_r_gamma = false;
    for (const auto& g : nf2.gammas)
        if (print(g).find("(r x1 x2)") != std::string::npos) has_r_gamma = true;
    CHECK(has_r_gamma);

    CHECK_THROWS_AS(to_normal_form(parse("(p x1)")), Error);                 // not a sentence
    CHECK_THROWS_AS(parse_normal_form(parse("(forall x2 (p x2))")), ShapeError);
}

TEST_CASE("normal form preserves satisfiability per domain size") {
    gen::Rng rng(17);
    Signature sig;
    sig.declare("p", 1);
    sig.declare("r", 2);
    int checked = 0;
    for (int round = 0; round < 60; ++round) {
        auto phi = gen::random_af_sentence(rng, 3, sig, false);
        NormalForm nf;
        try {
            nf = to_normal_form(phi);
        } catch (const Error&) {
            continue;
        }
        if (nf.sig.arity.size() > 6) continue;
        auto psi = nf.to_formula();
        CHECK(check_fragments(psi).in_af);
        CHECK_FALSE(uses_equality(psi));
        for (int n = 1; n <= 2; ++n) {
            bool lhs = gen::sat_brute(phi, sig, n);
            bool rhs = gen::sat_brute(psi, nf.sig, n);
            INFO("phi = " << print(phi) << " at n = " << n);
            CHECK(lhs == rhs);
        }
        ++checked;
        if (checked >= 25) break;
    }
    CHECK(checked >= 10);
}

TEST_CASE("adjacent closure") {
    // ell = 1: closure of forall x1 exists x2 gamma ∧ forall x1 x2 beta
    auto nf = parse_normal_form(
        parse("(and (forall x1 (exists x2 (r x1 x2))) (forall x1 (forall x2 (-> (r x1 x2) (r x2 x1)))))"));
    CHECK(nf.ell == 1);
    auto cl = adjacent_closure(nf);
    CHECK(cl.ell == 0);
    // beta part contains beta^{[1,1]}
    std::string btext = print(cl.beta);
    CHECK(btext.find("(-> (r x1 x1) (r x1 x1))") != std::string::npos);

    // conjunct counts: |I| * sum_k |final A^ell_k| existential instances and
    // sum_k |A^{ell+1}_k| universal instances
    gen::Rng rng(23);
    Signature sig;
    sig.declare("r", 2);
    for (int ell = 1; ell <= 3; ++ell) {
        auto rnf = gen::random_normal_form(rng, ell, sig, false, 2);
        auto acl = adjacent_closure(rnf);
        std::size_t expect_gamma = 0;
        for (int k = 1; k <= ell - 1; ++k)
            expect_gamma += enumerate_adjacent(ell, k, true).size() * rnf.gammas.size();
        std::size_t expect_beta = 0;
        for (int k = 1; k <= ell; ++k) expect_beta += enumerate_adjacent(ell + 1, k).size();
        if (expect_gamma == 0) expect_gamma = 1;  // tautological padding
        CHECK(acl.gammas.size() == expect_gamma);
        std::size_t beta_count = acl.beta->kind == Kind::And ? acl.beta->kids.size() : 1;
        CHECK(beta_count == expect_beta);
    }
}

TEST_CASE("acl soundness: any model of phi models acl(phi)") {
    gen::Rng rng(29);
    Signature sig;
    sig.declare("p", 1);
    sig.declare("r", 2);
    int found = 0;
    for (int round = 0; round < 400 && found < 40; ++round) {
        auto nf = gen::random_normal_form(rng, 2, sig, false, 1);
        auto phi = nf.to_formula();
        auto acl = adjacent_closure(nf).to_formula();
        CHECK(check_fragments(acl).in_af);
        for (int n = 1; n <= 3; ++n) {
            auto a = gen::random_structure(rng, sig, n);
            if (evaluate(a, phi)) {
                INFO("phi = " << print(phi));
                CHECK(evaluate(a, acl));
                ++found;
            }
        }
    }
    CHECK(found >= 20);
}
