#include <catch2/catch_amalgamated.hpp>

#include "afkit/parser.hpp"
#include "afkit/solver.hpp"
#include "gen_helpers.hpp"

using namespace afkit;

namespace {

FormulaPtr coupled_af3(bool satisfiable) {
    // three-variable normal-form sentence over a binary predicate with a
    // coupled universal part; one variant is made contradictory
    NormalForm nf;
    nf.ell = 2;
    nf.sig.declare("r", 2);
    nf.gammas = {parse("(r x2 x3)")};
    std::vector<FormulaPtr> beta{f_iff(parse("(r x1 x2)"), parse("(r x2 x1)")),
                                 f_iff(parse("(r x1 x1)"), parse("(r x2 x2)")),
                                 f_iff(parse("(r x2 x3)"), parse("(r x3 x2)")),
                                 f_iff(parse("(r x2 x2)"), parse("(r x3 x3)"))};
    if (!satisfiable) beta.push_back(f_not(parse("(r x2 x3)")));
    nf.beta = f_and(std::move(beta));
    return nf.to_formula();
}

}  // namespace

TEST_CASE("identity chain for two-variable input") {
    auto phi = parse("(forall x1 (exists x2 (r x1 x2)))");
    auto chain = reduce_to_two_vars(phi);
    CHECK(chain.steps.empty());
    CHECK(chain.sizes.size() == 1);
    CHECK(struct_eq(chain.final_formula, phi));
}

TEST_CASE("three-variable input reduces in one step") {
    auto chain = reduce_to_two_vars(coupled_af3(true));
    CHECK(chain.steps.size() == 1);
    CHECK(chain.sizes.size() == 2);
    CHECK(max_var(chain.final_formula) <= 2);
    CHECK(check_fragments(chain.final_formula).in_af);
}

TEST_CASE("both solver modes agree") {
    for (bool satisfiable : {true, false}) {
        auto phi = coupled_af3(satisfiable);
        auto direct = decide_sat_desk(phi, 3, false);
        auto piped = decide_sat_desk(phi, 3, true);
        INFO("satisfiable = " << satisfiable);
        if (satisfiable) {
            CHECK(direct.verdict == SolveReport::Verdict::ModelFound);
            CHECK(piped.verdict == SolveReport::Verdict::ModelFound);
            REQUIRE(direct.model.has_value());
            CHECK(evaluate(*direct.model, phi));
            REQUIRE(piped.model.has_value());
            CHECK(evaluate(*piped.model, phi));  // pipeline elevation model-checks the input
        } else {
            CHECK(direct.verdict == SolveReport::Verdict::NoModelUpTo);
            CHECK(piped.verdict == SolveReport::Verdict::NoModelUpTo);
        }
    }
}

TEST_CASE("reports are deterministic") {
    auto phi = coupled_af3(true);
    auto a = decide_sat_desk(phi, 3, true);
    auto b = decide_sat_desk(phi, 3, true);
    REQUIRE(a.model.has_value());
    REQUIRE(b.model.has_value());
    CHECK(*a.model == *b.model);
    CHECK(a.reduction_chain == b.reduction_chain);
}

TEST_CASE("non-AF input is rejected") {
    CHECK_THROWS_AS(decide_sat_desk(parse("(forall x1 (forall x2 (forall x3 (p x1 x3 x2))))"), 2, false),
                    FragmentError);
}
