#pragma once

// End-to-end desk-scale satisfiability: iterate the reduction down to two
// variables, run the bounded model search, and elevate any model found back
// level by level, model-checking at every step.

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "afkit/fragments.hpp"
#include "afkit/reduction.hpp"
#include "afkit/sat.hpp"
#include "afkit/transform.hpp"

namespace afkit {

struct SolveReport {
    enum class Verdict { ModelFound, NoModelUpTo, ReducedOnly };
    Verdict verdict = Verdict::NoModelUpTo;
    std::optional<Structure> model;
    std::vector<std::size_t> reduction_chain;  // formula sizes, input level first
    int n_max = 0;
    bool pipeline = false;
    double wall_time_s = 0.0;
    std::string note;  // informative only; no certified completeness bound is computed
};

struct ReductionChain {
    std::vector<std::unique_ptr<Reduction>> steps;  // steps[i] reduces level L-i
    std::vector<std::size_t> sizes;
    FormulaPtr final_formula;
};

// Normal-form at each level, then the with-equality reduction until a
// two-variable sentence remains.
inline ReductionChain reduce_to_two_vars(const FormulaPtr& phi, ReductionCaps caps = {}) {
    require_af(phi, "reduce_to_two_vars");
    if (!is_sentence(phi)) throw Error("reduce_to_two_vars: sentences only");
    ReductionChain chain;
    chain.sizes.push_back(node_count(phi));
    if (max_var(phi) <= 2) {
        chain.final_formula = phi;
        return chain;
    }
    NormalForm nf;
    try {
        nf = parse_normal_form(phi);  // already normal form: no fresh predicates needed
    } catch (const ShapeError&) {
        nf = to_normal_form(phi);
    }
    while (nf.level() > 2) {
        chain.steps.push_back(std::make_unique<Reduction>(nf, ReductionVariant::WithEquality, caps));
        nf = chain.steps.back()->output().psi;
        chain.sizes.push_back(node_count(nf.to_formula()));
    }
    chain.final_formula = nf.to_formula();
    return chain;
}

inline SolveReport decide_sat_desk(const FormulaPtr& phi, int n_max, bool pipeline,
                                   SearchCaps search_caps = {}, ReductionCaps red_caps = {}) {
    auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.n_max = n_max;
    rep.pipeline = pipeline;
    rep.note =
        "model sizes are only searched up to the cap; the tower-sized completeness bound is not "
        "used as a search limit";
    require_af(phi, "decide_sat_desk");

    if (!pipeline) {
        rep.reduction_chain.push_back(node_count(phi));
        auto m = bounded_model_search(phi, n_max, search_caps);
        if (m) {
            rep.verdict = SolveReport::Verdict::ModelFound;
            rep.model = std::move(m);
        }
    } else {
        auto chain = reduce_to_two_vars(phi, red_caps);
        rep.reduction_chain = chain.sizes;
        std::optional<Structure> m;
        try {
            m = bounded_model_search(chain.final_formula, n_max, search_caps);
        } catch (const CapacityError& e) {
            rep.verdict = SolveReport::Verdict::ReducedOnly;
            rep.note = std::string("reduced to two variables; the bounded search hit a cap: ") + e.what();
            rep.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return rep;
        }
        if (m) {
            Structure cur = *m;
            for (auto it = chain.steps.rbegin(); it != chain.steps.rend(); ++it) {
                cur = (*it)->elevate_model(cur);
                if (!evaluate(cur, (*it)->input().to_formula()))
                    throw ConstructionError("pipeline: elevation failed to model-check its level");
            }
            if (!evaluate(cur, phi))
                throw ConstructionError("pipeline: the final model does not satisfy the input");
            rep.verdict = SolveReport::Verdict::ModelFound;
            rep.model = std::move(cur);
        }
    }
    if (rep.verdict == SolveReport::Verdict::ModelFound && rep.model) {
        if (!rep.model->height && !evaluate(*rep.model, phi))
            throw ConstructionError("solver: returned model fails the input formula");
    }
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace afkit
