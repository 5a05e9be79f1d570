#pragma once

// Fragment membership: AF / AF^[k] / AF^k, FO2, GF, and GA = GF ∩ AF.
//
// AF checking is a recursive descent tracking the quantifier depth k: in a
// context where x_{k+1} is the next variable available for binding, atoms
// must use adjacent argument sequences over x1..xk, and a quantifier may
// only bind x_{k+1}.  Inputs are expected to be index-normal already; a
// binder violating the discipline is reported, not repaired.

#include <optional>
#include <set>
#include <string>

#include "afkit/formula.hpp"
#include "afkit/words.hpp"

namespace afkit {

struct FragmentReport {
    bool in_fo2 = false;
    bool in_af = false;
    std::optional<int> af_bracket_level;   // least k with the formula in AF^[k]
    std::optional<int> af_variable_count;  // least k with the formula in AF^k
    bool in_gf = false;
    bool in_ga = false;
    bool equality_used = false;
    bool index_normal = false;
    std::string diagnostic;  // first violation found, empty when in_af
};

namespace detail {

inline bool word_adjacent(const std::vector<int>& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (std::abs(w[i + 1] - w[i]) > 1) return false;
    return true;
}

// Strict discipline at context level k.  On failure fills `why` and reports
// whether the failure was a broken binder index (non-index-normal input).
inline bool af_check(const FormulaPtr& f, int k, std::string& why, bool& binder_violation) {
    switch (f->kind) {
        case Kind::True:
        case Kind::False:
            return true;
        case Kind::Atom:
        case Kind::Eq: {
            for (int a : f->args)
                if (a > k) {
                    why = "atom " + print(f) + " uses x" + std::to_string(a) +
                          " in a context admitting only x1..x" + std::to_string(k);
                    binder_violation = true;
                    return false;
                }
            if (!word_adjacent(f->args)) {
                why = "argument sequence of " + print(f) + " is not adjacent";
                return false;
            }
            return true;
        }
        case Kind::Not:
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
        case Kind::Iff: {
            for (const auto& kid : f->kids)
                if (!af_check(kid, k, why, binder_violation)) return false;
            return true;
        }
        case Kind::Forall:
        case Kind::Exists: {
            // clause (3) is upward closed: a binder of x_m is admissible in any
            // context admitting x_{m}..; it may not jump above x_{k+1}
            if (f->var > k + 1) {
                why = "quantifier binds x" + std::to_string(f->var) + " where at most x" +
                      std::to_string(k + 1) + " is available";
                binder_violation = true;
                return false;
            }
            return af_check(f->kids[0], f->var, why, binder_violation);
        }
    }
    return false;
}

inline bool gf_check(const FormulaPtr& f);

inline bool guard_ok(const FormulaPtr& guard, const std::set<int>& quantified,
                     const std::set<int>& rest_free) {
    if (guard->kind != Kind::Atom && guard->kind != Kind::Eq) return false;
    std::set<int> gv(guard->args.begin(), guard->args.end());
    for (int v : quantified)
        if (!gv.count(v)) return false;
    for (int v : rest_free)
        if (!gv.count(v)) return false;
    return true;
}

inline bool gf_quantified(const FormulaPtr& f) {
    Kind q = f->kind;
    std::set<int> quantified;
    FormulaPtr body = f;
    while (body->kind == q) {
        quantified.insert(body->var);
        body = body->kids[0];
    }
    if (q == Kind::Forall) {
        if (body->kind != Kind::Implies) return false;
        const FormulaPtr& guard = body->kids[0];
        const FormulaPtr& rest = body->kids[1];
        return guard_ok(guard, quantified, free_vars(rest)) && gf_check(rest);
    }
    // Exists: either a bare atom, or a conjunction whose first member guards the rest.
    if (body->kind == Kind::Atom || body->kind == Kind::Eq)
        return guard_ok(body, quantified, {});
    if (body->kind != Kind::And || body->kids.empty()) return false;
    const FormulaPtr& guard = body->kids[0];
    std::set<int> rest_free;
    for (std::size_t i = 1; i < body->kids.size(); ++i) {
        auto fv = free_vars(body->kids[i]);
        rest_free.insert(fv.begin(), fv.end());
        if (!gf_check(body->kids[i])) return false;
    }
    return guard_ok(guard, quantified, rest_free);
}

inline bool gf_check(const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::True:
        case Kind::False:
        case Kind::Atom:
        case Kind::Eq:
            return true;
        case Kind::Not:
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
        case Kind::Iff:
            for (const auto& kid : f->kids)
                if (!gf_check(kid)) return false;
            return true;
        case Kind::Forall:
        case Kind::Exists:
            return gf_quantified(f);
    }
    return false;
}

}  // namespace detail

inline FragmentReport check_fragments(const FormulaPtr& f) {
    FragmentReport r;
    r.equality_used = uses_equality(f);
    r.in_fo2 = max_var(f) <= 2;

    int k0 = 0;
    for (int v : free_vars(f)) k0 = std::max(k0, v);
    bool binder_violation = false;
    std::string why;
    r.in_af = detail::af_check(f, k0, why, binder_violation);
    r.index_normal = r.in_af || !binder_violation;
    r.diagnostic = why;
    if (r.in_af) {
        r.af_bracket_level = k0;
        r.af_variable_count = max_var(f);
    }
    r.in_gf = detail::gf_check(f);
    r.in_ga = r.in_af && r.in_gf;
    return r;
}

// Membership in AF^[k] for a given bracket level.
inline bool in_af_bracket(const FormulaPtr& f, int k) {
    std::string why;
    bool binder = false;
    for (int v : free_vars(f))
        if (v > k) return false;
    return detail::af_check(f, k, why, binder);
}

// Throws when the formula is outside the strict index-normal AF discipline;
// transformations require this rather than guessing a re-indexing.
inline void require_af(const FormulaPtr& f, const std::string& who) {
    auto r = check_fragments(f);
    if (!r.in_af)
        throw FragmentError(who + ": formula is not an index-normal AF formula (" + r.diagnostic + ")");
}

}  // namespace afkit
