#pragma once

// FO2 -> AF and AF(arity <= 2) -> FO2 translations, plus the transitivity
// gadget available once any non-adjacent argument sequence is admitted.

#include <functional>
#include <set>
#include <vector>

#include "afkit/formula.hpp"
#include "afkit/fragments.hpp"
#include "afkit/transform.hpp"

namespace afkit {

namespace detail {

// swaps x1 and x2 everywhere, free and bound
inline FormulaPtr transpose12(const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::True:
        case Kind::False:
            return f;
        case Kind::Atom: {
            std::vector<int> args;
            for (int v : f->args) args.push_back(v == 1 ? 2 : v == 2 ? 1 : v);
            return f_atom(f->pred, std::move(args));
        }
        case Kind::Eq: {
            auto sw = [](int v) { return v == 1 ? 2 : v == 2 ? 1 : v; };
            return f_eq(sw(f->args[0]), sw(f->args[1]));
        }
        case Kind::Forall:
        case Kind::Exists: {
            int v = f->var == 1 ? 2 : f->var == 2 ? 1 : f->var;
            FormulaPtr body = transpose12(f->kids[0]);
            return f->kind == Kind::Forall ? f_forall(v, std::move(body))
                                           : f_exists(v, std::move(body));
        }
        default: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids) kids.push_back(transpose12(k));
            return std::make_shared<Formula>(Formula{f->kind, {}, {}, 0, std::move(kids)});
        }
    }
}

}  // namespace detail

// Logically equivalent index-normal AF formula for a two-variable formula.
inline FormulaPtr fo2_to_af(const FormulaPtr& phi) {
    if (max_var(phi) > 2) throw FragmentError("fo2_to_af: only x1 and x2 may occur");
    std::function<FormulaPtr(const FormulaPtr&)> tr = [&](const FormulaPtr& f) -> FormulaPtr {
        switch (f->kind) {
            case Kind::True:
            case Kind::False:
            case Kind::Atom:
            case Kind::Eq:
                return f;  // every word over {x1,x2} is adjacent
            case Kind::Not:
                return f_not(tr(f->kids[0]));
            case Kind::And:
            case Kind::Or:
            case Kind::Implies:
            case Kind::Iff: {
                std::vector<FormulaPtr> kids;
                for (const auto& k : f->kids) kids.push_back(tr(k));
                return std::make_shared<Formula>(Formula{f->kind, {}, {}, 0, std::move(kids)});
            }
            case Kind::Forall:
            case Kind::Exists: {
                const bool uni = f->kind == Kind::Forall;
                const FormulaPtr& body = f->kids[0];
                auto fv = free_vars(body);
                auto q = [&](int v, FormulaPtr b) {
                    return uni ? f_forall(v, std::move(b)) : f_exists(v, std::move(b));
                };
                if (f->var == 1) {
                    if (!fv.count(1)) return tr(body);
                    if (!fv.count(2)) return q(1, tr(body));
                    // transpose, bind x2, then lift every index by one
                    return shift_up(q(2, tr(detail::transpose12(body))), 1);
                }
                // binding x2
                if (!fv.count(2)) return tr(body);
                if (!fv.count(1)) return tr(q(1, detail::transpose12(body)));
                return q(2, tr(body));
            }
        }
        return f;
    };
    return tr(phi);
}

namespace detail {

// negation normal form treating non-boolean nodes as opaque units
inline FormulaPtr nnf_units(const FormulaPtr& f, bool neg) {
    switch (f->kind) {
        case Kind::Not:
            return nnf_units(f->kids[0], !neg);
        case Kind::And:
        case Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids) kids.push_back(nnf_units(k, neg));
            bool conj = (f->kind == Kind::And) != neg;
            return conj ? f_and(std::move(kids)) : f_or(std::move(kids));
        }
        case Kind::Implies: {
            FormulaPtr a = nnf_units(f->kids[0], !neg);
            FormulaPtr b = nnf_units(f->kids[1], neg);
            return neg ? f_and({nnf_units(f->kids[0], false), nnf_units(f->kids[1], true)})
                       : f_or({std::move(a), std::move(b)});
        }
        case Kind::Iff: {
            FormulaPtr a = f->kids[0], b = f->kids[1];
            FormulaPtr both = f_and({nnf_units(a, false), nnf_units(b, false)});
            FormulaPtr none = f_and({nnf_units(a, true), nnf_units(b, true)});
            FormulaPtr l = f_and({nnf_units(a, false), nnf_units(b, true)});
            FormulaPtr r = f_and({nnf_units(a, true), nnf_units(b, false)});
            return neg ? f_or({std::move(l), std::move(r)}) : f_or({std::move(both), std::move(none)});
        }
        case Kind::True:
            return neg ? f_false() : f_true();
        case Kind::False:
            return neg ? f_true() : f_false();
        default:
            return neg ? f_not(f) : f;  // unit literal
    }
}

using Clause = std::vector<FormulaPtr>;

inline std::vector<Clause> distribute(const FormulaPtr& f, bool conjunctive, std::size_t cap) {
    // conjunctive: list of disjunctions; otherwise list of conjunctions
    switch (f->kind) {
        case Kind::And:
        case Kind::Or: {
            bool matches = (f->kind == Kind::And) == conjunctive;
            if (matches) {
                std::vector<Clause> out;
                for (const auto& k : f->kids) {
                    auto sub = distribute(k, conjunctive, cap);
                    out.insert(out.end(), sub.begin(), sub.end());
                    if (out.size() > cap) throw CapacityError("normal form conversion exceeded the cap");
                }
                return out;
            }
            std::vector<Clause> acc{{}};
            for (const auto& k : f->kids) {
                auto sub = distribute(k, conjunctive, cap);
                std::vector<Clause> next;
                for (const auto& a : acc)
                    for (const auto& b : sub) {
                        Clause c = a;
                        c.insert(c.end(), b.begin(), b.end());
                        next.push_back(std::move(c));
                        if (next.size() > cap)
                            throw CapacityError("normal form conversion exceeded the cap");
                    }
                acc = std::move(next);
            }
            return acc;
        }
        default:
            return {{f}};
    }
}

}  // namespace detail

// Logically equivalent FO2 sentence for an AF sentence over predicates of
// arity at most two, via the bounded-free-variable intermediate: CNF under
// universal steps, DNF under existential ones.
inline FormulaPtr af2_to_fo2(const FormulaPtr& phi, std::size_t cap = 200'000) {
    Signature sig = signature_of(phi);
    for (const auto& [p, ar] : sig.arity)
        if (ar > 2) throw Error("af2_to_fo2: predicate '" + p + "' has arity above two");
    if (!is_sentence(phi)) throw Error("af2_to_fo2: sentences only");
    require_af(phi, "af2_to_fo2");

    std::function<FormulaPtr(const FormulaPtr&)> rec = [&](const FormulaPtr& f) -> FormulaPtr {
        switch (f->kind) {
            case Kind::True:
            case Kind::False:
            case Kind::Atom:
            case Kind::Eq:
                return f;
            case Kind::Not:
                return f_not(rec(f->kids[0]));
            case Kind::And:
            case Kind::Or:
            case Kind::Implies:
            case Kind::Iff: {
                std::vector<FormulaPtr> kids;
                for (const auto& k : f->kids) kids.push_back(rec(k));
                return std::make_shared<Formula>(Formula{f->kind, {}, {}, 0, std::move(kids)});
            }
            case Kind::Forall:
            case Kind::Exists: {
                const bool uni = f->kind == Kind::Forall;
                const int v = f->var;
                FormulaPtr inner = detail::nnf_units(rec(f->kids[0]), false);
                auto clauses = detail::distribute(inner, uni, cap);
                std::vector<FormulaPtr> parts;
                for (const auto& cl : clauses) {
                    std::vector<FormulaPtr> stay, bound;
                    for (const auto& u : cl)
                        (free_vars(u).count(v) ? bound : stay).push_back(u);
                    FormulaPtr inner_b = uni ? f_or(bound) : f_and(bound);
                    FormulaPtr quantified = uni ? f_forall(v, inner_b) : f_exists(v, inner_b);
                    if (bound.empty()) quantified = uni ? f_false() : f_true();
                    stay.push_back(std::move(quantified));
                    parts.push_back(uni ? f_or(std::move(stay)) : f_and(std::move(stay)));
                }
                return uni ? f_and(std::move(parts)) : f_or(std::move(parts));
            }
        }
        return f;
    };

    FormulaPtr star = rec(phi);

    // every subformula now has at most two free variables; rename into {x1,x2}
    std::function<FormulaPtr(const FormulaPtr&, std::map<int, int>)> ren =
        [&](const FormulaPtr& f, std::map<int, int> slot) -> FormulaPtr {
        switch (f->kind) {
            case Kind::True:
            case Kind::False:
                return f;
            case Kind::Atom: {
                std::vector<int> args;
                for (int v : f->args) args.push_back(slot.at(v));
                return f_atom(f->pred, std::move(args));
            }
            case Kind::Eq:
                return f_eq(slot.at(f->args[0]), slot.at(f->args[1]));
            case Kind::Forall:
            case Kind::Exists: {
                auto fv = free_vars(f->kids[0]);
                fv.erase(f->var);
                if (fv.size() > 1) throw Error("af2_to_fo2: a subformula kept three free variables");
                int taken = fv.empty() ? 0 : slot.at(*fv.begin());
                int mine = taken == 1 ? 2 : 1;
                std::map<int, int> inner;
                if (!fv.empty()) inner[*fv.begin()] = taken;
                inner[f->var] = mine;
                FormulaPtr body = ren(f->kids[0], std::move(inner));
                return f->kind == Kind::Forall ? f_forall(mine, std::move(body))
                                               : f_exists(mine, std::move(body));
            }
            default: {
                std::vector<FormulaPtr> kids;
                for (const auto& k : f->kids) kids.push_back(ren(k, slot));
                return std::make_shared<Formula>(Formula{f->kind, {}, {}, 0, std::move(kids)});
            }
        }
    };
    return ren(star, {});
}

// phi_T for a non-adjacent argument map: any model interprets T transitively,
// and any transitive structure expands to a model.
inline FormulaPtr transitivity_formula(const AdjacentFunction& f, const std::string& t_name,
                                       const std::string& q_name) {
    validate_fn(f);
    const int m = f.length();
    const int k = f.codomain;
    int j = 0;
    for (int i = 1; i < m; ++i)
        if (std::abs(f.at(i + 1) - f.at(i)) >= 2) {
            j = i;
            break;
        }
    if (j == 0) throw Error("transitivity_formula: the map is adjacent; the gadget does not apply");
    int a = j, b = j + 1;
    if (f.at(j + 1) < f.at(j)) std::swap(a, b);  // now f(a) < f(b)
    const int lo = f.at(a), hi = f.at(b);

    FormulaPtr phi1 = f_implies([&] {
        std::vector<int> args;
        for (int i = 1; i <= m; ++i) args.push_back(i);
        return f_atom(q_name, std::move(args));
    }(), f_atom(t_name, {a, b}));
    for (int v = m; v >= 1; --v) phi1 = f_forall(v, std::move(phi1));

    std::vector<FormulaPtr> ante{f_atom(t_name, {lo, lo + 1}), f_atom(t_name, {lo + 1, lo + 2})};
    for (int i = lo + 2; i <= hi - 1; ++i) ante.push_back(f_eq(i, i + 1));
    FormulaPtr phi2 = f_implies(f_and(std::move(ante)), f_atom(q_name, f.values));
    for (int v = k; v >= 1; --v) phi2 = f_forall(v, std::move(phi2));

    return f_and({std::move(phi1), std::move(phi2)});
}

}  // namespace afkit
