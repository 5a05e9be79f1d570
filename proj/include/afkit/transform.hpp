#pragma once

// Variable-substitution operators, the normal form for AF sentences, and the
// adjacent closure.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "afkit/formula.hpp"
#include "afkit/fragments.hpp"
#include "afkit/words.hpp"

namespace afkit {

// chi^g: every variable x_i replaced by x_{g(i)}.  chi must be quantifier-free.
inline FormulaPtr substitute(const FormulaPtr& chi, const AdjacentFunction& g) {
    if (!is_quantifier_free(chi)) throw ShapeError("substitute: formula must be quantifier-free");
    std::function<FormulaPtr(const FormulaPtr&)> go = [&](const FormulaPtr& f) -> FormulaPtr {
        switch (f->kind) {
            case Kind::Atom:
            case Kind::Eq: {
                std::vector<int> args;
                args.reserve(f->args.size());
                for (int v : f->args) {
                    if (v > g.length())
                        throw DimensionError("substitute: variable x" + std::to_string(v) +
                                             " outside the substitution's domain");
                    args.push_back(g.at(v));
                }
                return f->kind == Kind::Atom ? f_atom(f->pred, std::move(args))
                                             : f_eq(args[0], args[1]);
            }
            case Kind::True:
            case Kind::False:
                return f;
            default: {
                std::vector<FormulaPtr> kids;
                kids.reserve(f->kids.size());
                for (const auto& k : f->kids) kids.push_back(go(k));
                return std::make_shared<Formula>(Formula{f->kind, {}, {}, 0, std::move(kids)});
            }
        }
    };
    return go(chi);
}

// chi^{-1}: x_h replaced by x_{level-h+1}, for quantifier-free chi over x1..x_level.
inline FormulaPtr invert(const FormulaPtr& chi, int level) {
    if (max_var(chi) > level) throw DimensionError("invert: level smaller than the formula's variables");
    return substitute(chi, reversal_fn(level));
}

// hat(chi) = chi ∧ chi^{-1}
inline FormulaPtr hat(const FormulaPtr& chi, int level) {
    return f_and({chi, invert(chi, level)});
}

// Increments every variable index (free and bound) by d.
inline FormulaPtr shift_up(const FormulaPtr& f, int d) {
    if (d == 0) return f;
    switch (f->kind) {
        case Kind::True:
        case Kind::False:
            return f;
        case Kind::Atom: {
            std::vector<int> args;
            for (int v : f->args) args.push_back(v + d);
            return f_atom(f->pred, std::move(args));
        }
        case Kind::Eq:
            return f_eq(f->args[0] + d, f->args[1] + d);
        case Kind::Forall:
        case Kind::Exists: {
            FormulaPtr body = shift_up(f->kids[0], d);
            return f->kind == Kind::Forall ? f_forall(f->var + d, std::move(body))
                                           : f_exists(f->var + d, std::move(body));
        }
        default: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids) kids.push_back(shift_up(k, d));
            return std::make_shared<Formula>(Formula{f->kind, {}, {}, 0, std::move(kids)});
        }
    }
}

// Normal form  ⋀_{i∈I} ∀x1..x_ell ∃x_{ell+1} γ_i  ∧  ∀x1..x_{ell+1} β
// with quantifier-free γ_i and β.  I is kept non-empty by inserting a
// tautological witness requirement when needed.
struct NormalForm {
    int ell = 1;
    std::vector<FormulaPtr> gammas;
    FormulaPtr beta;
    Signature sig;

    int level() const { return ell + 1; }

    FormulaPtr to_formula() const {
        std::vector<FormulaPtr> conjuncts;
        for (const auto& g : gammas) {
            FormulaPtr c = f_exists(ell + 1, g);
            for (int v = ell; v >= 1; --v) c = f_forall(v, std::move(c));
            conjuncts.push_back(std::move(c));
        }
        FormulaPtr b = beta;
        for (int v = ell + 1; v >= 1; --v) b = f_forall(v, std::move(b));
        conjuncts.push_back(std::move(b));
        return f_and(std::move(conjuncts));
    }
};

// Recognizes an already normal-form sentence; ShapeError otherwise.
inline NormalForm parse_normal_form(const FormulaPtr& f) {
    std::vector<FormulaPtr> conjuncts;
    if (f->kind == Kind::And)
        conjuncts = f->kids;
    else
        conjuncts = {f};

    struct Piece {
        int level;
        bool existential;
        FormulaPtr body;
    };
    std::vector<Piece> pieces;
    int max_level = 0;
    for (const auto& c : conjuncts) {
        FormulaPtr cur = c;
        int depth = 0;
        bool existential = false;
        while (cur->kind == Kind::Forall || cur->kind == Kind::Exists) {
            ++depth;
            if (cur->var != depth) throw ShapeError("normal form: binders must ascend x1, x2, ...");
            if (cur->kind == Kind::Exists) {
                existential = true;
                cur = cur->kids[0];
                if (!is_quantifier_free(cur))
                    throw ShapeError("normal form: body under the existential must be quantifier-free");
                break;
            }
            cur = cur->kids[0];
        }
        if (!is_quantifier_free(cur)) throw ShapeError("normal form: bodies must be quantifier-free");
        if (max_var(cur) > depth) throw ShapeError("normal form: free variables escape the prefix");
        pieces.push_back(Piece{depth, existential, cur});
        max_level = std::max(max_level, depth);
    }
    if (max_level < 2) max_level = 2;
    NormalForm nf;
    nf.ell = max_level - 1;
    std::vector<FormulaPtr> betas;
    for (const auto& p : pieces) {
        if (p.existential) {
            if (p.level != max_level)
                throw ShapeError("normal form: existential conjuncts must reach the top level");
            nf.gammas.push_back(p.body);
        } else {
            betas.push_back(shift_up(p.body, max_level - p.level));
        }
    }
    if (nf.gammas.empty()) nf.gammas.push_back(f_true());
    nf.beta = f_and(std::move(betas));
    infer_signature(f, nf.sig);
    return nf;
}

// Computes a normal-form sentence satisfiable over the same domains as phi.
// Fresh predicates are named _nf0, _nf1, ... deterministically.
inline NormalForm to_normal_form(const FormulaPtr& phi) {
    if (!is_sentence(phi)) throw Error("to_normal_form: free variables present; not a sentence");
    require_af(phi, "to_normal_form");

    Signature sig = signature_of(phi);
    const int level = std::max(2, max_var(phi));
    const int ell = level - 1;

    struct Pending {
        int level;          // v: the bound variable index of the eliminated quantifier
        bool existential;   // direction of the witness half
        FormulaPtr body;    // quantifier-free, over x1..xv
    };
    std::vector<Pending> pending;
    int counter = 0;

    // Innermost quantifier elimination: replace Q x_v chi (chi quantifier-free)
    // by a fresh atom over x1..x_{v-1} and record both defining halves.
    std::function<FormulaPtr(const FormulaPtr&)> strip = [&](const FormulaPtr& f) -> FormulaPtr {
        if (is_quantifier_free(f)) return f;
        if ((f->kind == Kind::Forall || f->kind == Kind::Exists) && is_quantifier_free(f->kids[0])) {
            const int v = f->var;
            std::string p = sig.fresh_name("_nf" + std::to_string(counter++));
            std::vector<int> args;
            for (int i = 1; i < v; ++i) args.push_back(i);
            sig.declare(p, v - 1);
            FormulaPtr head = f_atom(p, args);
            bool ex = f->kind == Kind::Exists;
            pending.push_back(Pending{v, ex, f_implies(head, f->kids[0])});
            pending.push_back(Pending{v, !ex, f_implies(f->kids[0], head)});
            return head;
        }
        std::vector<FormulaPtr> kids;
        for (const auto& k : f->kids) kids.push_back(strip(k));
        return std::make_shared<Formula>(
            Formula{f->kind, f->pred, f->args, f->var, std::move(kids)});
    };

    FormulaPtr residue = phi;
    while (!is_quantifier_free(residue)) residue = strip(residue);

    NormalForm nf;
    nf.ell = ell;
    nf.sig = sig;
    std::vector<FormulaPtr> betas{residue};
    for (const auto& p : pending) {
        FormulaPtr shifted = shift_up(p.body, level - p.level);
        if (p.existential)
            nf.gammas.push_back(std::move(shifted));
        else
            betas.push_back(std::move(shifted));
    }
    if (nf.gammas.empty()) nf.gammas.push_back(f_true());
    nf.beta = f_and(std::move(betas));
    return nf;
}

// The adjacent closure of a normal-form sentence, rearranged into a
// normal-form sentence one level down.
inline NormalForm adjacent_closure(const NormalForm& nf) {
    if (nf.ell < 1) throw ShapeError("adjacent_closure: input level must be at least 2");
    const int ell = nf.ell;
    NormalForm out;
    out.ell = ell - 1;
    out.sig = nf.sig;
    for (const auto& gamma : nf.gammas)
        for (int k = 1; k <= ell - 1; ++k)
            for (const auto& f : enumerate_adjacent(ell, k, /*final_only=*/true)) {
                AdjacentFunction fplus = f;
                fplus.values.push_back(k + 1);
                fplus.codomain = k + 1;
                out.gammas.push_back(shift_up(substitute(gamma, fplus), ell - 1 - k));
            }
    std::vector<FormulaPtr> betas;
    for (int k = 1; k <= ell; ++k)
        for (const auto& g : enumerate_adjacent(ell + 1, k))
            betas.push_back(shift_up(substitute(nf.beta, g), ell - k));
    if (out.gammas.empty()) out.gammas.push_back(f_true());
    out.beta = f_and(std::move(betas));
    return out;
}

}  // namespace afkit
