#pragma once

// First-order AST over a relational signature with indexed variables x1, x2, ...
// Trees are immutable and shared; all transformations build new nodes.

#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "afkit/errors.hpp"

namespace afkit {

enum class Kind { True, False, Atom, Eq, Not, And, Or, Implies, Iff, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    Kind kind;
    std::string pred;             // Atom only
    std::vector<int> args;        // Atom: argument variable indices; Eq: {i, j}
    int var = 0;                  // Forall / Exists
    std::vector<FormulaPtr> kids;
};

inline FormulaPtr f_true() {
    static FormulaPtr t = std::make_shared<Formula>(Formula{Kind::True, {}, {}, 0, {}});
    return t;
}
inline FormulaPtr f_false() {
    static FormulaPtr f = std::make_shared<Formula>(Formula{Kind::False, {}, {}, 0, {}});
    return f;
}
inline FormulaPtr f_atom(std::string pred, std::vector<int> args) {
    for (int a : args)
        if (a < 1) throw Error("variable indices must be >= 1");
    return std::make_shared<Formula>(Formula{Kind::Atom, std::move(pred), std::move(args), 0, {}});
}
inline FormulaPtr f_eq(int i, int j) {
    if (i < 1 || j < 1) throw Error("variable indices must be >= 1");
    return std::make_shared<Formula>(Formula{Kind::Eq, {}, {i, j}, 0, {}});
}
inline FormulaPtr f_not(FormulaPtr a) {
    return std::make_shared<Formula>(Formula{Kind::Not, {}, {}, 0, {std::move(a)}});
}
inline FormulaPtr f_and(std::vector<FormulaPtr> kids) {
    if (kids.empty()) return f_true();
    if (kids.size() == 1) return kids[0];
    return std::make_shared<Formula>(Formula{Kind::And, {}, {}, 0, std::move(kids)});
}
inline FormulaPtr f_or(std::vector<FormulaPtr> kids) {
    if (kids.empty()) return f_false();
    if (kids.size() == 1) return kids[0];
    return std::make_shared<Formula>(Formula{Kind::Or, {}, {}, 0, std::move(kids)});
}
inline FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{Kind::Implies, {}, {}, 0, {std::move(a), std::move(b)}});
}
inline FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{Kind::Iff, {}, {}, 0, {std::move(a), std::move(b)}});
}
inline FormulaPtr f_forall(int v, FormulaPtr body) {
    if (v < 1) throw Error("variable indices must be >= 1");
    return std::make_shared<Formula>(Formula{Kind::Forall, {}, {}, v, {std::move(body)}});
}
inline FormulaPtr f_exists(int v, FormulaPtr body) {
    if (v < 1) throw Error("variable indices must be >= 1");
    return std::make_shared<Formula>(Formula{Kind::Exists, {}, {}, v, {std::move(body)}});
}

inline bool struct_eq(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind || a->pred != b->pred || a->args != b->args || a->var != b->var ||
        a->kids.size() != b->kids.size())
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!struct_eq(a->kids[i], b->kids[i])) return false;
    return true;
}

inline std::size_t node_count(const FormulaPtr& f) {
    std::size_t n = 1;
    for (const auto& k : f->kids) n += node_count(k);
    return n;
}

inline int max_var(const FormulaPtr& f) {
    int m = 0;
    for (int a : f->args) m = std::max(m, a);
    m = std::max(m, f->var);
    for (const auto& k : f->kids) m = std::max(m, max_var(k));
    return m;
}

inline void collect_free_vars(const FormulaPtr& f, std::set<int>& out, std::set<int> bound = {}) {
    switch (f->kind) {
        case Kind::Atom:
        case Kind::Eq:
            for (int a : f->args)
                if (!bound.count(a)) out.insert(a);
            break;
        case Kind::Forall:
        case Kind::Exists: {
            bound.insert(f->var);
            collect_free_vars(f->kids[0], out, std::move(bound));
            break;
        }
        default:
            for (const auto& k : f->kids) collect_free_vars(k, out, bound);
    }
}

inline std::set<int> free_vars(const FormulaPtr& f) {
    std::set<int> out;
    collect_free_vars(f, out);
    return out;
}

inline bool is_sentence(const FormulaPtr& f) { return free_vars(f).empty(); }

inline bool is_quantifier_free(const FormulaPtr& f) {
    if (f->kind == Kind::Forall || f->kind == Kind::Exists) return false;
    for (const auto& k : f->kids)
        if (!is_quantifier_free(k)) return false;
    return true;
}

// predicate name -> arity; equality is built in and never listed
struct Signature {
    std::map<std::string, int> arity;

    bool contains(const std::string& p) const { return arity.count(p) != 0; }
    void declare(const std::string& p, int ar) {
        auto [it, fresh] = arity.emplace(p, ar);
        if (!fresh && it->second != ar)
            throw Error("arity mismatch for predicate '" + p + "': " + std::to_string(it->second) +
                        " vs " + std::to_string(ar));
    }
    void merge(const Signature& o) {
        for (auto& [p, ar] : o.arity) declare(p, ar);
    }
    std::string fresh_name(const std::string& stem) const {
        if (!contains(stem)) return stem;
        for (int i = 0;; ++i) {
            std::string cand = stem + "_" + std::to_string(i);
            if (!contains(cand)) return cand;
        }
    }
};

inline void infer_signature(const FormulaPtr& f, Signature& sig) {
    if (f->kind == Kind::Atom) sig.declare(f->pred, static_cast<int>(f->args.size()));
    for (const auto& k : f->kids) infer_signature(k, sig);
}

inline Signature signature_of(const FormulaPtr& f) {
    Signature sig;
    infer_signature(f, sig);
    return sig;
}

inline bool uses_equality(const FormulaPtr& f) {
    if (f->kind == Kind::Eq) return true;
    for (const auto& k : f->kids)
        if (uses_equality(k)) return true;
    return false;
}

inline void print_to(const FormulaPtr& f, std::ostream& os) {
    switch (f->kind) {
        case Kind::True: os << "true"; return;
        case Kind::False: os << "false"; return;
        case Kind::Atom:
            os << "(" << f->pred;
            for (int a : f->args) os << " x" << a;
            os << ")";
            return;
        case Kind::Eq: os << "(= x" << f->args[0] << " x" << f->args[1] << ")"; return;
        case Kind::Not:
            os << "(not ";
            print_to(f->kids[0], os);
            os << ")";
            return;
        case Kind::And:
        case Kind::Or: {
            os << (f->kind == Kind::And ? "(and" : "(or");
            for (const auto& k : f->kids) {
                os << " ";
                print_to(k, os);
            }
            os << ")";
            return;
        }
        case Kind::Implies:
        case Kind::Iff: {
            os << (f->kind == Kind::Implies ? "(-> " : "(<-> ");
            print_to(f->kids[0], os);
            os << " ";
            print_to(f->kids[1], os);
            os << ")";
            return;
        }
        case Kind::Forall:
        case Kind::Exists: {
            os << (f->kind == Kind::Forall ? "(forall x" : "(exists x") << f->var << " ";
            print_to(f->kids[0], os);
            os << ")";
            return;
        }
    }
}

inline std::string print(const FormulaPtr& f) {
    std::ostringstream os;
    print_to(f, os);
    return os.str();
}

}  // namespace afkit
