#pragma once

// Finite relational structures, layered structures, Tarskian evaluation,
// approximate equivalence on primitive lengths, and Cartesian inflation.
//
// Elements are dense integers 0..n-1; external names live in the JSON layer.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "afkit/formula.hpp"
#include "afkit/fragments.hpp"
#include "afkit/words.hpp"

namespace afkit {

using Tuple = std::vector<int>;

struct Relation {
    int arity = 0;
    std::set<Tuple> tuples;

    bool operator==(const Relation&) const = default;
};

struct Structure {
    int domain_size = 0;
    std::map<std::string, Relation> relations;
    std::optional<int> height;  // set: layered, defined only on primitive length <= height

    bool holds(const std::string& pred, const Tuple& t) const {
        auto it = relations.find(pred);
        return it != relations.end() && it->second.tuples.count(t) != 0;
    }
    void declare(const std::string& pred, int arity) {
        auto [it, fresh] = relations.emplace(pred, Relation{arity, {}});
        if (!fresh && it->second.arity != arity)
            throw Error("relation '" + pred + "' arity clash");
    }
    void add(const std::string& pred, Tuple t) {
        declare(pred, static_cast<int>(t.size()));
        for (int e : t)
            if (e < 0 || e >= domain_size) throw Error("tuple entry outside the domain");
        relations[pred].tuples.insert(std::move(t));
    }

    bool operator==(const Structure&) const = default;
};

// Validates the layered invariant: stored tuples have primitive length <= height.
inline void validate_layered(const Structure& a) {
    if (!a.height) return;
    for (const auto& [p, rel] : a.relations)
        for (const auto& t : rel.tuples)
            if (!t.empty() && primitive_length(t) > *a.height)
                throw FragmentError("layered structure of height " + std::to_string(*a.height) +
                                    " stores a tuple of larger primitive length in '" + p + "'");
}

// Forgets all tuples of primitive length beyond the given height.
inline Structure truncate_to_height(const Structure& a, int height) {
    Structure out;
    out.domain_size = a.domain_size;
    out.height = height;
    for (const auto& [p, rel] : a.relations) {
        Relation r{rel.arity, {}};
        for (const auto& t : rel.tuples)
            if (t.empty() || primitive_length(t) <= height) r.tuples.insert(t);
        out.relations.emplace(p, std::move(r));
    }
    return out;
}

namespace detail {

// Dense per-relation bitmaps make atom queries O(arity); relations too large
// to densify fall back to set lookups.
struct DenseIndex {
    int n = 0;
    std::map<std::string, std::vector<bool>> maps;

    explicit DenseIndex(const Structure& a) : n(a.domain_size) {
        for (const auto& [p, rel] : a.relations) {
            double cells = 1;
            for (int i = 0; i < rel.arity; ++i) cells *= std::max(1, n);
            if (cells > (1u << 26)) continue;
            std::vector<bool> bits(static_cast<std::size_t>(cells), false);
            for (const auto& t : rel.tuples) {
                std::size_t idx = 0;
                for (int e : t) idx = idx * n + e;
                bits[idx] = true;
            }
            maps.emplace(p, std::move(bits));
        }
    }
};

struct Evaluator {
    const Structure& a;
    std::vector<int> env;  // env[v] = element assigned to x_v (1-based)
    const DenseIndex* dense = nullptr;
    Tuple scratch;

    bool run(const FormulaPtr& f) {
        switch (f->kind) {
            case Kind::True: return true;
            case Kind::False: return false;
            case Kind::Eq: return env[f->args[0]] == env[f->args[1]];
            case Kind::Atom: {
                if (a.height && static_cast<int>(f->args.size()) > *a.height) {
                    scratch.clear();
                    for (int v : f->args) scratch.push_back(env[v]);
                    if (!scratch.empty() && primitive_length(scratch) > *a.height)
                        throw FragmentError(
                            "evaluation queried a tuple of primitive length above the height");
                }
                if (dense) {
                    auto it = dense->maps.find(f->pred);
                    if (it != dense->maps.end()) {
                        std::size_t idx = 0;
                        for (int v : f->args) idx = idx * a.domain_size + env[v];
                        return it->second[idx];
                    }
                }
                scratch.clear();
                for (int v : f->args) scratch.push_back(env[v]);
                return a.holds(f->pred, scratch);
            }
            case Kind::Not: return !run(f->kids[0]);
            case Kind::And:
                for (const auto& k : f->kids)
                    if (!run(k)) return false;
                return true;
            case Kind::Or:
                for (const auto& k : f->kids)
                    if (run(k)) return true;
                return false;
            case Kind::Implies: return !run(f->kids[0]) || run(f->kids[1]);
            case Kind::Iff: return run(f->kids[0]) == run(f->kids[1]);
            case Kind::Forall: {
                int saved = env[f->var];
                bool ok = true;
                for (int e = 0; e < a.domain_size && ok; ++e) {
                    env[f->var] = e;
                    ok = run(f->kids[0]);
                }
                env[f->var] = saved;
                return ok;
            }
            case Kind::Exists: {
                int saved = env[f->var];
                bool ok = false;
                for (int e = 0; e < a.domain_size && !ok; ++e) {
                    env[f->var] = e;
                    ok = run(f->kids[0]);
                }
                env[f->var] = saved;
                return ok;
            }
        }
        return false;
    }
};

}  // namespace detail

// Standard Tarskian truth value.  On a layered structure the formula must be
// in AF^{height}; the per-atom assertion then never fires (the approximation
// lemma), and firing signals a bug.
inline bool evaluate(const Structure& a, const FormulaPtr& f,
                     const std::map<int, int>& assignment = {}) {
    for (int v : free_vars(f))
        if (!assignment.count(v)) throw Error("assignment does not cover free variable x" + std::to_string(v));
    if (a.height) {
        auto rep = check_fragments(f);
        if (!rep.in_af || max_var(f) > *a.height)
            throw FragmentError("layered evaluation requires an AF^" + std::to_string(*a.height) +
                                " formula");
    }
    detail::DenseIndex dense(a);
    detail::Evaluator ev{a, std::vector<int>(static_cast<std::size_t>(max_var(f)) + 1, 0), &dense, {}};
    for (auto [v, e] : assignment) {
        if (e < 0 || e >= a.domain_size) throw Error("assignment maps x" + std::to_string(v) + " outside the domain");
        if (v >= 1 && v < static_cast<int>(ev.env.size())) ev.env[v] = e;
    }
    return ev.run(f);
}

// True iff the two structures agree on every tuple of primitive length <= ell.
inline bool approx_equiv(const Structure& a, const Structure& b, int ell) {
    if (a.domain_size != b.domain_size) throw DimensionError("approx_equiv: domains differ");
    for (const auto& [p, rel] : a.relations) {
        auto it = b.relations.find(p);
        if (it != b.relations.end() && it->second.arity != rel.arity)
            throw DimensionError("approx_equiv: signature mismatch on '" + p + "'");
    }
    auto one_sided = [&](const Structure& x, const Structure& y) {
        for (const auto& [p, rel] : x.relations)
            for (const auto& t : rel.tuples) {
                if (y.holds(p, t)) continue;
                if (t.empty() || primitive_length(t) <= ell) return false;
            }
        return true;
    };
    return one_sided(a, b) && one_sided(b, a);
}

// Cartesian inflation: domain B x H with p on <b1,h1>...<bk,hk> iff p on b1...bk.
// Elements of the product are encoded as b * h_count + h.
inline Structure product(const Structure& b, int h_count,
                         std::size_t tuple_cap = 50'000'000) {
    if (h_count <= 0) throw Error("product: H must be non-empty");
    Structure out;
    out.domain_size = b.domain_size * h_count;
    for (const auto& [p, rel] : b.relations) {
        out.declare(p, rel.arity);
        Relation& r = out.relations[p];
        std::size_t total = rel.tuples.size();
        for (int i = 0; i < rel.arity; ++i) {
            total *= static_cast<std::size_t>(h_count);
            if (total > tuple_cap) throw CapacityError("product: tuple cap exceeded for '" + p + "'");
        }
        for (const auto& t : rel.tuples) {
            Tuple lifted(t.size());
            std::function<void(std::size_t)> go = [&](std::size_t i) {
                if (i == t.size()) {
                    r.tuples.insert(lifted);
                    return;
                }
                for (int h = 0; h < h_count; ++h) {
                    lifted[i] = t[i] * h_count + h;
                    go(i + 1);
                }
            };
            go(0);
        }
    }
    return out;
}

}  // namespace afkit
