#pragma once

// Adjacent k-types and incremental k-types over restricted atom universes,
// their consistency via canonical witnesses, D-compatibility, canonical
// structures, D+-consistency, and layer-by-layer structure elevation.
//
// An atom universe fixes the adjacent atom templates (predicate, course)
// under consideration; restricted universes keep only substitution instances
// of argument sequences occurring in a reference formula, which is what keeps
// type enumeration tractable.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "afkit/formula.hpp"
#include "afkit/structures.hpp"
#include "afkit/transform.hpp"
#include "afkit/words.hpp"

namespace afkit {

struct AtomTemplate {
    std::string pred;
    AdjacentFunction fn;

    bool operator==(const AtomTemplate&) const = default;
    auto operator<=>(const AtomTemplate&) const = default;
};

struct AtomUniverse {
    Signature sig;
    int k = 0;
    bool with_equality = true;
    std::vector<AtomTemplate> templates;  // sorted, unique

    int eq_pair_count() const { return (with_equality && k >= 2) ? k - 1 : 0; }

    int index_of(const std::string& pred, const AdjacentFunction& fn) const {
        AtomTemplate probe{pred, fn};
        auto it = std::lower_bound(templates.begin(), templates.end(), probe);
        if (it == templates.end() || !(*it == probe)) return -1;
        return static_cast<int>(it - templates.begin());
    }

    std::vector<int> covering_indices() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < templates.size(); ++i)
            if (is_surjective_fn(templates[i].fn)) out.push_back(static_cast<int>(i));
        return out;
    }

    static AtomUniverse full(const Signature& sig, int k, bool with_equality) {
        AtomUniverse u{sig, k, with_equality, {}};
        for (const auto& [p, ar] : sig.arity)
            for (const auto& f : enumerate_adjacent(ar, k)) u.templates.push_back({p, f});
        std::sort(u.templates.begin(), u.templates.end());
        return u;
    }

    // Substitution instances of argument sequences occurring in the reference
    // formula: for an atom p(x^g) at native level j, all p(x^{h o g}) with
    // h adjacent from [1,j] to [1,k].
    static AtomUniverse restricted(const FormulaPtr& reference, int k, bool with_equality) {
        AtomUniverse u{{}, k, with_equality, {}};
        infer_signature(reference, u.sig);
        const int j = std::max(1, max_var(reference));
        std::set<AtomTemplate> seen;
        std::vector<AdjacentFunction> hs = enumerate_adjacent(j, k);
        std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
            if (f->kind == Kind::Atom) {
                AdjacentFunction g{f->args, j};
                if (f->args.empty()) {
                    seen.insert({f->pred, AdjacentFunction{{}, k}});
                } else {
                    for (const auto& h : hs) seen.insert({f->pred, compose_fn(h, g)});
                }
            }
            for (const auto& kid : f->kids) walk(kid);
        };
        walk(reference);
        u.templates.assign(seen.begin(), seen.end());
        return u;
    }

    // Templates whose variables stay within [i,j], re-indexed to start at 1.
    std::shared_ptr<const AtomUniverse> restrict_range(int i, int j) const {
        auto out = std::make_shared<AtomUniverse>();
        out->sig = sig;
        out->k = j - i + 1;
        out->with_equality = with_equality;
        for (const auto& t : templates) {
            bool inside = true;
            for (int v : t.fn.values)
                if (v < i || v > j) inside = false;
            if (!inside) continue;
            AdjacentFunction f{t.fn.values, out->k};
            for (int& v : f.values) v -= i - 1;
            out->templates.push_back({t.pred, std::move(f)});
        }
        std::sort(out->templates.begin(), out->templates.end());
        return out;
    }

    std::shared_ptr<const AtomUniverse> covering_subuniverse() const {
        auto out = std::make_shared<AtomUniverse>();
        out->sig = sig;
        out->k = k;
        out->with_equality = with_equality && k == 2;  // x1 = x2 is covering
        for (const auto& t : templates)
            if (is_surjective_fn(t.fn)) out->templates.push_back(t);
        return out;
    }

    bool operator==(const AtomUniverse& o) const {
        return k == o.k && with_equality == o.with_equality && templates == o.templates;
    }
};

using UniversePtr = std::shared_ptr<const AtomUniverse>;

// A maximal consistent set of adjacent k-literals over the universe: one
// polarity per template plus one per adjacent equality pair.  Incremental
// types are the same value over a covering sub-universe.
struct AdjacentType {
    UniversePtr universe;
    std::vector<bool> polarity;  // by template index
    std::vector<bool> eq;        // eq[i] <-> (x_{i+1} = x_{i+2}),  0 <= i < k-1

    int k() const { return universe->k; }

    bool operator==(const AdjacentType& o) const {
        return polarity == o.polarity && eq == o.eq && *universe == *o.universe;
    }
    bool same_universe(const AdjacentType& o) const { return universe.get() == o.universe.get() || *universe == *o.universe; }
};

using IncrementalType = AdjacentType;

// The unique type satisfied by the tuple, restricted to the universe.
inline AdjacentType atp(const Structure& a, const Tuple& tuple, UniversePtr u) {
    if (static_cast<int>(tuple.size()) != u->k) throw DimensionError("atp: |tuple| must equal k");
    AdjacentType t{std::move(u), {}, {}};
    t.polarity.reserve(t.universe->templates.size());
    for (const auto& tpl : t.universe->templates)
        t.polarity.push_back(a.holds(tpl.pred, apply_walk(tuple, tpl.fn)));
    for (int i = 0; i + 1 < t.universe->k && t.universe->with_equality; ++i)
        t.eq.push_back(tuple[i] == tuple[i + 1]);
    if (!t.universe->with_equality) t.eq.clear();
    t.eq.resize(t.universe->eq_pair_count() > 0 ? t.universe->eq_pair_count() : 0);
    for (int i = 0; i < t.universe->eq_pair_count(); ++i) t.eq[i] = tuple[i] == tuple[i + 1];
    return t;
}

// Quotient tuple with one fresh element per equality class.
inline Tuple quotient_tuple(const AdjacentType& t) {
    const int k = t.k();
    Tuple out(k, 0);
    int next = 0;
    for (int i = 0; i < k; ++i) {
        if (i > 0 && t.universe->eq_pair_count() > 0 && t.eq[i - 1])
            out[i] = out[i - 1];
        else
            out[i] = next++;
    }
    return out;
}

// Fresh-element witness; exists exactly when the type is consistent.
inline std::pair<Structure, Tuple> canonical_witness(const AdjacentType& t) {
    Tuple q = quotient_tuple(t);
    Structure s;
    s.domain_size = q.empty() ? 1 : *std::max_element(q.begin(), q.end()) + 1;
    for (const auto& [p, ar] : t.universe->sig.arity) s.declare(p, ar);
    for (std::size_t i = 0; i < t.universe->templates.size(); ++i)
        if (t.polarity[i]) s.add(t.universe->templates[i].pred, apply_walk(q, t.universe->templates[i].fn));
    return {std::move(s), std::move(q)};
}

// Consistency: on the quotient tuple, templates with coinciding walk words
// must carry equal polarity.
inline bool is_consistent(const AdjacentType& t) {
    Tuple q = quotient_tuple(t);
    std::map<std::pair<std::string, Tuple>, bool> seen;
    for (std::size_t i = 0; i < t.universe->templates.size(); ++i) {
        const auto& tpl = t.universe->templates[i];
        auto key = std::make_pair(tpl.pred, apply_walk(q, tpl.fn));
        auto [it, fresh] = seen.emplace(std::move(key), t.polarity[i]);
        if (!fresh && it->second != t.polarity[i]) return false;
    }
    return true;
}

// xi |= chi, decided on the canonical witness.  chi must be quantifier-free
// with variables among x1..xk and atoms inside the universe.
inline bool entails(const AdjacentType& t, const FormulaPtr& chi) {
    auto [s, q] = canonical_witness(t);
    std::map<int, int> asg;
    for (int i = 0; i < t.k(); ++i) asg[i + 1] = q[i];
    return evaluate(s, chi, asg);
}

inline FormulaPtr type_to_formula(const AdjacentType& t) {
    std::vector<FormulaPtr> lits;
    for (std::size_t i = 0; i < t.universe->templates.size(); ++i) {
        FormulaPtr a = f_atom(t.universe->templates[i].pred, t.universe->templates[i].fn.values);
        lits.push_back(t.polarity[i] ? a : f_not(a));
    }
    for (int i = 0; i < t.universe->eq_pair_count(); ++i) {
        FormulaPtr e = f_eq(i + 1, i + 2);
        lits.push_back(t.eq[i] ? e : f_not(e));
    }
    return f_and(std::move(lits));
}

// All consistent types over the universe, in a fixed deterministic order.
inline std::vector<AdjacentType> enumerate_types(UniversePtr u, std::size_t cap = 2'000'000) {
    const int pairs = u->eq_pair_count();
    std::vector<AdjacentType> out;
    for (std::size_t eqmask = 0; eqmask < (std::size_t{1} << pairs); ++eqmask) {
        AdjacentType probe{u, std::vector<bool>(u->templates.size(), false), {}};
        probe.eq.resize(pairs);
        for (int i = 0; i < pairs; ++i) probe.eq[i] = (eqmask >> i) & 1;
        Tuple q = quotient_tuple(probe);
        // group templates by their walk word on the quotient tuple
        std::map<std::pair<std::string, Tuple>, std::vector<int>> groups;
        for (std::size_t i = 0; i < u->templates.size(); ++i)
            groups[{u->templates[i].pred, apply_walk(q, u->templates[i].fn)}].push_back(
                static_cast<int>(i));
        std::vector<std::vector<int>> gs;
        gs.reserve(groups.size());
        for (auto& [key, idxs] : groups) gs.push_back(std::move(idxs));
        std::sort(gs.begin(), gs.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        if (gs.size() >= 40) throw CapacityError("enumerate_types: too many free literal groups");
        for (std::size_t mask = 0; mask < (std::size_t{1} << gs.size()); ++mask) {
            AdjacentType t = probe;
            for (std::size_t g = 0; g < gs.size(); ++g)
                if ((mask >> g) & 1)
                    for (int idx : gs[g]) t.polarity[idx] = true;
            out.push_back(std::move(t));
            if (out.size() > cap) throw CapacityError("enumerate_types: cap exceeded");
        }
    }
    return out;
}

// zeta restricted to positions [i,j] (literals outside deleted, indices shifted).
inline AdjacentType restrict_type(const AdjacentType& t, int i, int j) {
    if (i < 1 || j > t.k() || i > j) throw DimensionError("restrict_type: bad range");
    if (i == 1 && j == t.k()) return t;
    auto u = t.universe->restrict_range(i, j);
    AdjacentType out{u, std::vector<bool>(u->templates.size(), false), {}};
    for (std::size_t n = 0; n < u->templates.size(); ++n) {
        AdjacentFunction orig = u->templates[n].fn;
        for (int& v : orig.values) v += i - 1;
        orig.codomain = t.k();
        int idx = t.universe->index_of(u->templates[n].pred, orig);
        if (idx < 0) throw Error("restrict_type: missing template in the source universe");
        out.polarity[n] = t.polarity[idx];
    }
    for (int p = 0; p < u->eq_pair_count(); ++p) out.eq.push_back(t.eq[p + i - 1]);
    return out;
}

// zeta^+ : every index incremented; the result lives one level higher.  The
// fresh head pair x1 = x2 is not constrained by zeta and defaults to
// inequality; restriction to [2, k+1] recovers zeta exactly.
inline AdjacentType shift_type(const AdjacentType& t) {
    auto u = std::make_shared<AtomUniverse>();
    u->sig = t.universe->sig;
    u->k = t.k() + 1;
    u->with_equality = t.universe->with_equality;
    for (const auto& tpl : t.universe->templates) {
        AdjacentFunction f{tpl.fn.values, u->k};
        for (int& v : f.values) v += 1;
        u->templates.push_back({tpl.pred, std::move(f)});
    }
    std::sort(u->templates.begin(), u->templates.end());
    AdjacentType out{u, std::vector<bool>(u->templates.size(), false), {}};
    for (std::size_t n = 0; n < u->templates.size(); ++n) {
        AdjacentFunction back{u->templates[n].fn.values, t.k()};
        for (int& v : back.values) v -= 1;
        out.polarity[n] = t.polarity[t.universe->index_of(u->templates[n].pred, back)];
    }
    if (u->eq_pair_count() > 0) {
        out.eq.assign(u->eq_pair_count(), false);
        for (int p = 0; p < t.universe->eq_pair_count(); ++p) out.eq[p + 1] = t.eq[p];
    }
    return out;
}

// tl(xi): the unique eta with xi |= eta^+.
inline AdjacentType tail_type(const AdjacentType& xi) { return restrict_type(xi, 2, xi.k()); }

inline AdjacentType head_type(const AdjacentType& xi) { return restrict_type(xi, 1, xi.k() - 1); }

// The increment of xi: exactly the covering literals.
inline IncrementalType increment(const AdjacentType& xi) {
    auto u = xi.universe->covering_subuniverse();
    IncrementalType out{u, std::vector<bool>(u->templates.size(), false), {}};
    for (std::size_t n = 0; n < u->templates.size(); ++n) {
        int idx = xi.universe->index_of(u->templates[n].pred, u->templates[n].fn);
        out.polarity[n] = xi.polarity[idx];
    }
    if (u->eq_pair_count() > 0) out.eq = xi.eq;
    return out;
}

// xi = zeta ∪ eta^+ ∪ iota over the target (k+1)-universe.
inline AdjacentType compose_types(UniversePtr target, const AdjacentType& zeta,
                                  const AdjacentType& eta, const IncrementalType& iota) {
    const int k1 = target->k;
    if (zeta.k() != k1 - 1 || eta.k() != k1 - 1 || iota.k() != k1)
        throw DimensionError("compose_types: level mismatch");
    AdjacentType out{target, std::vector<bool>(target->templates.size(), false), {}};
    for (std::size_t n = 0; n < target->templates.size(); ++n) {
        const auto& tpl = target->templates[n];
        auto [mn, mx] = tpl.fn.values.empty()
                            ? std::pair<int, int>{1, 0}
                            : std::pair<int, int>{*std::min_element(tpl.fn.values.begin(), tpl.fn.values.end()),
                                                  *std::max_element(tpl.fn.values.begin(), tpl.fn.values.end())};
        if (tpl.fn.values.empty() || mx <= k1 - 1) {
            AdjacentFunction f{tpl.fn.values, k1 - 1};
            int idx = zeta.universe->index_of(tpl.pred, f);
            if (idx < 0) throw Error("compose_types: template missing from zeta");
            out.polarity[n] = zeta.polarity[idx];
        } else if (mn >= 2) {
            AdjacentFunction f{tpl.fn.values, k1 - 1};
            for (int& v : f.values) v -= 1;
            int idx = eta.universe->index_of(tpl.pred, f);
            if (idx < 0) throw Error("compose_types: template missing from eta");
            out.polarity[n] = eta.polarity[idx];
        } else {
            int idx = iota.universe->index_of(tpl.pred, tpl.fn);
            if (idx < 0) throw Error("compose_types: template missing from iota");
            out.polarity[n] = iota.polarity[idx];
        }
    }
    for (int p = 0; p < target->eq_pair_count(); ++p) {
        if (p < k1 - 2)
            out.eq.push_back(zeta.eq[p]);
        else if (k1 == 2)
            out.eq.push_back(iota.eq.at(0));
        else
            out.eq.push_back(eta.eq[p - 1]);
    }
    return out;
}

// D-compatibility: covering templates identified by the defect closure must
// agree in polarity.
inline bool is_d_compatible(const IncrementalType& iota, const DefectSet& d) {
    if (d.word_length != iota.k()) throw DimensionError("is_d_compatible: word length mismatch");
    const auto& tpls = iota.universe->templates;
    for (std::size_t i = 0; i < tpls.size(); ++i)
        for (std::size_t j = i + 1; j < tpls.size(); ++j) {
            if (tpls[i].pred != tpls[j].pred) continue;
            if (tpls[i].fn.length() != tpls[j].fn.length()) continue;
            if (iota.polarity[i] == iota.polarity[j]) continue;
            if (d_equal(tpls[i].fn, tpls[j].fn, d)) return false;
        }
    return true;
}

// Realizes a D-compatible incremental type on a concrete primitive tuple:
// p^A = { elements^f : iota |= p(x^f) }.
inline Structure canonical_structure(const IncrementalType& iota, const Tuple& elements) {
    if (static_cast<int>(elements.size()) != iota.k())
        throw DimensionError("canonical_structure: |elements| must equal k");
    if (!is_primitive(elements)) throw ConstructionError("canonical_structure: tuple is not primitive");
    DefectSet d = defects(elements);
    if (!is_d_compatible(iota, d))
        throw ConstructionError("canonical_structure: the type is not compatible with the tuple's defects");
    if (iota.universe->eq_pair_count() > 0) {
        for (int i = 0; i + 1 < iota.k(); ++i)
            if (iota.eq[i] != (elements[i] == elements[i + 1]))
                throw ConstructionError("canonical_structure: equality pattern mismatch");
    }
    Structure s;
    s.domain_size = *std::max_element(elements.begin(), elements.end()) + 1;
    for (const auto& [p, ar] : iota.universe->sig.arity) s.declare(p, ar);
    for (std::size_t i = 0; i < iota.universe->templates.size(); ++i)
        if (iota.polarity[i])
            s.add(iota.universe->templates[i].pred,
                  apply_walk(elements, iota.universe->templates[i].fn));
    return s;
}

// First adjacent type over the universe entailing chi whose increment is
// D+-compatible; D is a defect set over k-2 positions, shifted up by one.
inline std::optional<AdjacentType> is_d_plus_consistent(const FormulaPtr& chi, const DefectSet& d,
                                                        UniversePtr u) {
    if (d.word_length != u->k - 2)
        throw DimensionError("is_d_plus_consistent: D must live two positions below the universe");
    DefectSet dplus = shift_defects(d);
    for (auto& xi : enumerate_types(u)) {
        if (!is_consistent(xi)) continue;
        if (!entails(xi, chi)) continue;
        if (is_d_compatible(increment(xi), dplus)) return xi;
    }
    return std::nullopt;
}

namespace detail {
// xi |= alpha implies xi |= alpha(substitution) over all relational atoms.
inline bool closed_under(const AdjacentType& xi, const AdjacentFunction& sub) {
    for (std::size_t i = 0; i < xi.universe->templates.size(); ++i) {
        if (!xi.polarity[i]) continue;
        const auto& tpl = xi.universe->templates[i];
        int idx = xi.universe->index_of(tpl.pred, compose_fn(sub, tpl.fn));
        if (idx < 0) throw Error("universe not closed under the substitution");
        if (!xi.polarity[idx]) return false;
    }
    return true;
}
}  // namespace detail

inline bool is_palindromic(const AdjacentType& xi) {
    return detail::closed_under(xi, reversal_fn(xi.k()));
}

inline bool is_blunt(const AdjacentType& xi) {
    AdjacentFunction b = identity_fn(xi.k());
    b.values[xi.k() - 1] = xi.k() - 1;
    return detail::closed_under(xi, b);
}

inline bool is_hooked(const AdjacentType& xi, int s) {
    const int k = xi.k();  // k = ell + 1
    if (!(2 < 2 * s + 1 && 2 * s + 1 < k)) throw Error("is_hooked: s out of range");
    AdjacentFunction h = identity_fn(k);
    for (int t = 1; t <= s; ++t) h.values[k - s - 1 + t] = k - s - t;
    return detail::closed_under(xi, h);
}

// Elevates a layered structure by fixing the incremental type of one new
// primitive (height+1)-tuple (and thereby of its reversal).
inline Structure define_layer(const Structure& l, const Tuple& tuple, const IncrementalType& iota) {
    if (!l.height) throw Error("define_layer: structure must be layered");
    const int ell = *l.height;
    if (static_cast<int>(tuple.size()) != ell + 1)
        throw DimensionError("define_layer: tuple must have length height+1");
    if (!is_primitive(tuple)) throw ConstructionError("define_layer: tuple is not primitive");
    if (iota.k() != ell + 1) throw DimensionError("define_layer: type level mismatch");
    DefectSet d = defects(tuple);
    if (!is_d_compatible(iota, d)) throw ConstructionError("define_layer: type incompatible with the tuple");
    if (iota.universe->eq_pair_count() > 0)
        for (int i = 0; i + 1 < iota.k(); ++i)
            if (iota.eq[i] != (tuple[i] == tuple[i + 1]))
                throw ConstructionError("define_layer: equality pattern mismatch");

    Structure out = l;
    out.height = ell + 1;
    std::map<std::pair<std::string, Tuple>, bool> assigned;
    for (std::size_t i = 0; i < iota.universe->templates.size(); ++i) {
        const auto& tpl = iota.universe->templates[i];
        Tuple w = apply_walk(tuple, tpl.fn);
        auto [it, fresh] = assigned.emplace(std::make_pair(tpl.pred, w), (bool)iota.polarity[i]);
        if (!fresh && it->second != (bool)iota.polarity[i])
            throw ConstructionError("define_layer: conflicting walk assignment");
        if (iota.polarity[i]) out.add(tpl.pred, std::move(w));
    }
    return out;
}

}  // namespace afkit
