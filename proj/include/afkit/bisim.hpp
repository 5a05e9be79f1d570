#pragma once

// Guarded-adjacent bisimulation machinery on finite structures: sigma-live
// and sigma-alive tuples, bisimulation validation with a first-violation
// report, bounded greatest-bisimulation fixpoints, and adjacent tree/forest
// utilities: cores, the core ordering, and the infix-prefix property.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "afkit/structures.hpp"
#include "afkit/types.hpp"
#include "afkit/words.hpp"

namespace afkit {

using Sigma = std::set<std::string>;

inline Signature sigma_signature(const Structure& a, const Sigma& sigma) {
    Signature sig;
    for (const auto& p : sigma) {
        auto it = a.relations.find(p);
        if (it == a.relations.end()) throw Error("sigma predicate '" + p + "' missing from the structure");
        sig.declare(p, it->second.arity);
    }
    return sig;
}

// directly a member of some sigma-relation
inline bool sigma_live(const Structure& a, const Tuple& t, const Sigma& sigma) {
    for (const auto& p : sigma) {
        auto it = a.relations.find(p);
        if (it != a.relations.end() && it->second.tuples.count(t)) return true;
    }
    return false;
}

// some surjective walk of the tuple is sigma-live
inline bool sigma_alive(const Structure& a, const Tuple& t, const Sigma& sigma) {
    if (t.empty()) return false;
    for (const auto& p : sigma) {
        auto it = a.relations.find(p);
        if (it == a.relations.end()) continue;
        for (const auto& f :
             enumerate_adjacent(it->second.arity, static_cast<int>(t.size()), false, true))
            if (it->second.tuples.count(apply_walk(t, f))) return true;
    }
    return false;
}

struct TupleRelation {
    int max_len = 1;
    std::set<std::pair<Tuple, Tuple>> pairs;
};

struct BisimReport {
    bool ok = true;
    std::string condition;  // "atomic harmony", "forth", "back"
    std::pair<Tuple, Tuple> pair;
    std::string detail;
};

namespace detail {

inline std::vector<bool> sigma_type_fingerprint(const Structure& a, const Tuple& t,
                                                const Signature& sig) {
    auto u = std::make_shared<AtomUniverse>(
        AtomUniverse::full(sig, static_cast<int>(t.size()), true));
    auto ty = atp(a, t, u);
    std::vector<bool> fp = ty.polarity;
    fp.insert(fp.end(), ty.eq.begin(), ty.eq.end());
    return fp;
}

template <class F>
void for_each_extension(int domain, int max_extra, F&& fn) {
    Tuple ext;
    std::function<void()> go = [&]() {
        fn(ext);
        if (static_cast<int>(ext.size()) >= max_extra) return;
        for (int e = 0; e < domain; ++e) {
            ext.push_back(e);
            go();
            ext.pop_back();
        }
    };
    go();
}

}  // namespace detail

// Validates atomic harmony on every pair and the forth/back conditions over
// all infixes and extension tuples within the length bound.
inline BisimReport check_bisimulation(const TupleRelation& z, const Structure& a,
                                      const Structure& b, const Sigma& sigma) {
    if (z.pairs.empty()) return {false, "shape", {}, "the relation must be non-empty"};
    Signature sig_a = sigma_signature(a, sigma);
    Signature sig_b = sigma_signature(b, sigma);
    for (const auto& [p, ar] : sig_a.arity)
        if (sig_b.arity.at(p) != ar) throw DimensionError("sigma arities differ between structures");

    const int L = z.max_len;
    for (const auto& [c, d] : z.pairs) {
        if (c.size() != d.size())
            return {false, "shape", {c, d}, "paired tuples must have equal length"};
        if (static_cast<int>(c.size()) > L)
            return {false, "shape", {c, d}, "tuple exceeds the length bound"};
        if (c.empty()) return {false, "shape", {c, d}, "empty tuples are not related"};

        if (detail::sigma_type_fingerprint(a, c, sig_a) != detail::sigma_type_fingerprint(b, d, sig_a))
            return {false, "atomic harmony", {c, d}, "adjacent sigma-types differ"};
        if (!sigma_alive(a, c, sigma) || !sigma_alive(b, d, sigma))
            return {false, "atomic harmony", {c, d}, "a related tuple is not sigma-alive"};

        const int len = static_cast<int>(c.size());
        for (int i = 0; i < len; ++i)
            for (int j = i; j < len; ++j) {
                Tuple c_inf(c.begin() + i, c.begin() + j + 1);
                Tuple d_inf(d.begin() + i, d.begin() + j + 1);
                int room = L - (j - i + 1);
                BisimReport bad;
                bool failed = false;
                detail::for_each_extension(a.domain_size, room, [&](const Tuple& u) {
                    if (failed) return;
                    Tuple cu = c_inf;
                    cu.insert(cu.end(), u.begin(), u.end());
                    if (!sigma_alive(a, cu, sigma)) return;
                    bool found = false;
                    detail::for_each_extension(b.domain_size, static_cast<int>(u.size()), [&](const Tuple& v) {
                        if (found || v.size() != u.size()) return;
                        Tuple dv = d_inf;
                        dv.insert(dv.end(), v.begin(), v.end());
                        if (!sigma_alive(b, dv, sigma)) return;
                        if (z.pairs.count({cu, dv})) found = true;
                    });
                    if (!found) {
                        failed = true;
                        bad = {false, "forth", {c, d}, "no matching extension for a live walk"};
                    }
                });
                if (failed) return bad;
                detail::for_each_extension(b.domain_size, room, [&](const Tuple& v) {
                    if (failed) return;
                    Tuple dv = d_inf;
                    dv.insert(dv.end(), v.begin(), v.end());
                    if (!sigma_alive(b, dv, sigma)) return;
                    bool found = false;
                    detail::for_each_extension(a.domain_size, static_cast<int>(v.size()), [&](const Tuple& u) {
                        if (found || u.size() != v.size()) return;
                        Tuple cu = c_inf;
                        cu.insert(cu.end(), u.begin(), u.end());
                        if (!sigma_alive(a, cu, sigma)) return;
                        if (z.pairs.count({cu, dv})) found = true;
                    });
                    if (!found) {
                        failed = true;
                        bad = {false, "back", {c, d}, "no matching extension for a live walk"};
                    }
                });
                if (failed) return bad;
            }
    }
    return {};
}

// Largest relation over tuples of length <= L closed under the three
// conditions (restricted to in-bound extensions) containing the given pair,
// or absent when the pair is eliminated.
inline std::optional<TupleRelation> greatest_bisimulation(const Structure& a, const Tuple& ta,
                                                          const Structure& b, const Tuple& tb,
                                                          const Sigma& sigma, int max_len,
                                                          std::size_t cap = 400'000) {
    if (ta.size() != tb.size() || ta.empty()) throw DimensionError("pointed tuples must match");
    if (static_cast<int>(ta.size()) > max_len) throw DimensionError("pointed tuples exceed the bound");
    Signature sig = sigma_signature(a, sigma);
    sigma_signature(b, sigma);

    // start from all harmonious alive pairs
    std::set<std::pair<Tuple, Tuple>> pairs;
    for (int len = 1; len <= max_len; ++len) {
        std::map<std::vector<bool>, std::vector<Tuple>> left;
        detail::for_each_extension(a.domain_size, len, [&](const Tuple& t) {
            if (static_cast<int>(t.size()) != len) return;
            if (!sigma_alive(a, t, sigma)) return;
            left[detail::sigma_type_fingerprint(a, t, sig)].push_back(t);
        });
        detail::for_each_extension(b.domain_size, len, [&](const Tuple& t) {
            if (static_cast<int>(t.size()) != len) return;
            if (!sigma_alive(b, t, sigma)) return;
            auto it = left.find(detail::sigma_type_fingerprint(b, t, sig));
            if (it == left.end()) return;
            for (const auto& l : it->second) {
                pairs.insert({l, t});
                if (pairs.size() > cap) throw CapacityError("greatest_bisimulation: cap exceeded");
            }
        });
    }

    // refine away forth/back violations
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::pair<Tuple, Tuple>> drop;
        for (const auto& pr : pairs) {
            // validate this pair's forth/back obligations against `pairs`
            const auto& [c, d] = pr;
            bool ok = true;
            const int len = static_cast<int>(c.size());
            for (int i = 0; i < len && ok; ++i)
                for (int j = i; j < len && ok; ++j) {
                    Tuple c_inf(c.begin() + i, c.begin() + j + 1);
                    Tuple d_inf(d.begin() + i, d.begin() + j + 1);
                    int room = max_len - (j - i + 1);
                    detail::for_each_extension(a.domain_size, room, [&](const Tuple& u) {
                        if (!ok) return;
                        Tuple cu = c_inf;
                        cu.insert(cu.end(), u.begin(), u.end());
                        if (!sigma_alive(a, cu, sigma)) return;
                        bool found = false;
                        detail::for_each_extension(b.domain_size, static_cast<int>(u.size()),
                                                   [&](const Tuple& v) {
                                                       if (found || v.size() != u.size()) return;
                                                       Tuple dv = d_inf;
                                                       dv.insert(dv.end(), v.begin(), v.end());
                                                       if (pairs.count({cu, dv})) found = true;
                                                   });
                        if (!found) ok = false;
                    });
                    if (!ok) break;
                    detail::for_each_extension(b.domain_size, room, [&](const Tuple& v) {
                        if (!ok) return;
                        Tuple dv = d_inf;
                        dv.insert(dv.end(), v.begin(), v.end());
                        if (!sigma_alive(b, dv, sigma)) return;
                        bool found = false;
                        detail::for_each_extension(a.domain_size, static_cast<int>(v.size()),
                                                   [&](const Tuple& u) {
                                                       if (found || u.size() != v.size()) return;
                                                       Tuple cu = c_inf;
                                                       cu.insert(cu.end(), u.begin(), u.end());
                                                       if (pairs.count({cu, dv})) found = true;
                                                   });
                        if (!found) ok = false;
                    });
                }
            if (!ok) drop.push_back(pr);
        }
        for (const auto& pr : drop) {
            pairs.erase(pr);
            changed = true;
        }
    }

    if (!pairs.count({ta, tb})) return std::nullopt;
    if (pairs.empty()) return std::nullopt;
    return TupleRelation{max_len, std::move(pairs)};
}

// ---------------------------------------------------------------------------
// adjacent forests

// A structure whose elements carry tree addresses: non-empty sequences of
// naturals, the first component naming the tree, prefix-closed per tree.
struct AdjacentForest {
    Structure s;
    std::vector<std::vector<int>> addresses;  // by element
};

inline void validate_forest(const AdjacentForest& f) {
    if (static_cast<int>(f.addresses.size()) != f.s.domain_size)
        throw InputError("forest: one address per element is required");
    std::set<std::vector<int>> seen;
    for (const auto& ad : f.addresses) {
        if (ad.empty()) throw InputError("forest: addresses must be non-empty");
        if (!seen.insert(ad).second) throw InputError("forest: duplicate address");
    }
    for (const auto& ad : f.addresses)
        if (ad.size() >= 2) {
            auto parent = ad;
            parent.pop_back();
            if (!seen.count(parent)) throw InputError("forest: addresses are not prefix-closed");
        }
}

// The unique descending path the tuple walks on.
inline Tuple core(const AdjacentForest& f, const Tuple& t, const Sigma& sigma) {
    validate_forest(f);
    if (!sigma_live(f.s, t, sigma)) throw Error("core: the tuple is not sigma-live");
    std::set<int> elems(t.begin(), t.end());
    std::vector<int> chain(elems.begin(), elems.end());
    std::sort(chain.begin(), chain.end(), [&](int x, int y) {
        return f.addresses[x].size() < f.addresses[y].size();
    });
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        auto parent = f.addresses[chain[i + 1]];
        parent.pop_back();
        if (parent != f.addresses[chain[i]])
            throw Error("core: the tuple's elements do not form a descending path");
    }
    Tuple c(chain.begin(), chain.end());
    if (!generates(c, t).has_value())
        throw Error("core: the tuple is not a surjective walk on its element path");
    return c;
}

// lexicographic ordering on cores, lifted from the address order
inline bool core_precedes(const AdjacentForest& f, const Tuple& c1, const Tuple& c2) {
    auto key = [&](const Tuple& c) {
        std::vector<std::vector<int>> k;
        for (int e : c) k.push_back(f.addresses[e]);
        return k;
    };
    return key(c1) < key(c2);
}

// (heart): if c strictly precedes d and they share elements, some non-empty
// infix of c is a prefix of d
inline bool check_heart(const AdjacentForest& f, const Sigma& sigma) {
    validate_forest(f);
    std::set<Tuple> cores;
    for (const auto& p : sigma) {
        auto it = f.s.relations.find(p);
        if (it == f.s.relations.end()) continue;
        for (const auto& t : it->second.tuples) cores.insert(core(f, t, sigma));
    }
    for (const auto& c : cores)
        for (const auto& d : cores) {
            if (!core_precedes(f, c, d)) continue;
            bool share = false;
            for (int e : c)
                if (std::find(d.begin(), d.end(), e) != d.end()) share = true;
            if (!share) continue;
            bool found = false;
            for (std::size_t i = 0; i < c.size() && !found; ++i)
                for (std::size_t j = i; j < c.size() && !found; ++j) {
                    std::size_t len = j - i + 1;
                    if (len > d.size()) continue;
                    if (std::equal(c.begin() + i, c.begin() + j + 1, d.begin())) found = true;
                }
            if (!found) return false;
        }
    return true;
}

}  // namespace afkit
