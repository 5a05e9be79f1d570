#pragma once

// Shared deterministic generators and brute-force oracles used across suites.
// The structure enumerator is the independent satisfiability oracle: it knows
// nothing about grounding or SAT search.

#include <functional>
#include <random>
#include <vector>

#include "afkit/formula.hpp"
#include "afkit/structures.hpp"
#include "afkit/transform.hpp"

namespace gen {

using namespace afkit;

using Rng = std::mt19937;

inline int pick(Rng& rng, int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

// A random adjacent word of the given length over [1,k].
inline std::vector<int> random_adjacent_word(Rng& rng, int len, int k) {
    std::vector<int> w;
    if (len == 0) return w;
    w.push_back(1 + pick(rng, k));
    for (int i = 1; i < len; ++i) {
        int d = pick(rng, 3) - 1;
        int v = std::clamp(w.back() + d, 1, k);
        w.push_back(v);
    }
    return w;
}

// Quantifier-free formula over x1..xk drawn from the signature.
inline FormulaPtr random_qf(Rng& rng, int k, const Signature& sig, bool allow_eq, int budget = 6) {
    if (budget <= 0 || pick(rng, 3) == 0) {
        // literal
        if (allow_eq && k >= 2 && pick(rng, 5) == 0) {
            int i = 1 + pick(rng, k - 1);
            FormulaPtr e = f_eq(i, i + 1);
            return pick(rng, 2) ? e : f_not(e);
        }
        auto it = sig.arity.begin();
        std::advance(it, pick(rng, static_cast<int>(sig.arity.size())));
        auto [name, ar] = *it;
        FormulaPtr a = f_atom(name, random_adjacent_word(rng, ar, k));
        return pick(rng, 2) ? a : f_not(a);
    }
    switch (pick(rng, 4)) {
        case 0:
            return f_and({random_qf(rng, k, sig, allow_eq, budget / 2),
                          random_qf(rng, k, sig, allow_eq, budget / 2)});
        case 1:
            return f_or({random_qf(rng, k, sig, allow_eq, budget / 2),
                         random_qf(rng, k, sig, allow_eq, budget / 2)});
        case 2:
            return f_implies(random_qf(rng, k, sig, allow_eq, budget / 2),
                             random_qf(rng, k, sig, allow_eq, budget / 2));
        default:
            return f_not(random_qf(rng, k, sig, allow_eq, budget - 1));
    }
}

// Random index-normal AF sentence using at most max_level variables.
inline FormulaPtr random_af_sentence(Rng& rng, int max_level, const Signature& sig, bool allow_eq) {
    std::function<FormulaPtr(int)> comb = [&](int k) -> FormulaPtr {
        bool can_quantify = k < max_level;
        int choice = pick(rng, 10);
        if (can_quantify && choice < 5) {
            FormulaPtr body = comb(k + 1);
            return pick(rng, 2) ? f_forall(k + 1, std::move(body)) : f_exists(k + 1, std::move(body));
        }
        if (choice < 7 && can_quantify) {
            FormulaPtr a = comb(k);
            FormulaPtr b = comb(k);
            return pick(rng, 2) ? f_and({a, b}) : f_or({a, b});
        }
        if (k == 0) {  // force at least one quantifier from the top
            FormulaPtr body = comb(1);
            return pick(rng, 2) ? f_forall(1, std::move(body)) : f_exists(1, std::move(body));
        }
        return random_qf(rng, k, sig, allow_eq);
    };
    return comb(0);
}

// Random normal-form sentence at the given level (ell+1), small and varied.
inline NormalForm random_normal_form(Rng& rng, int ell, const Signature& sig, bool allow_eq,
                                     int gamma_count) {
    NormalForm nf;
    nf.ell = ell;
    nf.sig = sig;
    for (int i = 0; i < gamma_count; ++i) nf.gammas.push_back(random_qf(rng, ell + 1, sig, allow_eq));
    nf.beta = random_qf(rng, ell + 1, sig, allow_eq);
    return nf;
}

// Every structure over the signature with the exact domain size; capped.
inline std::vector<Structure> all_structures(const Signature& sig, int n,
                                             std::size_t cap = 1u << 22) {
    std::vector<std::pair<std::string, std::vector<Tuple>>> slots;
    std::size_t total_bits = 0;
    for (const auto& [p, ar] : sig.arity) {
        std::vector<Tuple> tuples;
        Tuple t(ar, 0);
        std::function<void(int)> go = [&](int i) {
            if (i == ar) {
                tuples.push_back(t);
                return;
            }
            for (int e = 0; e < n; ++e) {
                t[i] = e;
                go(i + 1);
            }
        };
        go(0);
        total_bits += tuples.size();
        slots.emplace_back(p, std::move(tuples));
    }
    if (total_bits > 22) throw CapacityError("all_structures: signature too large to enumerate");
    std::size_t count = std::size_t{1} << total_bits;
    if (count > cap) throw CapacityError("all_structures: cap exceeded");
    std::vector<Structure> out;
    out.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        Structure s;
        s.domain_size = n;
        std::size_t bit = 0;
        for (const auto& [p, tuples] : slots) {
            s.declare(p, tuples.empty() ? 0 : static_cast<int>(tuples[0].size()));
            for (const auto& t : tuples) {
                if (mask & (std::size_t{1} << bit)) s.relations[p].tuples.insert(t);
                ++bit;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Brute-force satisfiability at an exact domain size.
inline bool sat_brute(const FormulaPtr& phi, const Signature& sig, int n) {
    for (const auto& s : all_structures(sig, n))
        if (evaluate(s, phi)) return true;
    return false;
}

inline Structure random_structure(Rng& rng, const Signature& sig, int n, int density_pct = 50) {
    Structure s;
    s.domain_size = n;
    for (const auto& [p, ar] : sig.arity) {
        s.declare(p, ar);
        Tuple t(ar, 0);
        std::function<void(int)> go = [&](int i) {
            if (i == ar) {
                if (pick(rng, 100) < density_pct) s.relations[p].tuples.insert(t);
                return;
            }
            for (int e = 0; e < n; ++e) {
                t[i] = e;
                go(i + 1);
            }
        };
        go(0);
    }
    return s;
}

}  // namespace gen
