#pragma once

// Bounded finite-model search: ground a sentence over the domain [0,n) into
// propositional constraints (one variable per predicate-tuple membership,
// equality grounded to element identity), convert by Tseitin, and decide with
// a small DPLL.  Domain sizes are tried in increasing order, so a returned
// model has the least domain size within the cap.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "afkit/formula.hpp"
#include "afkit/structures.hpp"

namespace afkit {

struct SearchCaps {
    std::size_t max_ground_nodes = 4'000'000;
    std::size_t max_clauses = 8'000'000;
    std::uint64_t max_decisions = 40'000'000;
};

namespace detail {

// Ground circuit: negative numbers are NOT gates handled via literal encoding.
struct Circuit {
    // gate: kind 0 = atom var, 1 = and, 2 = or; constants folded away
    struct Gate {
        int kind;
        int var = 0;
        std::vector<int> kids;  // literals: +-(gate index + 1)
    };
    std::vector<Gate> gates;
    static constexpr int TRUE_LIT = INT32_MAX;
    static constexpr int FALSE_LIT = -INT32_MAX;

    int add_atom(int var) {
        gates.push_back({0, var, {}});
        return static_cast<int>(gates.size());
    }
    int add_node(int kind, std::vector<int> kids) {
        // fold constants
        std::vector<int> keep;
        for (int l : kids) {
            if (kind == 1) {
                if (l == TRUE_LIT) continue;
                if (l == FALSE_LIT) return FALSE_LIT;
            } else {
                if (l == FALSE_LIT) continue;
                if (l == TRUE_LIT) return TRUE_LIT;
            }
            keep.push_back(l);
        }
        if (keep.empty()) return kind == 1 ? TRUE_LIT : FALSE_LIT;
        if (keep.size() == 1) return keep[0];
        gates.push_back({kind, 0, std::move(keep)});
        return static_cast<int>(gates.size());
    }
};

inline int negate_lit(int l) {
    if (l == Circuit::TRUE_LIT) return Circuit::FALSE_LIT;
    if (l == Circuit::FALSE_LIT) return Circuit::TRUE_LIT;
    return -l;
}

struct Grounder {
    const Structure* shape;  // unused; kept for symmetry
    int n;
    SearchCaps caps;
    Circuit circuit;
    std::map<std::pair<std::string, Tuple>, int> atom_var;  // -> SAT var (1-based)
    int num_vars = 0;
    std::size_t nodes = 0;

    int atom(const std::string& pred, Tuple t) {
        auto [it, fresh] = atom_var.emplace(std::make_pair(pred, std::move(t)), 0);
        if (fresh) it->second = ++num_vars;
        return circuit.add_atom(it->second);
    }

    int ground(const FormulaPtr& f, std::vector<int>& env, bool positive_root) {
        if (++nodes > caps.max_ground_nodes) throw CapacityError("grounding: node cap exceeded");
        switch (f->kind) {
            case Kind::True: return Circuit::TRUE_LIT;
            case Kind::False: return Circuit::FALSE_LIT;
            case Kind::Eq:
                return env[f->args[0]] == env[f->args[1]] ? Circuit::TRUE_LIT : Circuit::FALSE_LIT;
            case Kind::Atom: {
                Tuple t;
                t.reserve(f->args.size());
                for (int v : f->args) t.push_back(env[v]);
                return atom(f->pred, std::move(t));
            }
            case Kind::Not: return negate_lit(ground(f->kids[0], env, false));
            case Kind::And:
            case Kind::Or: {
                std::vector<int> kids;
                kids.reserve(f->kids.size());
                for (const auto& k : f->kids) kids.push_back(ground(k, env, false));
                return circuit.add_node(f->kind == Kind::And ? 1 : 2, std::move(kids));
            }
            case Kind::Implies:
                return circuit.add_node(
                    2, {negate_lit(ground(f->kids[0], env, false)), ground(f->kids[1], env, false)});
            case Kind::Iff: {
                int a = ground(f->kids[0], env, false);
                int b = ground(f->kids[1], env, false);
                return circuit.add_node(1, {circuit.add_node(2, {negate_lit(a), b}),
                                            circuit.add_node(2, {a, negate_lit(b)})});
            }
            case Kind::Forall:
            case Kind::Exists: {
                int saved = env[f->var];
                // sound symmetry breaking for sentences: the first existential
                // witness may be pinned to element 0
                if (positive_root && f->kind == Kind::Exists && n > 0) {
                    env[f->var] = 0;
                    int lit = ground(f->kids[0], env, false);
                    env[f->var] = saved;
                    return lit;
                }
                std::vector<int> kids;
                kids.reserve(n);
                for (int e = 0; e < n; ++e) {
                    env[f->var] = e;
                    kids.push_back(ground(f->kids[0], env, false));
                }
                env[f->var] = saved;
                return circuit.add_node(f->kind == Kind::Forall ? 1 : 2, std::move(kids));
            }
        }
        return Circuit::FALSE_LIT;
    }
};

struct Dpll {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    SearchCaps caps;

    // solver state
    std::vector<std::vector<int>> watchers;
    std::vector<int8_t> value;    // by var: 0 unknown, 1 true, -1 false
    std::vector<int> var_level;
    std::vector<int> reason;      // clause index or -1
    std::vector<int8_t> phase;
    std::vector<double> activity;
    double var_inc = 1.0;
    std::vector<int> trail;
    std::vector<std::size_t> trail_lim;
    std::size_t qhead = 0;
    bool unsat_root = false;

    static std::size_t lit_idx(int l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0); }

    int8_t val(int l) const {
        int8_t v = value[std::abs(l)];
        return l > 0 ? v : static_cast<int8_t>(-v);
    }
    int level() const { return static_cast<int>(trail_lim.size()); }

    bool add_clause(std::vector<int> c) {
        std::sort(c.begin(), c.end(), [](int a, int b) {
            return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
        });
        c.erase(std::unique(c.begin(), c.end()), c.end());
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if (c[i] == -c[i + 1]) return true;  // tautology
        if (c.empty()) {
            unsat_root = true;
            return false;
        }
        clauses.push_back(std::move(c));
        return true;
    }

    void attach(int ci) {
        const auto& c = clauses[ci];
        watchers[lit_idx(c[0])].push_back(ci);
        if (c.size() > 1) watchers[lit_idx(c[1])].push_back(ci);
    }

    void enqueue(int l, int why) {
        int v = std::abs(l);
        value[v] = l > 0 ? 1 : -1;
        phase[v] = value[v];
        var_level[v] = level();
        reason[v] = why;
        trail.push_back(l);
    }

    // returns a conflicting clause index, or -1
    int propagate() {
        while (qhead < trail.size()) {
            int l = trail[qhead++];
            int fl = -l;
            auto& ws = watchers[lit_idx(fl)];
            std::size_t keep = 0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                int ci = ws[i];
                auto& c = clauses[ci];
                if (c.size() == 1) {
                    ws[keep++] = ci;
                    if (val(c[0]) == -1) {
                        for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
                        ws.resize(keep);
                        return ci;
                    }
                    continue;
                }
                if (c[0] == fl) std::swap(c[0], c[1]);
                if (val(c[0]) == 1) {
                    ws[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t j = 2; j < c.size(); ++j) {
                    if (val(c[j]) != -1) {
                        std::swap(c[1], c[j]);
                        watchers[lit_idx(c[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[keep++] = ci;
                if (val(c[0]) == -1) {
                    for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
                    ws.resize(keep);
                    return ci;
                }
                enqueue(c[0], ci);
            }
            ws.resize(keep);
        }
        return -1;
    }

    void bump(int v) {
        activity[v] += var_inc;
        if (activity[v] > 1e100) {
            for (double& a : activity) a *= 1e-100;
            var_inc *= 1e-100;
        }
    }

    // first-UIP learning; returns the learnt clause (asserting literal first)
    // and the backjump level
    std::pair<std::vector<int>, int> analyze(int confl) {
        std::vector<int> learnt{0};
        std::vector<int8_t> seen(num_vars + 1, 0);
        int counter = 0;
        int p = 0;
        std::size_t idx = trail.size();
        for (;;) {
            const auto& c = clauses[confl];
            for (int q : c) {
                if (p != 0 && q == -p) continue;  // the literal this reason implied
                int v = std::abs(q);
                if (!seen[v] && var_level[v] > 0) {
                    seen[v] = 1;
                    bump(v);
                    if (var_level[v] >= level())
                        ++counter;
                    else
                        learnt.push_back(q);
                }
            }
            while (idx > 0 && !seen[std::abs(trail[idx - 1])]) --idx;
            --idx;
            p = -trail[idx];
            seen[std::abs(p)] = 0;
            --counter;
            if (counter == 0) break;
            confl = reason[std::abs(p)];
        }
        learnt[0] = p;
        int back = 0;
        for (std::size_t i = 1; i < learnt.size(); ++i)
            back = std::max(back, var_level[std::abs(learnt[i])]);
        // move a literal of the backjump level into the second watch slot
        for (std::size_t i = 1; i < learnt.size(); ++i)
            if (var_level[std::abs(learnt[i])] == back) {
                std::swap(learnt[1], learnt[i]);
                break;
            }
        return {std::move(learnt), back};
    }

    void backjump(int lvl) {
        if (level() <= lvl) return;
        std::size_t mark = trail_lim[lvl];
        for (std::size_t i = trail.size(); i > mark; --i) {
            int v = std::abs(trail[i - 1]);
            value[v] = 0;
            reason[v] = -1;
        }
        trail.resize(mark);
        trail_lim.resize(lvl);
        qhead = mark;
    }

    static std::uint64_t luby(std::uint64_t i) {
        std::uint64_t k = 1;
        while ((1ull << (k + 1)) <= i + 1) ++k;
        while ((1ull << k) - 1 != i + 1) {
            i = i - (1ull << k) + 1;
            k = 1;
            while ((1ull << (k + 1)) <= i + 1) ++k;
        }
        return 1ull << (k - 1);
    }

    std::optional<std::vector<int8_t>> solve() {
        if (unsat_root) return std::nullopt;
        value.assign(num_vars + 1, 0);
        var_level.assign(num_vars + 1, 0);
        reason.assign(num_vars + 1, -1);
        phase.assign(num_vars + 1, -1);
        activity.assign(num_vars + 1, 0.0);
        watchers.assign(2 * static_cast<std::size_t>(num_vars) + 2, {});
        std::size_t root_clauses = clauses.size();
        for (std::size_t ci = 0; ci < root_clauses; ++ci) attach(static_cast<int>(ci));
        for (std::size_t ci = 0; ci < root_clauses; ++ci)
            if (clauses[ci].size() == 1) {
                int l = clauses[ci][0];
                if (val(l) == -1) return std::nullopt;
                if (val(l) == 0) enqueue(l, static_cast<int>(ci));
            }
        if (propagate() != -1) return std::nullopt;

        std::uint64_t budget = 0, conflicts_here = 0, restart_no = 0;
        std::uint64_t restart_lim = 100 * luby(restart_no);
        for (;;) {
            int confl = propagate();
            if (confl != -1) {
                if (level() == 0) return std::nullopt;
                if (++budget > caps.max_decisions) throw CapacityError("sat: conflict budget exceeded");
                auto [learnt, back] = analyze(confl);
                backjump(back);
                clauses.push_back(learnt);
                int ci = static_cast<int>(clauses.size()) - 1;
                attach(ci);
                enqueue(learnt[0], ci);
                var_inc *= 1.05;
                if (++conflicts_here >= restart_lim) {
                    conflicts_here = 0;
                    restart_lim = 100 * luby(++restart_no);
                    backjump(0);
                }
                continue;
            }
            // decide: highest activity, lowest index on ties
            int pick = 0;
            double best = -1.0;
            for (int v = 1; v <= num_vars; ++v)
                if (value[v] == 0 && activity[v] > best) {
                    best = activity[v];
                    pick = v;
                }
            if (pick == 0) return value;
            if (++budget > caps.max_decisions) throw CapacityError("sat: decision budget exceeded");
            trail_lim.push_back(trail.size());
            enqueue(phase[pick] >= 0 ? pick : -pick, -1);
        }
    }
};

// Tseitin conversion; returns the DPLL instance ready to solve.
inline Dpll to_cnf(const Circuit& circuit, int root_lit, int num_atom_vars, const SearchCaps& caps) {
    Dpll d;
    d.caps = caps;
    d.num_vars = num_atom_vars;
    if (root_lit == Circuit::FALSE_LIT) {
        d.num_vars = std::max(1, num_atom_vars);
        d.clauses.push_back({1});
        d.clauses.push_back({-1});
        return d;
    }
    std::vector<int> gate_var(circuit.gates.size() + 1, 0);
    std::function<int(int)> lit_of = [&](int l) -> int {
        int g = std::abs(l);
        int& v = gate_var[g];
        if (v == 0) {
            const auto& gate = circuit.gates[g - 1];
            if (gate.kind == 0) {
                v = gate.var;
            } else {
                v = ++d.num_vars;
                std::vector<int> big{gate.kind == 1 ? v : -v};
                for (int kid : gate.kids) {
                    int kl = lit_of(kid);
                    if (gate.kind == 1) {
                        d.add_clause({-v, kl});
                        big.push_back(-kl);
                    } else {
                        d.add_clause({v, -kl});
                        big.push_back(kl);
                    }
                }
                d.add_clause(std::move(big));
            }
            if (d.clauses.size() > caps.max_clauses) throw CapacityError("sat: clause cap exceeded");
        }
        return l > 0 ? v : -v;
    };
    if (root_lit != Circuit::TRUE_LIT) d.add_clause({lit_of(root_lit)});
    return d;
}

}  // namespace detail

// Smallest-domain model with size <= n_max under deterministic enumeration.
inline std::optional<Structure> bounded_model_search(const FormulaPtr& phi, int n_max,
                                                     const SearchCaps& caps = {}) {
    if (!is_sentence(phi)) throw Error("bounded_model_search: sentences only");
    Signature sig = signature_of(phi);
    for (int n = 1; n <= n_max; ++n) {
        detail::Grounder g{nullptr, n, caps, {}, {}, 0, 0};
        std::vector<int> env(static_cast<std::size_t>(max_var(phi)) + 1, 0);
        int root = g.ground(phi, env, true);
        detail::Dpll d = detail::to_cnf(g.circuit, root, g.num_vars, caps);
        auto model = d.solve();
        if (!model) continue;
        Structure s;
        s.domain_size = n;
        for (const auto& [p, ar] : sig.arity) s.declare(p, ar);
        for (const auto& [key, var] : g.atom_var)
            if ((*model)[var] == 1) s.add(key.first, key.second);
        return s;
    }
    return std::nullopt;
}

}  // namespace afkit
