#pragma once

// Compiler from alternating-Turing-machine descriptions to guarded-adjacent
// sentences, the ATM simulator used as the desk-scale oracle, and the
// acceptance-tree-to-model builder.
//
// Conventions: tape length 2^n for n = space_exponent; state predicates are
// binary (a configuration is a pair of elements acting as its 0- and 1-bit);
// tape symbols and the head predicate are n-ary over bit words.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "afkit/formula.hpp"
#include "afkit/parser.hpp"
#include "afkit/structures.hpp"
#include "afkit/words.hpp"

namespace afkit {

enum class StateKind { Existential, Universal, Accept, Reject };

struct AtmState {
    std::string name;
    StateKind kind;
};

struct AtmTransition {
    std::string from, read, to, write;
    int move = 0;  // -1, 0, +1
};

struct AtmSpec {
    std::vector<AtmState> states;
    std::vector<std::string> alphabet;  // without the blank
    std::string blank = "_";
    std::string initial;
    std::vector<AtmTransition> transitions;
    int space_exponent = 1;

    int state_index(const std::string& s) const {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i].name == s) return static_cast<int>(i);
        return -1;
    }
    std::vector<std::string> full_alphabet() const {
        auto out = alphabet;
        out.push_back(blank);
        return out;
    }
    std::vector<int> enabled(int state, const std::string& symbol) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < transitions.size(); ++i)
            if (transitions[i].from == states[state].name && transitions[i].read == symbol)
                out.push_back(static_cast<int>(i));
        return out;
    }
};

inline void validate_machine(const AtmSpec& m) {
    if (m.space_exponent < 1 || m.space_exponent > 4)
        throw InputError("machine: space_exponent must be within [1,4]");
    int accepts = 0, rejects = 0;
    std::set<std::string> names;
    for (const auto& s : m.states) {
        if (!names.insert(s.name).second) throw InputError("machine: duplicate state " + s.name);
        if (!detail::valid_pred_name(s.name) || detail::parse_var_token(s.name))
            throw InputError("machine: state name '" + s.name + "' is not a valid predicate name");
        accepts += s.kind == StateKind::Accept;
        rejects += s.kind == StateKind::Reject;
    }
    if (accepts != 1 || rejects != 1)
        throw InputError("machine: exactly one accepting and one rejecting state are required");
    if (m.state_index(m.initial) < 0) throw InputError("machine: unknown initial state");
    std::set<std::string> symbols(m.alphabet.begin(), m.alphabet.end());
    symbols.insert(m.blank);
    if (symbols.size() != m.alphabet.size() + 1) throw InputError("machine: duplicate symbols");
    for (const auto& s : symbols) {
        if (!detail::valid_pred_name(s) && s != "_")
            throw InputError("machine: symbol '" + s + "' is not usable as a predicate name");
        if (names.count(s)) throw InputError("machine: symbol '" + s + "' collides with a state");
    }
    for (const auto& t : m.transitions) {
        int from = m.state_index(t.from);
        if (from < 0 || m.state_index(t.to) < 0) throw InputError("machine: transition over unknown state");
        if (!symbols.count(t.read) || !symbols.count(t.write))
            throw InputError("machine: transition over unknown symbol");
        if (t.move < -1 || t.move > 1) throw InputError("machine: move must be -1, 0 or 1");
        StateKind k = m.states[from].kind;
        if (k == StateKind::Accept || k == StateKind::Reject)
            throw InputError("machine: halting states may not have enabled transitions");
    }
    for (std::size_t q = 0; q < m.states.size(); ++q) {
        StateKind k = m.states[q].kind;
        if (k == StateKind::Accept || k == StateKind::Reject) continue;
        for (const auto& s : symbols)
            if (m.enabled(static_cast<int>(q), s).empty())
                throw InputError("machine: non-halting state '" + m.states[q].name +
                                 "' has no transition on '" + s + "'");
    }
}

struct AtmConfig {
    int state = 0;
    std::vector<int> tape;  // indices into full_alphabet()
    int head = 0;

    auto operator<=>(const AtmConfig&) const = default;
};

struct AcceptanceNode {
    AtmConfig config;
    std::vector<std::pair<int, int>> children;  // (transition index, node id)
};

struct AcceptanceTree {
    std::vector<AcceptanceNode> nodes;  // node 0 is the root
};

// Direct acceptance decision over the finite configuration space, by least
// fixpoint over the reachable graph; returns a witnessing tree when accepting.
inline std::optional<AcceptanceTree> atm_accepts(const AtmSpec& m, const std::string& w0,
                                                 std::size_t config_cap = 200'000) {
    validate_machine(m);
    auto symbols = m.full_alphabet();
    auto symbol_index = [&](const std::string& s) {
        for (std::size_t i = 0; i < symbols.size(); ++i)
            if (symbols[i] == s) return static_cast<int>(i);
        throw InputError("machine: unknown symbol '" + s + "'");
    };
    const int tape_len = 1 << m.space_exponent;
    if (static_cast<int>(w0.size()) > tape_len) throw InputError("input does not fit on the tape");

    AtmConfig init;
    init.state = m.state_index(m.initial);
    init.head = 0;
    init.tape.assign(tape_len, symbol_index(m.blank));
    for (std::size_t i = 0; i < w0.size(); ++i) init.tape[i] = symbol_index(std::string(1, w0[i]));

    // forward reachability
    std::map<AtmConfig, int> id_of;
    std::vector<AtmConfig> configs;
    std::vector<std::vector<std::pair<int, int>>> succs;  // (transition, config id)
    std::function<int(const AtmConfig&)> intern = [&](const AtmConfig& c) {
        auto it = id_of.find(c);
        if (it != id_of.end()) return it->second;
        int id = static_cast<int>(configs.size());
        if (configs.size() >= config_cap) throw CapacityError("atm: configuration cap exceeded");
        id_of.emplace(c, id);
        configs.push_back(c);
        succs.emplace_back();
        return id;
    };
    intern(init);
    for (std::size_t i = 0; i < configs.size(); ++i) {
        AtmConfig c = configs[i];
        const std::string& sym = symbols[c.tape[c.head]];
        for (int t : m.enabled(c.state, sym)) {
            const auto& tr = m.transitions[t];
            AtmConfig n = c;
            n.tape[c.head] = symbol_index(tr.write);
            n.head = c.head + tr.move;
            if (n.head < 0 || n.head >= tape_len)
                throw InputError("machine: head left the 2^n tape");
            n.state = m.state_index(tr.to);
            int target = intern(n);  // may reallocate succs
            succs[i].emplace_back(t, target);
        }
    }

    // least fixpoint of acceptance, recording the round each id was marked in
    std::vector<int> round(configs.size(), -1);
    for (std::size_t i = 0; i < configs.size(); ++i)
        if (m.states[configs[i].state].kind == StateKind::Accept) round[i] = 0;
    for (int r = 1;; ++r) {
        bool changed = false;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            if (round[i] >= 0) continue;
            StateKind k = m.states[configs[i].state].kind;
            if (k == StateKind::Reject) continue;
            bool ok;
            if (k == StateKind::Existential) {
                ok = false;
                for (auto [t, j] : succs[i])
                    if (round[j] >= 0) ok = true;
            } else {
                ok = !succs[i].empty();
                for (auto [t, j] : succs[i])
                    if (round[j] < 0) ok = false;
            }
            if (ok) {
                round[i] = r;
                changed = true;
            }
        }
        if (!changed) break;
    }
    if (round[0] < 0) return std::nullopt;

    AcceptanceTree tree;
    std::function<int(int)> emit = [&](int cid) -> int {
        int node = static_cast<int>(tree.nodes.size());
        if (tree.nodes.size() >= config_cap) throw CapacityError("atm: tree cap exceeded");
        tree.nodes.push_back(AcceptanceNode{configs[cid], {}});
        StateKind k = m.states[configs[cid].state].kind;
        if (k == StateKind::Accept) return node;
        if (k == StateKind::Existential) {
            for (auto [t, j] : succs[cid])
                if (round[j] >= 0 && round[j] < round[cid]) {
                    int child = emit(j);  // may reallocate the node vector
                    tree.nodes[node].children.emplace_back(t, child);
                    break;
                }
        } else {
            for (auto [t, j] : succs[cid]) {
                int child = emit(j);
                tree.nodes[node].children.emplace_back(t, child);
            }
        }
        return node;
    };
    emit(0);
    return tree;
}

// ---------------------------------------------------------------------------
// formula templates

namespace atmenc {

inline std::vector<int> seq(int from, int to) {
    std::vector<int> v;
    if (from <= to)
        for (int i = from; i <= to; ++i) v.push_back(i);
    else
        for (int i = from; i >= to; --i) v.push_back(i);
    return v;
}

inline FormulaPtr forall_chain(int upto, FormulaPtr body) {
    for (int v = upto; v >= 1; --v) body = f_forall(v, std::move(body));
    return body;
}

}  // namespace atmenc

// genright_m(p): the base tuple plus the three lambda-propagation conjuncts.
inline FormulaPtr gen_right(int m, const std::string& p, const std::string& g_name) {
    std::vector<FormulaPtr> parts;
    std::vector<int> base{1, 2};
    for (int i = 0; i < m; ++i) base.push_back(2);
    parts.push_back(
        atmenc::forall_chain(2, f_implies(f_atom(p, {1, 2}), f_atom(g_name, std::move(base)))));
    for (const auto& lambda : lambda_courses(m)) {
        FormulaPtr body = f_implies(f_atom(g_name, atmenc::seq(1, m + 2)),
                                    f_atom(g_name, lambda.values));
        parts.push_back(atmenc::forall_chain(m + 2, std::move(body)));
    }
    return f_and(std::move(parts));
}

// genbi_m(r): the mirrored device over a pair of alphabets; 1 + 16 conjuncts.
inline FormulaPtr gen_bi(int m, const std::string& r, const std::string& f_name) {
    std::vector<FormulaPtr> parts;
    // base: r(y x z t) -> F(y..y y x z t t..t), with officials y=x1,x=x2,z=x3,t=x4
    std::vector<int> base;
    for (int i = 0; i < m; ++i) base.push_back(1);
    base.insert(base.end(), {1, 2, 3, 4});
    for (int i = 0; i < m; ++i) base.push_back(4);
    parts.push_back(
        atmenc::forall_chain(4, f_implies(f_atom(r, {1, 2, 3, 4}), f_atom(f_name, std::move(base)))));

    auto lambdas = lambda_courses(m);
    auto course = [&](int i) {
        if (i == 0) return identity_fn(m + 2);
        return lambdas[i - 1];
    };
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) {
            std::vector<int> args;
            for (int p = 1; p <= m + 2; ++p) args.push_back(m + 3 - course(i).at(m + 3 - p));
            for (int p = 1; p <= m + 2; ++p) args.push_back(m + 2 + course(j).at(p));
            FormulaPtr body =
                f_implies(f_atom(f_name, atmenc::seq(1, 2 * m + 4)), f_atom(f_name, std::move(args)));
            parts.push_back(atmenc::forall_chain(2 * m + 4, std::move(body)));
        }
    return f_and(std::move(parts));
}

// value equality and +-1 over n-bit big-endian words of zero/one bits
inline FormulaPtr num_eq(const std::vector<int>& c, const std::vector<int>& d,
                         const std::string& one = "O") {
    if (c.size() != d.size()) throw DimensionError("num_eq: length mismatch");
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < c.size(); ++i)
        parts.push_back(f_iff(f_atom(one, {c[i]}), f_atom(one, {d[i]})));
    return f_and(std::move(parts));
}

// val(c) = val(d) + 1, without wrap-around
inline FormulaPtr num_eq_plus_one(const std::vector<int>& c, const std::vector<int>& d,
                                  const std::string& one = "O") {
    if (c.size() != d.size()) throw DimensionError("num_eq_plus_one: length mismatch");
    const int n = static_cast<int>(c.size());
    std::vector<FormulaPtr> cases;
    for (int i = 0; i < n; ++i) {
        std::vector<FormulaPtr> conj{f_atom(one, {c[i]}), f_not(f_atom(one, {d[i]}))};
        for (int j = 0; j < i; ++j) conj.push_back(f_iff(f_atom(one, {c[j]}), f_atom(one, {d[j]})));
        for (int j = i + 1; j < n; ++j) {
            conj.push_back(f_not(f_atom(one, {c[j]})));
            conj.push_back(f_atom(one, {d[j]}));
        }
        cases.push_back(f_and(std::move(conj)));
    }
    return f_or(std::move(cases));
}

inline FormulaPtr num_eq_plus(const std::vector<int>& c, const std::vector<int>& d, int k,
                              const std::string& one = "O") {
    if (k == 0) return num_eq(c, d, one);
    if (k == 1) return num_eq_plus_one(c, d, one);
    if (k == -1) return num_eq_plus_one(d, c, one);
    throw Error("num_eq_plus: k must be -1, 0 or +1");
}

// canonical templates over x1..x_{2n}
struct NumFormulas {
    FormulaPtr eq, plus_one, minus_one;
};
inline NumFormulas num_formulas(int n) {
    if (n < 1) throw Error("num_formulas: n must be >= 1");
    auto c = atmenc::seq(1, n);
    auto d = atmenc::seq(n + 1, 2 * n);
    return {num_eq(c, d), num_eq_plus(c, d, 1), num_eq_plus(c, d, -1)};
}

namespace atmenc {

struct Names {
    int n;
    std::string one = "O";
    std::string head = "H";
    std::string gn, g2n, fn;
    std::string symbol_blank;

    explicit Names(const AtmSpec& m) : n(m.space_exponent) {
        gn = "G" + std::to_string(n);
        g2n = "G" + std::to_string(2 * n);
        fn = "F" + std::to_string(n);
        symbol_blank = m.blank == "_" ? "blank" : m.blank;
        std::set<std::string> taken;
        for (const auto& s : m.states) taken.insert(s.name);
        for (const auto& s : m.alphabet) taken.insert(s);
        for (const auto& s : {one, head, gn, g2n, fn, symbol_blank, std::string("E")})
            if (taken.count(s))
                throw InputError("machine: name '" + s + "' collides with an encoder predicate");
    }
    std::string symbol(const AtmSpec& m, int idx) const {
        auto all = m.full_alphabet();
        return all[idx] == m.blank ? symbol_blank : all[idx];
    }
    std::string transition(int t) const { return "E" + std::to_string(t); }
};

}  // namespace atmenc

// The guarded-adjacent sentence satisfiable iff the machine accepts the input.
inline FormulaPtr encode_atm(const AtmSpec& m, const std::string& w0) {
    validate_machine(m);
    atmenc::Names nm(m);
    const int n = m.space_exponent;
    const int tape_len = 1 << n;
    if (static_cast<int>(w0.size()) > tape_len) throw InputError("input does not fit on the tape");
    auto symbols = m.full_alphabet();
    auto sym_name = [&](const std::string& s) { return s == m.blank ? nm.symbol_blank : s; };

    std::vector<FormulaPtr> conjuncts;
    using atmenc::forall_chain;
    using atmenc::seq;

    // bit discipline: states mark their pair as a zero bit and a one bit
    for (const auto& st : m.states)
        conjuncts.push_back(forall_chain(
            2, f_implies(f_atom(st.name, {1, 2}),
                         f_and({f_not(f_atom(nm.one, {1})), f_atom(nm.one, {2})}))));

    // per-state blocks: generators and consistency
    for (const auto& st : m.states) {
        conjuncts.push_back(gen_right(n, st.name, nm.gn));
        conjuncts.push_back(gen_right(2 * n, st.name, nm.g2n));
        // unique head position, guarded by G_{2n}
        {
            auto u = seq(3, n + 2), v = seq(n + 3, 2 * n + 2);
            FormulaPtr body = f_implies(
                f_atom(nm.g2n, seq(1, 2 * n + 2)),
                f_implies(f_and({f_atom(nm.head, u), f_atom(nm.head, v)}), num_eq(u, v, nm.one)));
            conjuncts.push_back(forall_chain(2 * n + 2, std::move(body)));
        }
        // at most one symbol per cell, guarded by G_n
        {
            auto u = seq(3, n + 2);
            std::vector<FormulaPtr> excl;
            for (std::size_t s1 = 0; s1 < symbols.size(); ++s1)
                for (std::size_t s2 = s1 + 1; s2 < symbols.size(); ++s2)
                    excl.push_back(f_not(f_and({f_atom(sym_name(symbols[s1]), u),
                                                f_atom(sym_name(symbols[s2]), u)})));
            conjuncts.push_back(forall_chain(
                n + 2, f_implies(f_atom(nm.gn, seq(1, n + 2)), f_and(std::move(excl)))));
        }
        // at most one state per pair
        {
            std::vector<FormulaPtr> excl;
            for (const auto& other : m.states)
                if (other.name != st.name) excl.push_back(f_not(f_atom(other.name, {1, 2})));
            conjuncts.push_back(
                forall_chain(2, f_implies(f_atom(st.name, {1, 2}), f_and(std::move(excl)))));
        }
    }

    // per-transition blocks over F_n; layout u_1..u_n y x z t v_1..v_n
    for (std::size_t t = 0; t < m.transitions.size(); ++t) {
        const auto& tr = m.transitions[t];
        const std::string e = nm.transition(static_cast<int>(t));
        conjuncts.push_back(gen_bi(n, e, nm.fn));
        auto u = seq(1, n), v = seq(n + 5, 2 * n + 4);
        std::vector<int> yxzt{n + 1, n + 2, n + 3, n + 4};
        FormulaPtr guard = f_atom(nm.fn, seq(1, 2 * n + 4));
        FormulaPtr e_atom = f_atom(e, yxzt);
        // successor state
        conjuncts.push_back(
            forall_chain(4, f_implies(f_atom(e, {1, 2, 3, 4}), f_atom(tr.to, {3, 4}))));
        // head movement
        conjuncts.push_back(forall_chain(
            2 * n + 4,
            f_implies(guard, f_implies(f_and({e_atom, f_atom(nm.head, u),
                                              num_eq_plus(v, u, tr.move, nm.one)}),
                                       f_atom(nm.head, v)))));
        // the written symbol
        conjuncts.push_back(forall_chain(
            2 * n + 4,
            f_implies(guard, f_implies(f_and({e_atom, f_atom(nm.head, u), num_eq(u, v, nm.one)}),
                                       f_atom(sym_name(tr.write), v)))));
        // frame: untouched cells are inherited both ways
        std::vector<FormulaPtr> frame;
        for (const auto& s : symbols)
            frame.push_back(f_iff(f_atom(sym_name(s), u), f_atom(sym_name(s), v)));
        conjuncts.push_back(forall_chain(
            2 * n + 4,
            f_implies(guard,
                      f_implies(f_and({e_atom, f_not(f_atom(nm.head, u)), num_eq(u, v, nm.one)}),
                                f_and(std::move(frame))))));
    }

    // the initial configuration
    {
        auto bits = [&](int value) {  // n-bit MSB-first word over {x1, x2}
            std::vector<int> w;
            for (int b = n - 1; b >= 0; --b) w.push_back((value >> b) & 1 ? 2 : 1);
            return w;
        };
        std::vector<FormulaPtr> root{f_atom(m.initial, {1, 2}), f_atom(nm.head, bits(0))};
        for (std::size_t i = 0; i < w0.size(); ++i)
            root.push_back(f_atom(sym_name(std::string(1, w0[i])), bits(static_cast<int>(i))));
        // cells beyond the input are blank
        auto u = seq(3, n + 2);
        std::vector<FormulaPtr> not_input;
        for (std::size_t i = 0; i < w0.size(); ++i)
            not_input.push_back(f_not(num_eq(bits(static_cast<int>(i)), u, nm.one)));
        FormulaPtr blanks = f_implies(f_atom(nm.gn, seq(1, n + 2)),
                                      f_implies(f_and(std::move(not_input)),
                                                f_atom(nm.symbol_blank, u)));
        for (int vv = n + 2; vv >= 3; --vv) blanks = f_forall(vv, std::move(blanks));
        root.push_back(std::move(blanks));
        conjuncts.push_back(f_exists(1, f_exists(2, f_and(std::move(root)))));
    }

    // successor axioms: officials x1..xn = the head word reversed, then y, x
    for (std::size_t q = 0; q < m.states.size(); ++q) {
        StateKind k = m.states[q].kind;
        if (k == StateKind::Accept || k == StateKind::Reject) continue;
        for (const auto& s : symbols) {
            auto enabled = m.enabled(static_cast<int>(q), s);
            std::vector<FormulaPtr> nexts;
            for (int t : enabled) {
                FormulaPtr e = f_atom(nm.transition(t), {n + 1, n + 2, n + 3, n + 4});
                nexts.push_back(f_exists(n + 3, f_exists(n + 4, std::move(e))));
            }
            FormulaPtr step = k == StateKind::Existential ? f_or(std::move(nexts))
                                                          : f_and(std::move(nexts));
            std::vector<int> guard_args{n + 2, n + 1};
            for (int i = n; i >= 1; --i) guard_args.push_back(i);
            std::vector<int> head_args = seq(n, 1);
            FormulaPtr body = f_implies(
                f_atom(nm.gn, std::move(guard_args)),
                f_implies(f_and({f_atom(m.states[q].name, {n + 2, n + 1}), f_atom(nm.head, head_args),
                                 f_atom(sym_name(s), head_args)}),
                          std::move(step)));
            conjuncts.push_back(forall_chain(n + 2, std::move(body)));
        }
    }

    // a rejecting configuration is never encoded
    for (const auto& st : m.states)
        if (st.kind == StateKind::Reject)
            conjuncts.push_back(f_not(f_exists(1, f_exists(2, f_atom(st.name, {1, 2})))));

    return f_and(std::move(conjuncts));
}

// Expands an acceptance tree into a model of the encoding: two fresh elements
// per node, generator predicates saturated.
inline Structure build_model_from_tree(const AtmSpec& m, const std::string& w0,
                                       const AcceptanceTree& tree) {
    validate_machine(m);
    atmenc::Names nm(m);
    const int n = m.space_exponent;
    const int tape_len = 1 << n;
    if (tree.nodes.empty()) throw InputError("tree: empty");
    auto symbols = m.full_alphabet();
    auto sym_name = [&](int idx) { return nm.symbol(m, idx); };

    // validate the tree against the machine
    {
        const auto& root = tree.nodes[0].config;
        if (m.states[root.state].name != m.initial || root.head != 0)
            throw InputError("tree: root is not the initial configuration");
        for (const auto& node : tree.nodes) {
            StateKind k = m.states[node.config.state].kind;
            auto enabled = m.enabled(node.config.state, symbols[node.config.tape[node.config.head]]);
            if (k == StateKind::Reject) throw InputError("tree: contains a rejecting configuration");
            if (k == StateKind::Accept && !node.children.empty())
                throw InputError("tree: accepting leaves may not have children");
            if (k == StateKind::Existential && node.children.empty())
                throw InputError("tree: existential node without a child");
            if (k == StateKind::Universal &&
                node.children.size() != enabled.size())
                throw InputError("tree: universal node must follow every enabled transition");
        }
    }

    Structure a;
    a.domain_size = 2 * static_cast<int>(tree.nodes.size());
    auto zero_of = [&](int node) { return 2 * node; };
    auto one_of = [&](int node) { return 2 * node + 1; };

    a.declare(nm.one, 1);
    a.declare(nm.head, n);
    for (const auto& st : m.states) a.declare(st.name, 2);
    for (std::size_t s = 0; s < symbols.size(); ++s) a.declare(sym_name(static_cast<int>(s)), n);
    a.declare(nm.gn, n + 2);
    a.declare(nm.g2n, 2 * n + 2);
    a.declare(nm.fn, 2 * n + 4);
    for (std::size_t t = 0; t < m.transitions.size(); ++t)
        a.declare(nm.transition(static_cast<int>(t)), 4);

    auto word_of = [&](int node, int value) {
        Tuple w;
        for (int b = n - 1; b >= 0; --b)
            w.push_back((value >> b) & 1 ? one_of(node) : zero_of(node));
        return w;
    };
    auto saturate = [&](const std::string& pred, const Tuple& prefix, int node, int count) {
        // all extensions of the prefix by count letters over the node's bits
        Tuple t = prefix;
        std::function<void(int)> go = [&](int left) {
            if (left == 0) {
                a.add(pred, t);
                return;
            }
            for (int bit = 0; bit < 2; ++bit) {
                t.push_back(bit ? one_of(node) : zero_of(node));
                go(left - 1);
                t.pop_back();
            }
        };
        go(count);
    };

    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const auto& c = tree.nodes[v].config;
        int node = static_cast<int>(v);
        a.add(nm.one, {one_of(node)});
        a.add(m.states[c.state].name, {zero_of(node), one_of(node)});
        a.add(nm.head, word_of(node, c.head));
        for (int cell = 0; cell < tape_len; ++cell)
            a.add(sym_name(c.tape[cell]), word_of(node, cell));
        saturate(nm.gn, {zero_of(node), one_of(node)}, node, n);
        saturate(nm.g2n, {zero_of(node), one_of(node)}, node, 2 * n);
    }
    for (std::size_t v = 0; v < tree.nodes.size(); ++v)
        for (auto [t, child] : tree.nodes[v].children) {
            int pu = static_cast<int>(v);
            a.add(nm.transition(t), {one_of(pu), zero_of(pu), zero_of(child), one_of(child)});
            // F_n: all {a,b}^n prefixes over the parent and suffixes over the child
            Tuple mid{one_of(pu), zero_of(pu), zero_of(child), one_of(child)};
            Tuple pre;
            std::function<void(int)> pref = [&](int left) {
                if (left == 0) {
                    Tuple full = pre;
                    full.insert(full.end(), mid.begin(), mid.end());
                    saturate(nm.fn, full, child, n);
                    return;
                }
                for (int bit = 0; bit < 2; ++bit) {
                    pre.push_back(bit ? one_of(pu) : zero_of(pu));
                    pref(left - 1);
                    pre.pop_back();
                }
            };
            pref(n);
        }
    return a;
}

}  // namespace afkit
