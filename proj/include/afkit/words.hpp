#pragma once

// Combinatorics of words and adjacent functions: walks, generation, primitive
// generators, defect sets, D-equality and the lambda closure.
//
// A word is any random-access sequence of comparable symbols; std::string and
// std::vector<int> are the two instantiations used throughout.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "afkit/errors.hpp"

namespace afkit {

// f : [1,m] -> [1,k] given by its course of values; values[i-1] = f(i).
struct AdjacentFunction {
    std::vector<int> values;
    int codomain = 0;

    int length() const { return static_cast<int>(values.size()); }
    int at(int i) const { return values[i - 1]; }  // 1-based

    bool operator==(const AdjacentFunction&) const = default;
    auto operator<=>(const AdjacentFunction&) const = default;
};

inline AdjacentFunction identity_fn(int k) {
    AdjacentFunction f{{}, k};
    f.values.resize(k);
    for (int i = 0; i < k; ++i) f.values[i] = i + 1;
    return f;
}

inline AdjacentFunction reversal_fn(int k) {
    AdjacentFunction f{{}, k};
    f.values.resize(k);
    for (int i = 0; i < k; ++i) f.values[i] = k - i;
    return f;
}

// g o f, where f : [1,m] -> [1,k] and g : [1,k] -> [1,n].
inline AdjacentFunction compose_fn(const AdjacentFunction& g, const AdjacentFunction& f) {
    if (g.length() != f.codomain) throw DimensionError("compose_fn: domain of g must equal codomain of f");
    AdjacentFunction h{{}, g.codomain};
    h.values.reserve(f.values.size());
    for (int v : f.values) h.values.push_back(g.at(v));
    return h;
}

inline void validate_fn(const AdjacentFunction& f) {
    for (int v : f.values)
        if (v < 1 || v > f.codomain) throw Error("malformed function: entry out of [1,k]");
}

// True iff neighbouring values differ by at most 1 (and, when required, the
// course ends at the codomain's top value).
inline bool is_adjacent_fn(const AdjacentFunction& f, bool require_final = false) {
    validate_fn(f);
    for (std::size_t i = 0; i + 1 < f.values.size(); ++i)
        if (std::abs(f.values[i + 1] - f.values[i]) > 1) return false;
    if (require_final) {
        if (f.values.empty()) return false;
        if (f.values.back() != f.codomain) return false;
    }
    return true;
}

// For adjacent f the visited set is an interval, so surjectivity means the
// course touches both 1 and k.
inline bool is_surjective_fn(const AdjacentFunction& f) {
    if (f.codomain == 0) return f.values.empty();
    if (f.values.empty()) return false;
    auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
    std::vector<bool> seen(f.codomain + 1, false);
    for (int v : f.values) seen[v] = true;
    for (int v = 1; v <= f.codomain; ++v)
        if (!seen[v]) return false;
    (void)lo;
    (void)hi;
    return true;
}

// The walk a^f = a_{f(1)} ... a_{f(m)}.
template <class W>
W apply_walk(const W& a, const AdjacentFunction& f) {
    if (static_cast<int>(a.size()) != f.codomain)
        throw DimensionError("apply_walk: |word| must equal the walk's codomain");
    validate_fn(f);
    W out;
    out.reserve(f.values.size());
    for (int v : f.values) out.push_back(a[v - 1]);
    return out;
}

template <class W>
W reversed(W a) {
    std::reverse(a.begin(), a.end());
    return a;
}

template <class W>
bool is_palindrome(const W& a) {
    std::size_t n = a.size();
    for (std::size_t i = 0; 2 * i + 1 < n; ++i)
        if (!(a[i] == a[n - 1 - i])) return false;
    return true;
}

// All adjacent functions [1,m] -> [1,k] in lexicographic course order.
inline std::vector<AdjacentFunction> enumerate_adjacent(int m, int k, bool final_only = false,
                                                        bool surjective_only = false) {
    std::vector<AdjacentFunction> out;
    if (m == 0) {
        if (!final_only && !surjective_only) out.push_back(AdjacentFunction{{}, k});
        if (surjective_only && k == 0 && !final_only) out.push_back(AdjacentFunction{{}, k});
        return out;
    }
    if (k <= 0) return out;
    std::vector<int> course(m);
    std::function<void(int, int, int)> go = [&](int i, int lo, int hi) {
        if (i == m) {
            if (final_only && course[m - 1] != k) return;
            if (surjective_only && !(lo == 1 && hi == k)) return;
            out.push_back(AdjacentFunction{course, k});
            return;
        }
        int from = (i == 0) ? 1 : course[i - 1] - 1;
        int to = (i == 0) ? k : course[i - 1] + 1;
        for (int v = std::max(1, from); v <= std::min(k, to); ++v) {
            course[i] = v;
            go(i + 1, i == 0 ? v : std::min(lo, v), i == 0 ? v : std::max(hi, v));
        }
    };
    go(0, k + 1, 0);
    return out;
}

// Lexicographically least surjective adjacent f with a^f = c, if any.
template <class W>
std::optional<AdjacentFunction> generates(const W& a, const W& c) {
    const int k = static_cast<int>(a.size());
    const int m = static_cast<int>(c.size());
    if (k == 0 || m < k) return std::nullopt;
    std::vector<int> course(m);
    std::function<bool(int, int, int, int)> go = [&](int i, int cur, int lo, int hi) -> bool {
        if (i == m) return lo == 1 && hi == k;
        int rem = m - i;  // letters still to place, including position i+1
        int need;
        if (lo == 1 && hi == k) need = 0;
        else if (lo == 1) need = k - cur;
        else if (hi == k) need = cur - 1;
        else need = std::min((cur - 1) + (k - 1), (k - cur) + (k - 1));
        if (rem < need) return false;
        int from = (i == 0) ? 1 : cur - 1;
        int to = (i == 0) ? k : cur + 1;
        for (int v = std::max(1, from); v <= std::min(k, to); ++v) {
            if (!(a[v - 1] == c[i])) continue;
            course[i] = v;
            if (go(i + 1, v, i == 0 ? v : std::min(lo, v), i == 0 ? v : std::max(hi, v))) return true;
        }
        return false;
    };
    if (!go(0, 0, k + 1, 0)) return std::nullopt;
    return AdjacentFunction{course, k};
}

namespace detail {

// Depth-first search over walks: maintain the current offset and a partial
// offset -> letter labeling; the generator is the labeling over [lo,hi].
// Surjectivity is automatic because adjacent walks visit whole intervals.
template <class W>
struct GeneratorSearch {
    const W& c;
    int n;
    std::vector<std::optional<typename W::value_type>> label;  // index = offset + n
    std::vector<int> offsets, best_offsets;
    std::vector<std::optional<typename W::value_type>> best_label;
    int best_span;
    int distinct_total;

    explicit GeneratorSearch(const W& word)
        : c(word), n(static_cast<int>(word.size())), label(2 * word.size() + 1), offsets(word.size()), best_span(static_cast<int>(word.size()) + 1) {
        std::set<typename W::value_type> ds(word.begin(), word.end());
        distinct_total = static_cast<int>(ds.size());
    }

    void run() {
        label[n] = c[0];
        offsets[0] = 0;
        go(1, 0, 0, 0);
    }

    void go(int i, int cur, int lo, int hi) {
        int span = hi - lo + 1;
        if (span >= best_span) return;
        if (i == n) {
            best_span = span;
            best_offsets = offsets;
            best_label = label;
            return;
        }
        if (best_span <= distinct_total) return;  // already optimal
        for (int step : {0, -1, +1}) {
            int nxt = cur + step;
            auto& slot = label[nxt + n];
            if (slot.has_value()) {
                if (!(*slot == c[i])) continue;
                offsets[i] = nxt;
                go(i + 1, nxt, std::min(lo, nxt), std::max(hi, nxt));
            } else {
                slot = c[i];
                offsets[i] = nxt;
                go(i + 1, nxt, std::min(lo, nxt), std::max(hi, nxt));
                slot.reset();
            }
        }
    }
};

}  // namespace detail

// The canonical primitive generator (lexicographically least of the two
// mutual reversals) together with a witnessing surjective adjacent walk.
template <class W>
std::pair<W, AdjacentFunction> primitive_generator(const W& c) {
    if (c.empty()) throw Error("primitive_generator: word must be non-empty");
    detail::GeneratorSearch<W> search(c);
    search.run();
    int lo = *std::min_element(search.best_offsets.begin(), search.best_offsets.end());
    int hi = *std::max_element(search.best_offsets.begin(), search.best_offsets.end());
    int k = hi - lo + 1;
    W gen;
    gen.reserve(k);
    for (int o = lo; o <= hi; ++o) gen.push_back(*search.best_label[o + search.n]);
    AdjacentFunction f{{}, k};
    f.values.reserve(c.size());
    for (int o : search.best_offsets) f.values.push_back(o - lo + 1);
    W gen_rev = reversed(gen);
    if (std::lexicographical_compare(gen_rev.begin(), gen_rev.end(), gen.begin(), gen.end())) {
        gen = gen_rev;
        for (int& v : f.values) v = k + 1 - v;
    }
    return {gen, f};
}

template <class W>
int primitive_length(const W& c) {
    return static_cast<int>(primitive_generator(c).first.size());
}

template <class W>
bool is_primitive(const W& c) {
    return primitive_length(c) == static_cast<int>(c.size());
}

// Pairs <i,j> (1-based, i<j) whose factor is a non-trivial palindrome.
struct DefectSet {
    int word_length = 0;
    std::vector<std::pair<int, int>> pairs;  // sorted

    bool operator==(const DefectSet&) const = default;
};

template <class W>
DefectSet defects(const W& a) {
    const int k = static_cast<int>(a.size());
    DefectSet d{k, {}};
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
            bool pal = true;
            for (int t = 0; t <= (j - i) / 2 && pal; ++t)
                if (!(a[i - 1 + t] == a[j - 1 - t])) pal = false;
            if (pal) d.pairs.emplace_back(i, j);
        }
    return d;
}

// D^+ : every pair shifted up by one; the owning word grows by two (one fresh
// element on each side).
inline DefectSet shift_defects(const DefectSet& d) {
    DefectSet out{d.word_length + 2, {}};
    for (auto [i, j] : d.pairs) out.pairs.emplace_back(i + 1, j + 1);
    return out;
}

namespace detail {
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace detail

// f =_D g : <f(i), g(i)> lies in the equivalence closure D* for every i.
inline bool d_equal(const AdjacentFunction& f, const AdjacentFunction& g, const DefectSet& d) {
    if (f.length() != g.length() || f.codomain != g.codomain || f.codomain != d.word_length)
        throw DimensionError("d_equal: dimension mismatch");
    detail::UnionFind uf(d.word_length + 1);
    for (auto [i, j] : d.pairs) uf.unite(i, j);
    for (int i = 0; i < f.length(); ++i)
        if (uf.find(f.values[i]) != uf.find(g.values[i])) return false;
    return true;
}

// Is b generated by some strictly shorter word via a *final* adjacent walk?
template <class W>
bool is_terminal(const W& b) {
    const int m = static_cast<int>(b.size());
    if (m <= 1) return false;
    std::vector<std::optional<typename W::value_type>> label(2 * m + 1);
    bool found = false;
    std::function<void(int, int, int, int)> go = [&](int i, int cur, int lo, int hi) {
        if (found) return;
        if (hi - lo + 1 >= m) return;  // span must stay below |b|
        if (i == m) {
            if (cur == lo || cur == hi) found = true;  // walk ends at an end of the generator
            return;
        }
        for (int step : {0, -1, +1}) {
            int nxt = cur + step;
            auto& slot = label[nxt + m];
            if (slot.has_value()) {
                if (!(*slot == b[i])) continue;
                go(i + 1, nxt, std::min(lo, nxt), std::max(hi, nxt));
            } else {
                slot = b[i];
                go(i + 1, nxt, std::min(lo, nxt), std::max(hi, nxt));
                slot.reset();
            }
            if (found) return;
        }
    };
    label[m] = b[0];
    go(1, 0, 0, 0);
    return found;
}

enum class ExtensionCase { Primitive, LastElement, OddPalindromeSuffix, Terminal };

// All cases of the extension lemma that hold for the word b·x.
template <class W>
std::set<ExtensionCase> classify_extension(const W& b, typename W::value_type x) {
    if (b.empty()) throw Error("classify_extension: |b| must be >= 1");
    W bx = b;
    bx.push_back(x);
    std::set<ExtensionCase> cases;
    if (is_primitive(bx)) cases.insert(ExtensionCase::Primitive);
    if (b.back() == x) cases.insert(ExtensionCase::LastElement);
    const int n = static_cast<int>(bx.size());
    for (int len = 3; len <= n; len += 2) {
        W suf(bx.end() - len, bx.end());
        if (is_palindrome(suf)) {
            cases.insert(ExtensionCase::OddPalindromeSuffix);
            break;
        }
    }
    if (is_terminal(b)) cases.insert(ExtensionCase::Terminal);
    return cases;
}

// The three fixed courses used by the lambda closure, as maps applicable to
// words of length m+2 (their values stay within [1, m+1] for m >= 1).
inline std::array<AdjacentFunction, 3> lambda_courses(int m) {
    if (m < 0) throw Error("lambda_courses: m must be >= 0");
    auto mk = [&](std::vector<int> v) { return AdjacentFunction{std::move(v), m + 2}; };
    if (m == 0) {
        return {mk({1, 2}), mk({1, 2}), mk({1, 2})};
    }
    std::vector<int> l1{1, 2}, l2{1, 2}, l3{1, 2, 3};
    for (int t = 2; t <= m + 1; ++t) l1.push_back(t);
    for (int t = 1; t <= m; ++t) l2.push_back(t);
    for (int t = 3; t <= m + 1; ++t) l3.push_back(t);
    return {mk(std::move(l1)), mk(std::move(l2)), mk(std::move(l3))};
}

// Least fixpoint of the seeds under the three lambda walks, capped.
template <class W>
std::set<W> lambda_closure(const std::set<W>& seeds, int m, std::size_t cap = 1u << 20) {
    for (const W& s : seeds)
        if (static_cast<int>(s.size()) != m + 2)
            throw DimensionError("lambda_closure: every seed must have length m+2");
    auto ls = lambda_courses(m);
    std::set<W> closure = seeds;
    std::vector<W> work(seeds.begin(), seeds.end());
    while (!work.empty()) {
        W w = std::move(work.back());
        work.pop_back();
        for (const auto& l : ls) {
            W nxt = apply_walk(w, l);
            if (closure.insert(nxt).second) {
                if (closure.size() > cap) throw CapacityError("lambda_closure: cap exceeded");
                work.push_back(std::move(nxt));
            }
        }
    }
    return closure;
}

}  // namespace afkit
