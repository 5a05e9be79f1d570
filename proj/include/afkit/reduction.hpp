#pragma once

// The AF^{ell+1} -> AF^ell satisfiability reduction, in the canonical
// with-equality form (acl ∧ ψ0..ψ5 with stars and colours) and the
// equality-free form (acl ∧ ψ1..ψ4), together with the model expansion and
// model elevation constructions that witness the two directions.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "afkit/formula.hpp"
#include "afkit/structures.hpp"
#include "afkit/transform.hpp"
#include "afkit/types.hpp"
#include "afkit/words.hpp"

namespace afkit {

enum class ReductionVariant { WithEquality, EqualityFree };

struct ReductionCaps {
    std::size_t max_types = 60'000;
    std::size_t max_stars = 60'000;
    std::size_t max_inflated_domain = 3'000;
    std::size_t max_completion_tuples = 30'000'000;
};

// Proper colouring of a digraph with at most 2d+1 colours, d the maximum
// out-degree: greedy along a smallest-last (degeneracy) order, which keeps
// every vertex's already-coloured neighbourhood at size <= 2d.
inline std::vector<int> colour_digraph(int n, const std::set<std::pair<int, int>>& edges) {
    std::vector<std::set<int>> adj(n);
    for (auto [u, v] : edges) {
        if (u == v) continue;
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<int> degree(n);
    for (int v = 0; v < n; ++v) degree[v] = static_cast<int>(adj[v].size());
    std::vector<bool> removed(n, false);
    std::vector<int> order;
    order.reserve(n);
    for (int round = 0; round < n; ++round) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (!removed[v] && (best == -1 || degree[v] < degree[best])) best = v;
        removed[best] = true;
        order.push_back(best);
        for (int u : adj[best])
            if (!removed[u]) --degree[u];
    }
    std::vector<int> colour(n, -1);
    for (int i = n - 1; i >= 0; --i) {
        int v = order[i];
        std::set<int> used;
        for (int u : adj[v])
            if (colour[u] >= 0) used.insert(colour[u]);
        int c = 0;
        while (used.count(c)) ++c;
        colour[v] = c;
    }
    return colour;
}

// Circular witnessing index set: H = [1,z]^{k+1} with z = k^2+k+1, and
// g choosing the least value absent from the argument words.
struct WitnessIndexSet {
    int k = 1;
    int z = 3;
    std::vector<std::vector<int>> words;  // all of [1,z]^{k+1}, lexicographic

    explicit WitnessIndexSet(int k_) : k(k_), z(k_ * k_ + k_ + 1) {
        if (k < 1) throw Error("witness_index_set: k must be >= 1");
        std::vector<int> w(k + 1, 1);
        for (;;) {
            words.push_back(w);
            int pos = k;
            while (pos >= 0 && w[pos] == z) w[pos--] = 1;
            if (pos < 0) break;
            ++w[pos];
        }
    }

    std::size_t size() const { return words.size(); }

    int index_of(const std::vector<int>& w) const {
        std::size_t idx = 0;
        for (int d : w) idx = idx * z + (d - 1);
        return static_cast<int>(idx);
    }

    // g(t1..tk) = i0 i1 ... ik with i0 the least positive integer outside
    // the set of all letters occurring in the arguments' heads and tails.
    int apply(const std::vector<int>& h_indices) const {
        if (static_cast<int>(h_indices.size()) != k)
            throw DimensionError("witness index function expects a k-tuple");
        std::set<int> taken;
        std::vector<int> heads;
        for (int hi : h_indices) {
            const auto& w = words[hi];
            heads.push_back(w[0]);
            for (int d : w) taken.insert(d);
        }
        int i0 = 1;
        while (taken.count(i0)) ++i0;
        std::vector<int> out{i0};
        out.insert(out.end(), heads.begin(), heads.end());
        return index_of(out);
    }
};

inline WitnessIndexSet witness_index_set(int k) { return WitnessIndexSet(k); }

// Minimal witness sets: for each ell-tuple a minimal B covering every
// witness requirement; minimality makes the xi-witness map injective.
inline std::map<Tuple, std::vector<int>> choose_witness_sets(const Structure& a,
                                                             const NormalForm& nf) {
    const int ell = nf.ell;
    std::map<Tuple, std::vector<int>> out;
    std::vector<Tuple> tuples;
    Tuple t(ell, 0);
    std::function<void(int)> go = [&](int i) {
        if (i == ell) {
            tuples.push_back(t);
            return;
        }
        for (int e = 0; e < a.domain_size; ++e) {
            t[i] = e;
            go(i + 1);
        }
    };
    go(0);
    for (const auto& tup : tuples) {
        std::vector<std::vector<int>> cover(nf.gammas.size());
        std::map<int, int> asg;
        for (int i = 0; i < ell; ++i) asg[i + 1] = tup[i];
        for (std::size_t i = 0; i < nf.gammas.size(); ++i) {
            for (int b = 0; b < a.domain_size; ++b) {
                asg[ell + 1] = b;
                if (evaluate(a, nf.gammas[i], asg)) cover[i].push_back(b);
            }
            if (cover[i].empty())
                throw ModelError("choose_witness_sets: a tuple lacks a witness; the structure does not model the formula");
        }
        std::set<int> b_set;
        for (const auto& c : cover) b_set.insert(c.front());
        // prune to subset-minimality in ascending element order
        for (auto it = b_set.begin(); it != b_set.end();) {
            std::set<int> without(b_set);
            without.erase(*it);
            bool still = true;
            for (const auto& c : cover) {
                bool hit = false;
                for (int b : c)
                    if (without.count(b)) hit = true;
                if (!hit) still = false;
            }
            if (still) {
                b_set = std::move(without);
                it = b_set.begin();
            } else {
                ++it;
            }
        }
        out.emplace(tup, std::vector<int>(b_set.begin(), b_set.end()));
    }
    return out;
}

struct ReductionOutput {
    NormalForm psi;
    std::map<std::string, std::string> registry;
};

// Shared machinery: restricted universes, type tables, stars, names.
class Reduction {
  public:
    Reduction(NormalForm nf, ReductionVariant variant, ReductionCaps caps = {})
        : nf_(std::move(nf)), variant_(variant), caps_(caps) {
        build();
    }

    const NormalForm& input() const { return nf_; }
    ReductionVariant variant() const { return variant_; }
    int ell() const { return nf_.ell; }
    int colour_count() const { return colour_count_; }
    std::size_t star_count() const { return stars_.size(); }

    ReductionOutput output() const;
    Structure expand_model(const Structure& a) const;
    Structure elevate_model(const Structure& a) const;

    // exposed for tests
    struct Star {
        std::vector<std::pair<int, int>> dom;  // (type index, colour), sorted by type
        int underlying = -1;                   // index into low types
    };
    const std::vector<Star>& stars() const { return stars_; }
    const std::vector<AdjacentType>& types_up() const { return types_up_; }
    const std::vector<AdjacentType>& types_low() const { return types_low_; }
    const std::vector<std::vector<bool>>& gamma_sat() const { return gamma_sat_; }
    const std::vector<bool>& beta_hat_sat() const { return beta_hat_sat_; }
    int head_of(int t) const { return head_of_[t]; }
    int tail_of(int t) const { return tail_of_[t]; }

  private:
    NormalForm nf_;
    ReductionVariant variant_;
    ReductionCaps caps_;
    bool with_eq_ = true;

    UniversePtr u_up_, u_low_;
    std::vector<AdjacentType> types_up_, types_low_;
    std::map<std::vector<bool>, int> up_index_, low_index_;
    std::vector<int> head_of_, tail_of_, reverse_of_;
    std::vector<std::vector<bool>> gamma_sat_;
    std::vector<bool> beta_hat_sat_;
    std::vector<IncrementalType> inc_of_;
    std::vector<DefectSet> d_subsets_;              // over ell-1 positions
    std::vector<std::vector<bool>> inc_d_compat_;   // [type][subset]
    std::vector<Star> stars_;
    int colour_count_ = 0;
    FormulaPtr beta_hat_;
    Signature ext_sig_;
    std::map<std::string, std::string> registry_;

    static std::vector<bool> fingerprint(const AdjacentType& t) {
        std::vector<bool> fp(t.polarity.begin(), t.polarity.end());
        fp.insert(fp.end(), t.eq.begin(), t.eq.end());
        return fp;
    }

    std::string name_d(int len) const { return "_d" + std::to_string(len); }
    std::string name_p(int zeta) const { return "_p" + std::to_string(zeta); }
    std::string name_col(int c) const { return "_c" + std::to_string(c); }
    std::string name_s(int s) const { return "_s" + std::to_string(s); }
    std::string name_q(int s, int c) const {
        return "_q" + std::to_string(s) + "_" + std::to_string(c);
    }
    std::string name_r(int s, int c, int t) const {
        return "_r" + std::to_string(s) + "_" + std::to_string(c) + "_" + std::to_string(t);
    }

    void build();
    void build_stars();
    FormulaPtr low_type_formula(int z) const { return type_to_formula(types_low_[z]); }

    // helpers shared by expansion and elevation
    int atp_up_index(const Structure& a, const Tuple& t) const {
        auto it = up_index_.find(fingerprint(atp(a, t, u_up_)));
        if (it == up_index_.end()) throw ConstructionError("reduction: unregistered (ell+1)-type");
        return it->second;
    }
    int atp_low_index(const Structure& a, const Tuple& t) const {
        auto it = low_index_.find(fingerprint(atp(a, t, u_low_)));
        if (it == low_index_.end()) throw ConstructionError("reduction: unregistered ell-type");
        return it->second;
    }

    void assign_increment(Structure& b, std::map<std::pair<std::string, Tuple>, bool>& record,
                          const Tuple& t, int type_idx) const;
};

inline void Reduction::build() {
    if (nf_.ell < 2) throw ShapeError("reduction: input must be an AF^{ell+1} normal form with ell >= 2");
    if (nf_.gammas.empty()) throw ShapeError("reduction: the witness index set I must be non-empty");
    with_eq_ = variant_ == ReductionVariant::WithEquality;
    if (!with_eq_) {
        for (const auto& g : nf_.gammas)
            if (uses_equality(g)) throw FragmentError("equality-free reduction: gamma uses equality");
        if (uses_equality(nf_.beta)) throw FragmentError("equality-free reduction: beta uses equality");
    }
    const int ell = nf_.ell;
    FormulaPtr reference = nf_.to_formula();
    u_up_ = std::make_shared<AtomUniverse>(AtomUniverse::restricted(reference, ell + 1, with_eq_));
    u_low_ = std::make_shared<AtomUniverse>(AtomUniverse::restricted(reference, ell, with_eq_));

    types_up_ = enumerate_types(u_up_, caps_.max_types);
    types_low_ = enumerate_types(u_low_, caps_.max_types);
    for (std::size_t i = 0; i < types_up_.size(); ++i) up_index_[fingerprint(types_up_[i])] = static_cast<int>(i);
    for (std::size_t i = 0; i < types_low_.size(); ++i) low_index_[fingerprint(types_low_[i])] = static_cast<int>(i);

    beta_hat_ = hat(nf_.beta, ell + 1);

    // defect subsets over [1, ell-1]: odd factors of length > 2
    std::vector<std::pair<int, int>> odd_pairs;
    for (int i = 1; i <= ell - 1; ++i)
        for (int j = i + 1; j <= ell - 1; ++j)
            if ((j - i + 1) > 2 && (j - i + 1) % 2 == 1) odd_pairs.emplace_back(i, j);
    if (odd_pairs.size() > 12) throw CapacityError("reduction: too many defect positions");
    for (std::size_t mask = 0; mask < (std::size_t{1} << odd_pairs.size()); ++mask) {
        DefectSet d{ell - 1, {}};
        for (std::size_t b = 0; b < odd_pairs.size(); ++b)
            if (mask & (std::size_t{1} << b)) d.pairs.push_back(odd_pairs[b]);
        d_subsets_.push_back(std::move(d));
    }

    const std::size_t nt = types_up_.size();
    head_of_.resize(nt);
    tail_of_.resize(nt);
    reverse_of_.resize(nt);
    gamma_sat_.assign(nt, std::vector<bool>(nf_.gammas.size(), false));
    beta_hat_sat_.assign(nt, false);
    inc_d_compat_.assign(nt, std::vector<bool>(d_subsets_.size(), false));
    inc_of_.reserve(nt);
    auto low_lookup = [&](const AdjacentType& t) {
        auto it = low_index_.find(fingerprint(t));
        if (it == low_index_.end()) throw Error("reduction: restriction escaped the low universe");
        return it->second;
    };
    for (std::size_t i = 0; i < nt; ++i) {
        const AdjacentType& xi = types_up_[i];
        head_of_[i] = low_lookup(restrict_type(xi, 1, ell));
        tail_of_[i] = low_lookup(tail_type(xi));
        // reversal
        AdjacentType rev = xi;
        AdjacentFunction r = reversal_fn(ell + 1);
        for (std::size_t n = 0; n < u_up_->templates.size(); ++n) {
            int idx = u_up_->index_of(u_up_->templates[n].pred,
                                      compose_fn(r, u_up_->templates[n].fn));
            rev.polarity[n] = xi.polarity[idx];
        }
        std::reverse(rev.eq.begin(), rev.eq.end());
        auto itrev = up_index_.find(fingerprint(rev));
        reverse_of_[i] = itrev == up_index_.end() ? -1 : itrev->second;

        for (std::size_t g = 0; g < nf_.gammas.size(); ++g)
            gamma_sat_[i][g] = entails(xi, nf_.gammas[g]);
        beta_hat_sat_[i] = entails(xi, beta_hat_);
        inc_of_.push_back(increment(xi));
        for (std::size_t d = 0; d < d_subsets_.size(); ++d)
            inc_d_compat_[i][d] = is_d_compatible(inc_of_[i], shift_defects(d_subsets_[d]));
    }

    const int icount = static_cast<int>(nf_.gammas.size());
    colour_count_ = 2 * (icount * icount + icount) + 1;

    if (with_eq_) build_stars();

    // extended signature and the registry
    ext_sig_ = nf_.sig;
    auto reg = [&](const std::string& role, const std::string& name, int arity) {
        ext_sig_.declare(name, arity);
        registry_[role] = name;
    };
    for (int s = 1; 2 * s + 1 <= ell; ++s)
        reg("palindrome_marker[" + std::to_string(2 * s + 1) + "]", name_d(2 * s + 1), 2 * s + 1);
    for (std::size_t z = 0; z < types_low_.size(); ++z)
        reg("type_tail[" + std::to_string(z) + "]", name_p(static_cast<int>(z)), ell - 1);
    if (with_eq_) {
        for (int c = 0; c < colour_count_; ++c) reg("colour[" + std::to_string(c) + "]", name_col(c), ell);
        for (std::size_t s = 0; s < stars_.size(); ++s) {
            reg("star[" + std::to_string(s) + "]", name_s(static_cast<int>(s)), ell);
            for (int c = 0; c < colour_count_; ++c) {
                reg("star_tail[" + std::to_string(s) + "," + std::to_string(c) + "]",
                    name_q(static_cast<int>(s), c), ell - 1);
                for (const auto& [t, col] : stars_[s].dom)
                    reg("witness[" + std::to_string(s) + "," + std::to_string(c) + "," +
                            std::to_string(t) + "]",
                        name_r(static_cast<int>(s), c, t), ell);
            }
        }
    }
}

inline void Reduction::build_stars() {
    // candidates entail beta-hat and at least one gamma; group by underlying type
    const int icount = static_cast<int>(nf_.gammas.size());
    std::map<int, std::vector<int>> by_head;
    for (std::size_t i = 0; i < types_up_.size(); ++i) {
        if (!beta_hat_sat_[i]) continue;
        bool any = false;
        for (int g = 0; g < icount; ++g)
            if (gamma_sat_[i][g]) any = true;
        if (any) by_head[head_of_[i]].push_back(static_cast<int>(i));
    }
    for (const auto& [zeta, cands] : by_head) {
        // enumerate domains covering each witness requirement exactly once
        std::vector<std::vector<int>> domains;
        std::vector<int> chosen;
        std::vector<int> covered(icount, 0);
        std::function<void()> go = [&]() {
            int next = -1;
            for (int g = 0; g < icount; ++g)
                if (!covered[g]) {
                    next = g;
                    break;
                }
            if (next == -1) {
                domains.push_back(chosen);
                return;
            }
            for (int t : cands) {
                if (!gamma_sat_[t][next]) continue;
                bool clash = false;
                for (int g = 0; g < icount; ++g)
                    if (gamma_sat_[t][g] && covered[g]) clash = true;
                if (clash) continue;
                for (int g = 0; g < icount; ++g)
                    if (gamma_sat_[t][g]) covered[g] = 1;
                chosen.push_back(t);
                go();
                chosen.pop_back();
                for (int g = 0; g < icount; ++g)
                    if (gamma_sat_[t][g]) covered[g] = 0;
            }
        };
        go();
        for (auto& dom : domains) {
            std::sort(dom.begin(), dom.end());
            // all colour assignments, lexicographic
            std::vector<int> cols(dom.size(), 0);
            for (;;) {
                Star s;
                s.underlying = zeta;
                for (std::size_t i = 0; i < dom.size(); ++i) s.dom.emplace_back(dom[i], cols[i]);
                stars_.push_back(std::move(s));
                if (stars_.size() > caps_.max_stars) throw CapacityError("reduction: star cap exceeded");
                std::size_t pos = cols.size();
                while (pos > 0 && cols[pos - 1] == colour_count_ - 1) cols[--pos] = 0;
                if (pos == 0) break;
                ++cols[pos - 1];
            }
        }
    }
}

inline ReductionOutput Reduction::output() const {
    const int ell = nf_.ell;
    NormalForm out = adjacent_closure(nf_);
    out.sig = ext_sig_;
    std::vector<FormulaPtr> beta_parts;
    if (out.beta->kind == Kind::And)
        beta_parts = out.beta->kids;
    else
        beta_parts = {out.beta};

    auto x_seq = [&](int from, int to) {  // ascending or descending inclusive
        std::vector<int> v;
        if (from <= to)
            for (int i = from; i <= to; ++i) v.push_back(i);
        else
            for (int i = from; i >= to; --i) v.push_back(i);
        return v;
    };
    auto delta_formula = [&](const DefectSet& d) {
        std::vector<FormulaPtr> parts;
        for (auto [i, j] : d.pairs) parts.push_back(f_atom(name_d(j - i + 1), x_seq(i, j)));
        return f_and(std::move(parts));
    };

    // psi0: every ell-tuple carries exactly one colour
    if (with_eq_) {
        std::vector<FormulaPtr> one;
        std::vector<FormulaPtr> cols;
        for (int c = 0; c < colour_count_; ++c) cols.push_back(f_atom(name_col(c), x_seq(1, ell)));
        one.push_back(f_or(cols));
        for (int c = 0; c < colour_count_; ++c)
            for (int c2 = c + 1; c2 < colour_count_; ++c2)
                one.push_back(f_or({f_not(f_atom(name_col(c), x_seq(1, ell))),
                                    f_not(f_atom(name_col(c2), x_seq(1, ell)))}));
        beta_parts.push_back(f_and(std::move(one)));
    }

    // psi1: palindrome markers
    for (int s = 1; 2 * s + 1 <= ell; ++s) {
        std::vector<int> args;
        for (int i = 1; i <= s + 1; ++i) args.push_back(i);
        for (int i = s; i >= 1; --i) args.push_back(i);
        beta_parts.push_back(shift_up(f_atom(name_d(2 * s + 1), args), ell - (s + 1)));
    }

    // psi2,0: type tails
    for (std::size_t z = 0; z < types_low_.size(); ++z)
        beta_parts.push_back(
            f_implies(low_type_formula(static_cast<int>(z)), f_atom(name_p(static_cast<int>(z)), x_seq(2, ell))));

    std::vector<FormulaPtr> gammas_extra;
    if (with_eq_) {
        // psi2,1: exactly one star
        std::vector<FormulaPtr> star_atoms;
        for (std::size_t s = 0; s < stars_.size(); ++s)
            star_atoms.push_back(f_atom(name_s(static_cast<int>(s)), x_seq(1, ell)));
        std::vector<FormulaPtr> one{f_or(star_atoms)};
        for (std::size_t s = 0; s < stars_.size(); ++s)
            for (std::size_t s2 = s + 1; s2 < stars_.size(); ++s2)
                one.push_back(f_or({f_not(star_atoms[s]), f_not(star_atoms[s2])}));
        beta_parts.push_back(f_and(std::move(one)));

        // psi2,2: the star determines the underlying adjacent type
        for (std::size_t s = 0; s < stars_.size(); ++s)
            beta_parts.push_back(f_implies(f_atom(name_s(static_cast<int>(s)), x_seq(1, ell)),
                                           low_type_formula(stars_[s].underlying)));

        // psi2,3: tails of coloured stars
        for (std::size_t s = 0; s < stars_.size(); ++s)
            for (int c = 0; c < colour_count_; ++c)
                beta_parts.push_back(
                    f_implies(f_and({f_atom(name_s(static_cast<int>(s)), x_seq(1, ell)),
                                     f_atom(name_col(c), x_seq(1, ell))}),
                              f_atom(name_q(static_cast<int>(s), c), x_seq(2, ell))));

        // psi2,4: witness existence, one requirement per (star, colour, type)
        for (std::size_t s = 0; s < stars_.size(); ++s)
            for (int c = 0; c < colour_count_; ++c)
                for (const auto& [t, col] : stars_[s].dom)
                    gammas_extra.push_back(
                        f_implies(f_atom(name_q(static_cast<int>(s), c), x_seq(1, ell - 1)),
                                  f_atom(name_r(static_cast<int>(s), c, t), x_seq(1, ell))));

        // psi2,5: r fixes the tail type and the reversed tuple's colour
        for (std::size_t s = 0; s < stars_.size(); ++s)
            for (int c = 0; c < colour_count_; ++c)
                for (const auto& [t, col] : stars_[s].dom)
                    beta_parts.push_back(
                        f_implies(f_atom(name_r(static_cast<int>(s), c, t), x_seq(1, ell)),
                                  f_and({low_type_formula(tail_of_[t]),
                                         f_atom(name_col(col), x_seq(ell, 1))})));

        // psi2,6: mutual-inverse colour discipline on reversed stars
        for (std::size_t s = 0; s < stars_.size(); ++s)
            for (int c = 0; c < colour_count_; ++c)
                for (const auto& [t, col] : stars_[s].dom) {
                    std::vector<FormulaPtr> options;
                    for (std::size_t s2 = 0; s2 < stars_.size(); ++s2) {
                        bool ok = true;
                        for (const auto& [t2, col2] : stars_[s2].dom)
                            if (t2 != reverse_of_[t] && col2 == c) ok = false;
                        if (ok)
                            options.push_back(f_atom(name_s(static_cast<int>(s2)), x_seq(ell, 1)));
                    }
                    beta_parts.push_back(f_implies(f_atom(name_r(static_cast<int>(s), c, t), x_seq(1, ell)),
                                                   f_or(std::move(options))));
                }

        // psi2,7: distinct types of one star pick distinct witnesses
        for (std::size_t s = 0; s < stars_.size(); ++s)
            for (int c = 0; c < colour_count_; ++c)
                for (const auto& [t, col] : stars_[s].dom)
                    for (const auto& [t2, col2] : stars_[s].dom) {
                        if (t == t2) continue;
                        beta_parts.push_back(
                            f_implies(f_atom(name_r(static_cast<int>(s), c, t), x_seq(1, ell)),
                                      f_not(f_atom(name_r(static_cast<int>(s), c, t2), x_seq(1, ell)))));
                    }

        // psi3: defect guards forbid incompatible witnesses
        for (std::size_t d = 0; d < d_subsets_.size(); ++d) {
            std::vector<FormulaPtr> bans;
            for (std::size_t s = 0; s < stars_.size(); ++s)
                for (int c = 0; c < colour_count_; ++c)
                    for (const auto& [t, col] : stars_[s].dom)
                        if (!inc_d_compat_[t][d])
                            bans.push_back(f_not(f_atom(name_r(static_cast<int>(s), c, t), x_seq(1, ell))));
            if (bans.empty()) continue;
            beta_parts.push_back(f_implies(delta_formula(d_subsets_[d]), f_and(std::move(bans))));
        }
    } else {
        // equality-free psi3: existential completion per witness requirement
        for (std::size_t g = 0; g < nf_.gammas.size(); ++g)
            for (std::size_t z = 0; z < types_low_.size(); ++z)
                for (std::size_t d = 0; d < d_subsets_.size(); ++d) {
                    std::set<int> etas;
                    for (std::size_t t = 0; t < types_up_.size(); ++t)
                        if (beta_hat_sat_[t] && gamma_sat_[t][g] &&
                            head_of_[t] == static_cast<int>(z) && inc_d_compat_[t][d])
                            etas.insert(tail_of_[t]);
                    std::vector<FormulaPtr> disj;
                    for (int e : etas) disj.push_back(low_type_formula(e));
                    gammas_extra.push_back(
                        f_implies(f_and({delta_formula(d_subsets_[d]),
                                         f_atom(name_p(static_cast<int>(z)), x_seq(1, ell - 1))}),
                                  f_or(std::move(disj))));
                }
    }

    // psi4: universal completion
    for (std::size_t z = 0; z < types_low_.size(); ++z)
        for (std::size_t d = 0; d < d_subsets_.size(); ++d) {
            std::set<int> etas;
            for (std::size_t t = 0; t < types_up_.size(); ++t)
                if (beta_hat_sat_[t] && head_of_[t] == static_cast<int>(z) && inc_d_compat_[t][d])
                    etas.insert(tail_of_[t]);
            std::vector<FormulaPtr> disj;
            for (int e : etas) disj.push_back(low_type_formula(e));
            beta_parts.push_back(f_implies(f_and({delta_formula(d_subsets_[d]),
                                                  f_atom(name_p(static_cast<int>(z)), x_seq(1, ell - 1))}),
                                           f_or(std::move(disj))));
        }

    // psi5 (equality only): palindromic and hooked guards
    if (with_eq_) {
        if ((ell + 1) % 2 == 1) {
            for (std::size_t s = 0; s < stars_.size(); ++s)
                for (int c = 0; c < colour_count_; ++c)
                    for (const auto& [t, col] : stars_[s].dom) {
                        if (is_palindromic(types_up_[t])) continue;
                        FormulaPtr guard = ell - 1 >= 3 ? f_atom(name_d(ell - 1), x_seq(1, ell - 1))
                                                        : f_true();
                        beta_parts.push_back(
                            f_implies(f_and({f_atom(name_r(static_cast<int>(s), c, t), x_seq(1, ell)), guard}),
                                      f_not(f_atom(name_col(c), x_seq(ell, 1)))));
                    }
        }
        for (int s2 = 1; 2 * s2 + 1 < ell + 1; ++s2)
            for (std::size_t s = 0; s < stars_.size(); ++s)
                for (int c = 0; c < colour_count_; ++c)
                    for (const auto& [t, col] : stars_[s].dom) {
                        if (is_hooked(types_up_[t], s2)) continue;
                        beta_parts.push_back(
                            f_implies(f_atom(name_r(static_cast<int>(s), c, t), x_seq(1, ell)),
                                      f_not(f_atom(name_d(2 * s2 + 1), x_seq(ell - 2 * s2, ell)))));
                    }
    }

    out.gammas.insert(out.gammas.end(), gammas_extra.begin(), gammas_extra.end());
    out.beta = f_and(std::move(beta_parts));
    return ReductionOutput{std::move(out), registry_};
}

}  // namespace afkit

#include "afkit/reduction_models.hpp"
