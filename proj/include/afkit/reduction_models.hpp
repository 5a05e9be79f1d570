#pragma once

// Model expansion (a model of phi expands to a model of psi) and model
// elevation (a layered model of psi elevates to a model of phi), matching the
// two directions of the reduction.  Included from reduction.hpp.

#include "afkit/reduction.hpp"

namespace afkit {

namespace detail {

inline std::vector<Tuple> all_tuples(int domain, int len) {
    std::vector<Tuple> out;
    Tuple t(len, 0);
    std::function<void(int)> go = [&](int i) {
        if (i == len) {
            out.push_back(t);
            return;
        }
        for (int e = 0; e < domain; ++e) {
            t[i] = e;
            go(i + 1);
        }
    };
    go(0);
    return out;
}

template <class F>
void for_each_tuple(int domain, int len, F&& fn) {
    Tuple t(len, 0);
    std::function<void(int)> go = [&](int i) {
        if (i == len) {
            fn(t);
            return;
        }
        for (int e = 0; e < domain; ++e) {
            t[i] = e;
            go(i + 1);
        }
    };
    go(0);
}

}  // namespace detail

inline void Reduction::assign_increment(Structure& b,
                                        std::map<std::pair<std::string, Tuple>, bool>& record,
                                        const Tuple& t, int type_idx) const {
    const IncrementalType& inc = inc_of_[type_idx];
    for (std::size_t i = 0; i < inc.universe->templates.size(); ++i) {
        const auto& tpl = inc.universe->templates[i];
        Tuple w = apply_walk(t, tpl.fn);
        bool pol = inc.polarity[i];
        auto [it, fresh] = record.emplace(std::make_pair(tpl.pred, w), pol);
        if (!fresh && it->second != pol)
            throw ConstructionError("elevation: conflicting assignments to a generated tuple");
        if (fresh && pol) b.add(tpl.pred, std::move(w));
    }
}

inline Structure Reduction::expand_model(const Structure& a) const {
    const int ell = nf_.ell;
    if (!evaluate(a, nf_.to_formula())) throw ModelError("expand_model: structure does not model the input");

    auto wsets = choose_witness_sets(a, nf_);
    auto ell_tuples = detail::all_tuples(a.domain_size, ell);
    auto tails = detail::all_tuples(a.domain_size, ell - 1);

    // xi-witness map per ell-tuple; minimality makes it injective
    std::map<Tuple, std::vector<std::pair<int, int>>> xi_wit;  // (type idx, witness b)
    for (const auto& tup : ell_tuples) {
        std::map<int, int> seen;
        for (int b : wsets.at(tup)) {
            Tuple ext = tup;
            ext.push_back(b);
            int t = atp_up_index(a, ext);
            auto [it, fresh] = seen.emplace(t, b);
            if (!fresh) throw ConstructionError("expand_model: witness types are not injective");
        }
        std::vector<std::pair<int, int>> v(seen.begin(), seen.end());
        xi_wit.emplace(tup, std::move(v));
    }

    // colour every ell-tuple via the witness digraph of its tail
    std::map<Tuple, int> col;
    if (with_eq_) {
        for (const auto& abar : tails) {
            std::set<std::pair<int, int>> edges;
            Tuple atil(abar.rbegin(), abar.rend());
            for (int x = 0; x < a.domain_size; ++x) {
                Tuple xa = {x};
                xa.insert(xa.end(), abar.begin(), abar.end());
                for (int b : wsets.at(xa)) {
                    if (b != x) edges.insert({x, b});
                    Tuple bt = {b};
                    bt.insert(bt.end(), atil.begin(), atil.end());
                    for (int x2 : wsets.at(bt))
                        if (x2 != x) edges.insert({x, x2});
                }
            }
            auto colouring = colour_digraph(a.domain_size, edges);
            for (int x = 0; x < a.domain_size; ++x) {
                if (colouring[x] >= colour_count_)
                    throw ConstructionError("expand_model: colouring exceeded the palette");
                Tuple xa = {x};
                xa.insert(xa.end(), abar.begin(), abar.end());
                col[xa] = colouring[x];
            }
        }
    }

    // the star of each ell-tuple
    std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> star_lookup;
    for (std::size_t s = 0; s < stars_.size(); ++s)
        star_lookup[{stars_[s].underlying, stars_[s].dom}] = static_cast<int>(s);
    std::map<Tuple, int> star_of;
    if (with_eq_) {
        for (const auto& tup : ell_tuples) {
            Tuple abar(tup.begin() + 1, tup.end());
            Tuple atil(abar.rbegin(), abar.rend());
            std::vector<std::pair<int, int>> dom;
            for (auto [t, b] : xi_wit.at(tup)) {
                Tuple bt = {b};
                bt.insert(bt.end(), atil.begin(), atil.end());
                dom.emplace_back(t, col.at(bt));
            }
            std::sort(dom.begin(), dom.end());
            auto key = std::make_pair(atp_low_index(a, tup), dom);
            auto it = star_lookup.find(key);
            if (it == star_lookup.end())
                throw ConstructionError("expand_model: realized star missing from the enumeration");
            star_of[tup] = it->second;
        }
    }

    Structure ap = a;
    // palindrome markers
    for (int s = 1; 2 * s + 1 <= ell; ++s) {
        ap.declare(name_d(2 * s + 1), 2 * s + 1);
        for (const auto& t : detail::all_tuples(a.domain_size, 2 * s + 1))
            if (is_palindrome(t)) ap.add(name_d(2 * s + 1), t);
    }
    // type tails
    for (std::size_t z = 0; z < types_low_.size(); ++z) ap.declare(name_p(static_cast<int>(z)), ell - 1);
    for (const auto& tup : ell_tuples)
        ap.add(name_p(atp_low_index(a, tup)), Tuple(tup.begin() + 1, tup.end()));

    if (with_eq_) {
        for (int c = 0; c < colour_count_; ++c) ap.declare(name_col(c), ell);
        for (const auto& [tup, c] : col) ap.add(name_col(c), tup);
        for (std::size_t s = 0; s < stars_.size(); ++s) {
            ap.declare(name_s(static_cast<int>(s)), ell);
            for (int c = 0; c < colour_count_; ++c) {
                ap.declare(name_q(static_cast<int>(s), c), ell - 1);
                for (const auto& [t, cc] : stars_[s].dom) ap.declare(name_r(static_cast<int>(s), c, t), ell);
            }
        }
        for (const auto& [tup, s] : star_of) ap.add(name_s(s), tup);
        // q and r
        for (const auto& abar : tails) {
            std::map<std::pair<int, int>, int> chosen;  // (star, colour) -> first head element
            for (int x = 0; x < a.domain_size; ++x) {
                Tuple xa = {x};
                xa.insert(xa.end(), abar.begin(), abar.end());
                auto key = std::make_pair(star_of.at(xa), col.at(xa));
                chosen.emplace(key, x);
            }
            for (const auto& [key, x] : chosen) {
                auto [s, c] = key;
                ap.add(name_q(s, c), abar);
                Tuple xa = {x};
                xa.insert(xa.end(), abar.begin(), abar.end());
                for (auto [t, b] : xi_wit.at(xa)) {
                    Tuple rb = abar;
                    rb.push_back(b);
                    ap.add(name_r(s, c, t), rb);
                }
            }
        }
    }
    return ap;
}

inline Structure Reduction::elevate_model(const Structure& a) const {
    const int ell = nf_.ell;
    std::map<std::vector<std::pair<int, int>>, int> d_index;
    for (std::size_t d = 0; d < d_subsets_.size(); ++d) d_index[d_subsets_[d].pairs] = static_cast<int>(d);
    auto middle_defect_index = [&](const Tuple& t) {
        Tuple mid(t.begin() + 1, t.end() - 1);
        auto d = defects(mid);
        auto it = d_index.find(d.pairs);
        if (it == d_index.end())
            throw ConstructionError("elevation: unexpected defect pattern on a primitive tuple");
        return it->second;
    };

    if (variant_ == ReductionVariant::WithEquality) {
        Structure al = truncate_to_height(a, ell);
        Structure reduct;
        reduct.domain_size = al.domain_size;
        reduct.height = al.height;
        for (const auto& [p, rel] : al.relations)
            if (nf_.sig.contains(p)) reduct.relations.emplace(p, rel);

        Structure b = reduct;
        b.height = ell + 1;
        std::map<std::pair<std::string, Tuple>, bool> record;
        std::set<Tuple> assigned;
        auto canon = [](Tuple t) {
            Tuple r(t.rbegin(), t.rend());
            return std::min(t, r);
        };

        for (const auto& tup : detail::all_tuples(a.domain_size, ell)) {
            int c = -1;
            for (int cc = 0; cc < colour_count_; ++cc)
                if (a.holds(name_col(cc), tup)) {
                    if (c != -1) throw ConstructionError("elevation: colours are not exclusive");
                    c = cc;
                }
            if (c == -1) throw ConstructionError("elevation: uncoloured tuple");
            int s = -1;
            for (std::size_t ss = 0; ss < stars_.size(); ++ss)
                if (a.holds(name_s(static_cast<int>(ss)), tup)) {
                    if (s != -1) throw ConstructionError("elevation: stars are not exclusive");
                    s = static_cast<int>(ss);
                }
            if (s == -1) throw ConstructionError("elevation: starless tuple");
            Tuple abar(tup.begin() + 1, tup.end());
            for (const auto& [t, col] : stars_[s].dom) {
                int chosen = -1;
                for (int bb = 0; bb < a.domain_size && chosen == -1; ++bb) {
                    Tuple rb = abar;
                    rb.push_back(bb);
                    if (a.holds(name_r(s, c, t), rb)) chosen = bb;
                }
                if (chosen == -1) throw ConstructionError("elevation: no witness candidate");
                Tuple full = tup;
                full.push_back(chosen);
                if (!is_primitive(full)) continue;  // a witness is already present
                int d = middle_defect_index(full);
                if (!inc_d_compat_[t][d])
                    throw ConstructionError("elevation: incompatible increment slipped past psi3");
                assign_increment(b, record, full, t);
                assigned.insert(canon(full));
            }
        }

        // complete the remaining primitive (ell+1)-tuples via psi4
        std::size_t scanned = 0;
        detail::for_each_tuple(a.domain_size, ell + 1, [&](const Tuple& t) {
            if (++scanned > caps_.max_completion_tuples)
                throw CapacityError("elevation: completion cap exceeded");
            if (!is_primitive(t)) return;
            if (assigned.count(canon(t))) return;
            assigned.insert(canon(t));
            int zeta = atp_low_index(reduct, Tuple(t.begin(), t.end() - 1));
            int eta = atp_low_index(reduct, Tuple(t.begin() + 1, t.end()));
            int d = middle_defect_index(t);
            int found = -1;
            for (std::size_t x = 0; x < types_up_.size() && found == -1; ++x)
                if (beta_hat_sat_[x] && head_of_[x] == zeta && tail_of_[x] == eta &&
                    inc_d_compat_[x][d])
                    found = static_cast<int>(x);
            if (found == -1) throw ConstructionError("elevation: psi4 left a primitive tuple uncompletable");
            assign_increment(b, record, t, found);
        });
        return b;
    }

    // equality-free: inflate by I x H and re-type fresh primitive tuples
    Structure al = truncate_to_height(a, ell);
    Structure reduct;
    reduct.domain_size = al.domain_size;
    reduct.height = al.height;
    for (const auto& [p, rel] : al.relations)
        if (nf_.sig.contains(p)) reduct.relations.emplace(p, rel);

    const int icount = static_cast<int>(nf_.gammas.size());
    WitnessIndexSet h(ell);
    const std::size_t hsize = h.size();
    const std::size_t inflated = static_cast<std::size_t>(a.domain_size) * icount * hsize;
    if (inflated > caps_.max_inflated_domain)
        throw CapacityError("elevation: inflated domain exceeds the cap");

    // pseudo-witnesses: for each base ell-tuple and each witness index, the
    // first element whose tail type extends consistently
    std::map<std::pair<Tuple, int>, std::pair<int, int>> pseudo;  // -> (element, type idx)
    bool has_covering = !u_up_->covering_indices().empty();
    for (const auto& tup : detail::all_tuples(a.domain_size, ell)) {
        int zeta = atp_low_index(reduct, tup);
        Tuple mid(tup.begin() + 1, tup.end());
        DefectSet dmid = defects(mid);
        std::vector<std::pair<int, int>> odd;
        for (auto pr : dmid.pairs)
            if ((pr.second - pr.first + 1) % 2 == 1) odd.push_back(pr);
        auto it = d_index.find(odd);
        if (it == d_index.end()) throw ConstructionError("elevation: defect pattern out of range");
        int d = it->second;
        for (int g = 0; g < icount; ++g) {
            std::pair<int, int> best{-1, -1};
            for (int bb = 0; bb < a.domain_size && best.first == -1; ++bb) {
                Tuple ext = mid;
                ext.push_back(bb);
                int eta = atp_low_index(reduct, ext);
                for (std::size_t x = 0; x < types_up_.size(); ++x)
                    if (beta_hat_sat_[x] && gamma_sat_[x][g] && head_of_[x] == zeta &&
                        tail_of_[x] == eta && inc_d_compat_[x][d]) {
                        best = {bb, static_cast<int>(x)};
                        break;
                    }
            }
            if (best.first == -1)
                throw ConstructionError("elevation: psi3 promised a pseudo-witness that does not exist");
            pseudo[{tup, g}] = best;
        }
    }

    Structure c = product(reduct, icount * static_cast<int>(hsize));
    c.height = ell + 1;
    if (!has_covering) return c;

    auto decode = [&](int e) {
        int hpart = e % static_cast<int>(hsize);
        int rest = e / static_cast<int>(hsize);
        return std::tuple<int, int, int>{rest / icount, rest % icount, hpart};
    };
    auto encode = [&](int bb, int i, int hh) {
        return (bb * icount + i) * static_cast<int>(hsize) + hh;
    };

    std::map<std::pair<std::string, Tuple>, bool> record;
    std::set<Tuple> assigned;
    auto canon = [](Tuple t) {
        Tuple r(t.rbegin(), t.rend());
        return std::min(t, r);
    };

    std::size_t scanned = 0;
    detail::for_each_tuple(c.domain_size, ell, [&](const Tuple& ct) {
        if (++scanned > caps_.max_completion_tuples)
            throw CapacityError("elevation: witness scan cap exceeded");
        Tuple base;
        std::vector<int> hs;
        for (int e : ct) {
            auto [bb, ii, hh] = decode(e);
            base.push_back(bb);
            hs.push_back(hh);
        }
        for (int g = 0; g < icount; ++g) {
            auto [wb, wtype] = pseudo.at({base, g});
            int we = encode(wb, g, h.apply(hs));
            Tuple full = ct;
            full.push_back(we);
            if (!is_primitive(full)) continue;
            assign_increment(c, record, full, wtype);
            assigned.insert(canon(full));
        }
    });

    detail::for_each_tuple(c.domain_size, ell + 1, [&](const Tuple& t) {
        if (++scanned > caps_.max_completion_tuples)
            throw CapacityError("elevation: completion cap exceeded");
        if (!is_primitive(t)) return;
        if (assigned.count(canon(t))) return;
        assigned.insert(canon(t));
        int zeta = atp_low_index(c, Tuple(t.begin(), t.end() - 1));
        int eta = atp_low_index(c, Tuple(t.begin() + 1, t.end()));
        int d = middle_defect_index(t);
        int found = -1;
        for (std::size_t x = 0; x < types_up_.size() && found == -1; ++x)
            if (beta_hat_sat_[x] && head_of_[x] == zeta && tail_of_[x] == eta && inc_d_compat_[x][d])
                found = static_cast<int>(x);
        if (found == -1) throw ConstructionError("elevation: psi4 left a primitive tuple uncompletable");
        assign_increment(c, record, t, found);
    });
    return c;
}

// Convenience wrappers matching the operation signatures.
inline ReductionOutput build_psi(const NormalForm& nf, ReductionVariant variant,
                                 ReductionCaps caps = {}) {
    return Reduction(nf, variant, caps).output();
}

inline Structure expand_model(const Structure& a, const NormalForm& nf, ReductionVariant variant,
                              ReductionCaps caps = {}) {
    return Reduction(nf, variant, caps).expand_model(a);
}

inline Structure elevate_model(const Structure& a, const NormalForm& nf, ReductionVariant variant,
                               ReductionCaps caps = {}) {
    return Reduction(nf, variant, caps).elevate_model(a);
}

}  // namespace afkit
