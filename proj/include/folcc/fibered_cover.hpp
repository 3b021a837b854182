#pragma once

// Fibered covers for the chain-homotopy verifier: a base chart category, a
// fiber complex, product charts Q(U) = U x fiber with base morphisms extended
// by the identity on the fiber, and chosen sub-objects V of the products. The
// extended category is generated by inclusions, extended maps and restricted
// maps, closed under composition by saturation. Operators mu, lambda and the
// homotopy F act on bigraded cochains; verify_identities checks
// lambda(mu) = id and mu(lambda) - id = delta F + F delta exactly on seeded
// random cochains.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "folcc/cech_de_rham.hpp"
#include "folcc/chart_category.hpp"
#include "folcc/errors.hpp"
#include "folcc/simplicial.hpp"

namespace folcc {

struct SubObjectSpec {
    std::string id;
    std::string base;
    std::vector<std::string> vertices; // product vertex names "u|w"
};

struct ExtendedCover {
    ChartCategory small;
    ChartCategory big;
    std::map<std::string, std::string> base_object;       // big object -> base object
    std::map<std::string, std::string> product_object;    // base object -> product big object
    std::map<std::string, std::string> inclusion;         // big object -> morphism into product
    std::map<std::string, std::string> base_morphism;     // big morphism -> base morphism
    std::map<std::string, std::string> extended_morphism; // base morphism -> product morphism
};

inline ExtendedCover build_extended_cover(const ChartCategory& base_in,
                                          const SimplicialComplex& fiber,
                                          const std::vector<SubObjectSpec>& subs,
                                          std::size_t cap = default_string_cap()) {
    ChartCategory base = base_in;
    base.validate();
    ExtendedCover out;

    std::map<std::string, SimplicialComplex> complexes; // big object id -> complex
    for (const auto& [uid, obj] : base.objects()) {
        std::string qid = "Q(" + uid + ")";
        complexes.emplace(qid, ordered_product(obj.complex, fiber));
        out.product_object[uid] = qid;
        out.base_object[qid] = uid;
    }

    std::map<std::string, std::vector<std::string>> subs_of; // base object -> listed big ids
    for (const auto& s : subs) {
        base.object(s.base);
        const std::string& qid = out.product_object.at(s.base);
        const SimplicialComplex& P = complexes.at(qid);
        std::set<std::string> sv;
        for (const auto& v : s.vertices) {
            P.vertex_index(v);
            sv.insert(v);
        }
        if (sv.size() == P.vertices().size()) {
            subs_of[s.base].push_back(qid); // the full product itself
            continue;
        }
        if (complexes.count(s.id) || out.base_object.count(s.id))
            throw model_error("duplicate sub-object id '" + s.id + "'");
        complexes.emplace(s.id, induced_subcomplex(P, s.vertices));
        out.base_object[s.id] = s.base;
        subs_of[s.base].push_back(s.id);
    }

    // Containment invariant: every listed sub-object maps into a listed
    // sub-object of the target, for every base morphism.
    for (const auto& [hid, h] : base.morphisms()) {
        auto src_it = subs_of.find(h.source);
        if (src_it == subs_of.end()) continue;
        for (const auto& vid : src_it->second) {
            std::set<std::string> image;
            for (const auto& pv : complexes.at(vid).vertices()) {
                auto bar = pv.find('|');
                image.insert(h.vertex_map.at(pv.substr(0, bar)) + pv.substr(bar));
            }
            bool contained = false;
            auto tgt_it = subs_of.find(h.target);
            if (tgt_it != subs_of.end())
                for (const auto& wid : tgt_it->second) {
                    const auto& wv = complexes.at(wid).vertices();
                    contained = contained ||
                                std::includes(wv.begin(), wv.end(), image.begin(), image.end());
                    if (contained) break;
                }
            if (!contained)
                throw model_error("image of ('" + hid + "','" + vid +
                                  "') not contained in any listed sub-object of '" + h.target +
                                  "'");
        }
    }

    ChartCategory big;
    for (const auto& [oid, c] : complexes) big.add_object({oid, c});

    struct MorKey {
        std::string src, tgt;
        std::map<std::string, std::string> vmap;
        std::string base;
        auto operator<=>(const MorKey&) const = default;
    };
    std::map<MorKey, std::string> ids;
    auto add = [&](MorKey k, const std::string& name) {
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        if (ids.size() >= cap)
            throw guard_error("extended category exceeds cap " + std::to_string(cap) +
                              "; raise FOLCC_MAX_STRINGS to proceed");
        big.add_morphism({name, k.src, k.tgt, k.vmap});
        out.base_morphism[name] = k.base;
        ids.emplace(std::move(k), name);
        return name;
    };

    for (const auto& [hid, h] : base.morphisms()) {
        bool h_is_id = hid == base.identity_of(h.source) && h.source == h.target;
        std::map<std::string, std::string> pm;
        for (const auto& [u, w] : h.vertex_map)
            for (const auto& fv : fiber.vertices())
                pm[product_vertex(u, fv)] = product_vertex(w, fv);
        for (const auto& [xid, xc] : complexes) {
            if (out.base_object.at(xid) != h.source) continue;
            std::set<std::string> image;
            std::map<std::string, std::string> vmap;
            for (const auto& v : xc.vertices()) {
                vmap[v] = pm.at(v);
                image.insert(pm.at(v));
            }
            for (const auto& [yid, yc] : complexes) {
                if (out.base_object.at(yid) != h.target) continue;
                const auto& yv = yc.vertices();
                if (!std::includes(yv.begin(), yv.end(), image.begin(), image.end())) continue;
                bool x_prod = out.product_object.at(h.source) == xid;
                bool y_prod = out.product_object.at(h.target) == yid;
                std::string name;
                if (h_is_id && xid == yid)
                    name = "id(" + xid + ")";
                else if (h_is_id && y_prod)
                    name = "inc(" + xid + ")";
                else if (h_is_id)
                    name = "inc(" + xid + "," + yid + ")";
                else if (x_prod && y_prod)
                    name = "ext(" + hid + ")";
                else
                    name = "res(" + hid + "," + xid + "," + yid + ")";
                std::string got = add({xid, yid, vmap, hid}, name);
                if (h_is_id && xid == yid) out.inclusion.emplace(xid, got);
                if (h_is_id && !x_prod && y_prod) out.inclusion[xid] = got;
                if (x_prod && y_prod) out.extended_morphism[hid] = got;
            }
        }
    }

    int counter = 0;
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::string> snapshot;
        for (const auto& [mid, m] : big.morphisms()) snapshot.push_back(mid);
        for (const auto& m1 : snapshot)
            for (const auto& m2 : snapshot) {
                const ChartMorphism& a = big.morphism(m1);
                const ChartMorphism& b = big.morphism(m2);
                if (a.target != b.source) continue;
                MorKey k;
                k.src = a.source;
                k.tgt = b.target;
                for (const auto& [v, w] : a.vertex_map) k.vmap[v] = b.vertex_map.at(w);
                k.base = base.compose(out.base_morphism.at(m1), out.base_morphism.at(m2));
                if (!ids.count(k)) {
                    add(std::move(k), "cmp" + std::to_string(++counter));
                    grew = true;
                }
            }
    }
    for (const auto& [k1, m1] : ids)
        for (const auto& [k2, m2] : ids) {
            if (k1.tgt != k2.src) continue;
            MorKey k;
            k.src = k1.src;
            k.tgt = k2.tgt;
            for (const auto& [v, w] : k1.vmap) k.vmap[v] = k2.vmap.at(w);
            k.base = base.compose(k1.base, k2.base);
            big.set_composition(m1, m2, ids.at(k));
        }
    big.validate();

    ChartCategory small;
    for (const auto& [uid, obj] : base.objects())
        small.add_object({out.product_object.at(uid), complexes.at(out.product_object.at(uid))});
    for (const auto& [hid, h] : base.morphisms()) {
        const ChartMorphism& m = big.morphism(out.extended_morphism.at(hid));
        small.add_morphism(m);
    }
    for (const auto& [h1, m1] : base.morphisms())
        for (const auto& [h2, m2] : base.morphisms()) {
            if (m1.target != m2.source) continue;
            small.set_composition(out.extended_morphism.at(h1), out.extended_morphism.at(h2),
                                  out.extended_morphism.at(base.compose(h1, h2)));
        }
    small.validate();

    out.small = std::move(small);
    out.big = std::move(big);
    return out;
}

struct HomotopyReport {
    std::uint64_t seed = 0;
    int trials = 0;
    int max_degree = 0;
    struct Entry {
        int k = 0;
        int q = 0;
        bool lambda_mu_ok = true;
        bool homotopy_ok = true;
        bool k2_cross_ok = true;
    };
    std::vector<Entry> entries;
    bool all_ok = true;
};

class HomotopyVerifier {
public:
    HomotopyVerifier(const ChartCategory& base, const SimplicialComplex& fiber,
                     const std::vector<SubObjectSpec>& subs,
                     std::size_t cap = default_string_cap())
        : cover_(build_extended_cover(base, fiber, subs, cap)),
          small_(cover_.small, cap),
          big_(cover_.big, cap) {}

    const ExtendedCover& cover() const { return cover_; }
    const CechDeRham& small_engine() const { return small_; }
    const CechDeRham& big_engine() const { return big_; }

    // mu(phi)(V_0 -> ... -> V_k) = phi(Q(U_0) -> ... -> Q(U_k)) restricted to V_0
    BigradedCochain mu(const BigradedCochain& phi) const {
        BigradedCochain out{phi.p, phi.q, {}};
        for (const auto& key : big_.strings(phi.p)) {
            Vec val = big_.pullback(cover_.inclusion.at(big_.category().string_source(key, phi.p)),
                                    phi.q)
                          .apply(small_.value_of(phi, product_string(key, phi.p)));
            if (!is_zero_vec(val)) out.values.emplace(key, std::move(val));
        }
        return out;
    }

    // lambda(c) = evaluation of c on full-product strings only
    BigradedCochain lambda_op(const BigradedCochain& c) const {
        BigradedCochain out{c.p, c.q, {}};
        for (const auto& key : small_.strings(c.p)) {
            Vec val = big_.value_of(c, key);
            if (!is_zero_vec(val)) out.values.emplace(key, std::move(val));
        }
        return out;
    }

    // F(c)(V_0 -> ... -> V_{k-1}) =
    //   sum_s (-1)^s c(V_0 -> ... -> V_s -> Q(U_s) -> ... -> Q(U_{k-1}))
    BigradedCochain homotopy_F(const BigradedCochain& c) const {
        if (c.p < 1) throw usage_error("homotopy operator needs string degree at least 1");
        int k = c.p;
        BigradedCochain out{k - 1, c.q, {}};
        for (const auto& key : big_.strings(k - 1)) {
            std::vector<std::string> objs = object_chain(key, k - 1);
            Vec acc(static_cast<std::size_t>(
                        big_.source_complex(key, k - 1).cochain_dim(c.q)),
                    0);
            for (int s = 0; s <= k - 1; ++s) {
                std::vector<std::string> hybrid;
                for (int t = 0; t < s; ++t) hybrid.push_back(key[static_cast<std::size_t>(t)]);
                hybrid.push_back(cover_.inclusion.at(objs[static_cast<std::size_t>(s)]));
                for (int t = s; t < k - 1; ++t)
                    hybrid.push_back(cover_.extended_morphism.at(
                        cover_.base_morphism.at(key[static_cast<std::size_t>(t)])));
                Vec term = big_.value_of(c, hybrid);
                for (std::size_t i = 0; i < term.size(); ++i)
                    acc[i] += (s % 2 == 0 ? term[i] : -term[i]);
            }
            if (!is_zero_vec(acc)) out.values.emplace(key, std::move(acc));
        }
        return out;
    }

    HomotopyReport verify_identities(std::uint64_t seed, int trials, int max_degree) const {
        if (trials < 1) throw usage_error("trials must be positive");
        if (max_degree < 0) throw usage_error("negative degree");
        HomotopyReport rep;
        rep.seed = seed;
        rep.trials = trials;
        rep.max_degree = max_degree;
        std::mt19937_64 gen(seed);
        for (int k = 0; k <= max_degree; ++k)
            for (int q = 0; k + q <= max_degree; ++q) {
                HomotopyReport::Entry e;
                e.k = k;
                e.q = q;
                for (int t = 0; t < trials; ++t) {
                    BigradedCochain phi = random_bigraded(small_, k, q, gen);
                    if (!(lambda_op(mu(phi)) == phi)) e.lambda_mu_ok = false;

                    BigradedCochain c = random_bigraded(big_, k, q, gen);
                    BigradedCochain lhs = mu(lambda_op(c)) - c;
                    BigradedCochain rhs = homotopy_F(big_.horizontal_delta(c));
                    if (k >= 1) rhs += big_.horizontal_delta(homotopy_F(c));
                    if (!(lhs == rhs)) e.homotopy_ok = false;
                    if (k == 2 && !(twelve_term_expansion(c) ==
                                    homotopy_F(big_.horizontal_delta(c))))
                        e.k2_cross_ok = false;
                }
                rep.all_ok = rep.all_ok && e.lambda_mu_ok && e.homotopy_ok && e.k2_cross_ok;
                rep.entries.push_back(e);
            }
        return rep;
    }

    TotalCochain mu_total(const TotalCochain& x) const {
        TotalCochain out{x.degree, {}};
        for (const auto& [p, part] : x.parts) {
            BigradedCochain m = mu(part);
            if (!m.is_zero()) out.parts.emplace(p, std::move(m));
        }
        return out;
    }
    TotalCochain lambda_total(const TotalCochain& x) const {
        TotalCochain out{x.degree, {}};
        for (const auto& [p, part] : x.parts) {
            BigradedCochain m = lambda_op(part);
            if (!m.is_zero()) out.parts.emplace(p, std::move(m));
        }
        return out;
    }

    // Induced maps on total cohomology in each degree; mutually_inverse is the
    // cohomology-level consequence of the two cochain identities.
    struct InducedMaps {
        std::vector<SparseMatrix> mu_matrix;     // small classes -> big classes
        std::vector<SparseMatrix> lambda_matrix; // big classes -> small classes
        bool mutually_inverse = true;
    };
    InducedMaps induced_on_cohomology(int max_total_degree) const {
        TotalCohomologyResult hs = small_.total_cohomology(max_total_degree);
        TotalCohomologyResult hb = big_.total_cohomology(max_total_degree);
        InducedMaps out;
        for (int n = 0; n <= max_total_degree; ++n) {
            const auto& rs = hs.reps[static_cast<std::size_t>(n)];
            const auto& rb = hb.reps[static_cast<std::size_t>(n)];
            SparseMatrix mu_m(static_cast<int>(rb.size()), static_cast<int>(rs.size()));
            for (std::size_t j = 0; j < rs.size(); ++j) {
                Vec col = class_coordinates(big_, hb, mu_total(rs[j]));
                for (std::size_t i = 0; i < col.size(); ++i)
                    if (col[i] != 0) mu_m.set(static_cast<int>(i), static_cast<int>(j), col[i]);
            }
            SparseMatrix la_m(static_cast<int>(rs.size()), static_cast<int>(rb.size()));
            for (std::size_t j = 0; j < rb.size(); ++j) {
                Vec col = class_coordinates(small_, hs, lambda_total(rb[j]));
                for (std::size_t i = 0; i < col.size(); ++i)
                    if (col[i] != 0) la_m.set(static_cast<int>(i), static_cast<int>(j), col[i]);
            }
            bool inv = la_m * mu_m == SparseMatrix::identity(static_cast<int>(rs.size())) &&
                       mu_m * la_m == SparseMatrix::identity(static_cast<int>(rb.size()));
            out.mutually_inverse = out.mutually_inverse && inv;
            out.mu_matrix.push_back(std::move(mu_m));
            out.lambda_matrix.push_back(std::move(la_m));
        }
        return out;
    }

private:
    ExtendedCover cover_;
    CechDeRham small_;
    CechDeRham big_;

    // Objects V_0..V_p along a big string.
    std::vector<std::string> object_chain(const std::vector<std::string>& key, int p) const {
        std::vector<std::string> objs{big_.category().string_source(key, p)};
        if (p > 0)
            for (const auto& mid : key) objs.push_back(big_.category().morphism(mid).target);
        return objs;
    }

    std::vector<std::string> product_string(const std::vector<std::string>& key, int p) const {
        if (p == 0) return {cover_.product_object.at(cover_.base_object.at(key[0]))};
        std::vector<std::string> out;
        for (const auto& mid : key)
            out.push_back(cover_.extended_morphism.at(cover_.base_morphism.at(mid)));
        return out;
    }

    // F(delta c) at k = 2, written out as the twelve explicit evaluations.
    BigradedCochain twelve_term_expansion(const BigradedCochain& c) const {
        const ChartCategory& B = big_.category();
        BigradedCochain out{2, c.q, {}};
        for (const auto& key : big_.strings(2)) {
            const std::string& g1 = key[0];
            const std::string& g2 = key[1];
            std::vector<std::string> objs = object_chain(key, 2);
            const std::string& i0 = cover_.inclusion.at(objs[0]);
            const std::string& i1 = cover_.inclusion.at(objs[1]);
            const std::string& i2 = cover_.inclusion.at(objs[2]);
            const std::string& e1 = cover_.extended_morphism.at(cover_.base_morphism.at(g1));
            const std::string& e2 = cover_.extended_morphism.at(cover_.base_morphism.at(g2));

            auto val = [&](const std::string& a, const std::string& b) {
                return big_.value_of(c, {a, b});
            };
            auto pull = [&](const std::string& m, Vec v) { return big_.pullback(m, c.q).apply(v); };
            auto axpy = [](Vec& acc, const Vec& v, int sign) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    acc[i] += sign > 0 ? v[i] : -v[i];
            };

            Vec acc(static_cast<std::size_t>(big_.source_complex(key, 2).cochain_dim(c.q)), 0);
            axpy(acc, pull(i0, val(e1, e2)), +1);
            axpy(acc, val(B.compose(i0, e1), e2), -1);
            axpy(acc, val(i0, B.compose(e1, e2)), +1);
            axpy(acc, val(i0, e1), -1);

            axpy(acc, pull(g1, val(i1, e2)), -1);
            axpy(acc, val(B.compose(g1, i1), e2), +1);
            axpy(acc, val(g1, B.compose(i1, e2)), -1);
            axpy(acc, val(g1, i1), +1);

            axpy(acc, pull(g1, val(g2, i2)), +1);
            axpy(acc, val(B.compose(g1, g2), i2), -1);
            axpy(acc, val(g1, B.compose(g2, i2)), +1);
            axpy(acc, val(g1, g2), -1);

            if (!is_zero_vec(acc)) out.values.emplace(key, std::move(acc));
        }
        return out;
    }
};

} // namespace folcc
