#pragma once

// The Cech-de Rham double complex of a finite chart category with simplicial
// cochain coefficients: C^{p,q} = product over length-p composable strings of
// degree-q cochains on the string's source. Horizontal differential delta by
// the alternating pullback/merge/drop sum, vertical differential (-1)^p d,
// total differential D = delta + (-1)^p d, total cohomology by exact linear
// algebra, and the j map from compatible global families.

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "folcc/chart_category.hpp"
#include "folcc/errors.hpp"
#include "folcc/simplicial.hpp"
#include "folcc/sparse_matrix.hpp"

namespace folcc {

inline bool is_zero_vec(const Vec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

struct BigradedCochain {
    int p = 0;
    int q = 0;
    std::map<std::vector<std::string>, Vec> values; // missing keys read as zero

    BigradedCochain normalized() const {
        BigradedCochain out{p, q, {}};
        for (const auto& [k, v] : values)
            if (!is_zero_vec(v)) out.values.emplace(k, v);
        return out;
    }
    bool is_zero() const {
        for (const auto& [k, v] : values)
            if (!is_zero_vec(v)) return false;
        return true;
    }
    BigradedCochain& operator+=(const BigradedCochain& o) {
        if (p != o.p || q != o.q) throw error("bidegree mismatch");
        for (const auto& [k, v] : o.values) {
            auto [it, inserted] = values.try_emplace(k, v);
            if (inserted) continue;
            if (it->second.size() != v.size()) throw error("cochain length mismatch");
            for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += v[i];
        }
        return *this;
    }
    friend BigradedCochain operator+(BigradedCochain a, const BigradedCochain& b) {
        a += b;
        return a;
    }
    friend BigradedCochain operator-(BigradedCochain a, const BigradedCochain& b) {
        BigradedCochain nb = b;
        for (auto& [k, v] : nb.values)
            for (auto& x : v) x = -x;
        a += nb;
        return a;
    }
    friend bool operator==(const BigradedCochain& a, const BigradedCochain& b) {
        return a.p == b.p && a.q == b.q && a.normalized().values == b.normalized().values;
    }
};

// One element of the total complex: parts keyed by p, part p in bidegree
// (p, degree - p).
struct TotalCochain {
    int degree = 0;
    std::map<int, BigradedCochain> parts;

    bool is_zero() const {
        for (const auto& [p, c] : parts)
            if (!c.is_zero()) return false;
        return true;
    }
};

struct TotalCohomologyResult {
    std::vector<int> betti;                     // indexed by total degree
    std::vector<std::vector<TotalCochain>> reps; // canonical representatives
};

class CechDeRham {
public:
    explicit CechDeRham(ChartCategory cat, std::size_t string_cap = default_string_cap())
        : cat_(std::move(cat)), cap_(string_cap) {
        cat_.validate();
    }

    const ChartCategory& category() const { return cat_; }

    const std::vector<std::vector<std::string>>& strings(int p) const {
        while (static_cast<int>(strings_.size()) <= p) {
            int next = static_cast<int>(strings_.size());
            strings_.push_back(cat_.strings(next, cap_));
            string_index_.emplace_back();
            for (std::size_t i = 0; i < strings_.back().size(); ++i)
                string_index_.back()[strings_.back()[i]] = static_cast<int>(i);
        }
        return strings_[static_cast<std::size_t>(p)];
    }
    int string_index(int p, const std::vector<std::string>& key) const {
        strings(p);
        auto it = string_index_[static_cast<std::size_t>(p)].find(key);
        if (it == string_index_[static_cast<std::size_t>(p)].end())
            throw error("unknown string key");
        return it->second;
    }

    const SimplicialComplex& source_complex(const std::vector<std::string>& key, int p) const {
        return cat_.object(cat_.string_source(key, p)).complex;
    }

    Vec value_of(const BigradedCochain& w, const std::vector<std::string>& key) const {
        auto it = w.values.find(key);
        if (it != w.values.end()) return it->second;
        return Vec(static_cast<std::size_t>(source_complex(key, w.p).cochain_dim(w.q)), 0);
    }

    const SparseMatrix& pullback(const std::string& morphism_id, int q) const {
        auto k = std::make_pair(morphism_id, q);
        auto it = pullbacks_.find(k);
        if (it == pullbacks_.end()) {
            const ChartMorphism& m = cat_.morphism(morphism_id);
            it = pullbacks_
                     .emplace(k, pullback_matrix(cat_.object(m.source).complex,
                                                 cat_.object(m.target).complex, m.vertex_map, q))
                     .first;
        }
        return it->second;
    }

    // (delta w)(h_1,...,h_{p+1}) = h_1^* w(h_2,...,h_{p+1})
    //   + sum_{i=1..p} (-1)^i w(h_1,...,h_{i+1} h_i,...,h_{p+1})
    //   + (-1)^{p+1} w(h_1,...,h_p)
    BigradedCochain horizontal_delta(const BigradedCochain& w) const {
        int p = w.p;
        BigradedCochain out{p + 1, w.q, {}};
        for (const auto& key : strings(p + 1)) {
            const ChartMorphism& h1 = cat_.morphism(key[0]);
            std::vector<std::string> tail;
            if (p == 0)
                tail = {h1.target};
            else
                tail.assign(key.begin() + 1, key.end());
            Vec acc = pullback(key[0], w.q).apply(value_of(w, tail));

            for (int i = 1; i <= p; ++i) {
                std::vector<std::string> merged;
                for (int t = 0; t < i - 1; ++t) merged.push_back(key[static_cast<std::size_t>(t)]);
                merged.push_back(cat_.compose(key[static_cast<std::size_t>(i - 1)],
                                              key[static_cast<std::size_t>(i)]));
                for (int t = i + 1; t <= p; ++t) merged.push_back(key[static_cast<std::size_t>(t)]);
                Vec mv = value_of(w, merged);
                for (std::size_t j = 0; j < mv.size(); ++j)
                    acc[j] += (i % 2 == 0 ? mv[j] : -mv[j]);
            }

            std::vector<std::string> head;
            if (p == 0)
                head = {h1.source};
            else
                head.assign(key.begin(), key.end() - 1);
            Vec hv = value_of(w, head);
            for (std::size_t j = 0; j < hv.size(); ++j)
                acc[j] += ((p + 1) % 2 == 0 ? hv[j] : -hv[j]);

            if (!is_zero_vec(acc)) out.values.emplace(key, std::move(acc));
        }
        return out;
    }

    BigradedCochain vertical_d(const BigradedCochain& w) const {
        BigradedCochain out{w.p, w.q + 1, {}};
        for (const auto& [key, v] : w.values) {
            const std::string& oid = cat_.string_source(key, w.p);
            Vec dv = coboundary_of(oid, w.q).apply(v);
            if (w.p % 2 != 0)
                for (auto& x : dv) x = -x;
            if (!is_zero_vec(dv)) out.values.emplace(key, std::move(dv));
        }
        return out;
    }

    TotalCochain apply_D(const TotalCochain& x) const {
        TotalCochain out{x.degree + 1, {}};
        for (const auto& [p, part] : x.parts) {
            accumulate(out, horizontal_delta(part));
            accumulate(out, vertical_d(part));
        }
        return out;
    }

    int total_dim(int n) const { return layout(n).total; }

    Vec to_vec(const TotalCochain& x) const {
        const Layout& L = layout(x.degree);
        Vec v(static_cast<std::size_t>(L.total), 0);
        for (const auto& [p, part] : x.parts) {
            if (part.is_zero()) continue;
            if (p < 0 || p > x.degree || part.q != x.degree - p)
                throw error("total cochain part out of range");
            for (const auto& [key, val] : part.values) {
                int si = string_index(p, key);
                int off = L.offsets[static_cast<std::size_t>(p)][static_cast<std::size_t>(si)];
                for (std::size_t i = 0; i < val.size(); ++i)
                    v[static_cast<std::size_t>(off) + i] = val[i];
            }
        }
        return v;
    }

    TotalCochain from_vec(const Vec& v, int n) const {
        const Layout& L = layout(n);
        if (static_cast<int>(v.size()) != L.total) throw error("total vector length mismatch");
        TotalCochain out{n, {}};
        for (int p = 0; p <= n; ++p) {
            int q = n - p;
            BigradedCochain part{p, q, {}};
            const auto& ss = strings(p);
            for (std::size_t si = 0; si < ss.size(); ++si) {
                int off = L.offsets[static_cast<std::size_t>(p)][si];
                int dim = source_complex(ss[si], p).cochain_dim(q);
                Vec val(static_cast<std::size_t>(dim), 0);
                bool nonzero = false;
                for (int i = 0; i < dim; ++i) {
                    val[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(off + i)];
                    nonzero = nonzero || val[static_cast<std::size_t>(i)] != 0;
                }
                if (nonzero) part.values.emplace(ss[si], std::move(val));
            }
            if (!part.values.empty()) out.parts.emplace(p, std::move(part));
        }
        return out;
    }

    const SparseMatrix& D_matrix(int n) const {
        auto it = d_matrices_.find(n);
        if (it != d_matrices_.end()) return it->second;
        const Layout& L = layout(n);
        const Layout& M = layout(n + 1);
        SparseMatrix D(M.total, L.total);
        for (int p = 0; p <= n; ++p) {
            int q = n - p;
            const auto& ss = strings(p);
            for (std::size_t si = 0; si < ss.size(); ++si) {
                int col0 = L.offsets[static_cast<std::size_t>(p)][si];
                int row0 = M.offsets[static_cast<std::size_t>(p)][si];
                const SparseMatrix& cb = coboundary_of(cat_.string_source(ss[si], p), q);
                for (int r = 0; r < cb.rows(); ++r)
                    for (const auto& [c, v] : cb.row(r))
                        D.add_to(row0 + r, col0 + c, p % 2 == 0 ? v : -v);
            }
            const auto& tt = strings(p + 1);
            for (std::size_t ti = 0; ti < tt.size(); ++ti) {
                const auto& key = tt[ti];
                int row0 = M.offsets[static_cast<std::size_t>(p + 1)][ti];
                const ChartMorphism& h1 = cat_.morphism(key[0]);

                std::vector<std::string> tail;
                if (p == 0)
                    tail = {h1.target};
                else
                    tail.assign(key.begin() + 1, key.end());
                int tail_off = L.offsets[static_cast<std::size_t>(p)]
                                        [static_cast<std::size_t>(string_index(p, tail))];
                const SparseMatrix& pb = pullback(key[0], q);
                for (int r = 0; r < pb.rows(); ++r)
                    for (const auto& [c, v] : pb.row(r)) D.add_to(row0 + r, tail_off + c, v);

                int block = source_complex(key, p + 1).cochain_dim(q);
                for (int i = 1; i <= p; ++i) {
                    std::vector<std::string> merged;
                    for (int t = 0; t < i - 1; ++t)
                        merged.push_back(key[static_cast<std::size_t>(t)]);
                    merged.push_back(cat_.compose(key[static_cast<std::size_t>(i - 1)],
                                                  key[static_cast<std::size_t>(i)]));
                    for (int t = i + 1; t <= p; ++t)
                        merged.push_back(key[static_cast<std::size_t>(t)]);
                    int off = L.offsets[static_cast<std::size_t>(p)]
                                       [static_cast<std::size_t>(string_index(p, merged))];
                    for (int r = 0; r < block; ++r)
                        D.add_to(row0 + r, off + r, i % 2 == 0 ? 1 : -1);
                }

                std::vector<std::string> head;
                if (p == 0)
                    head = {h1.source};
                else
                    head.assign(key.begin(), key.end() - 1);
                int head_off = L.offsets[static_cast<std::size_t>(p)]
                                        [static_cast<std::size_t>(string_index(p, head))];
                for (int r = 0; r < block; ++r)
                    D.add_to(row0 + r, head_off + r, (p + 1) % 2 == 0 ? 1 : -1);
            }
        }
        return d_matrices_.emplace(n, std::move(D)).first->second;
    }

    TotalCohomologyResult total_cohomology(int max_total_degree) const {
        if (max_total_degree < 0) throw usage_error("negative total degree");
        TotalCohomologyResult out;
        out.betti.assign(static_cast<std::size_t>(max_total_degree) + 1, 0);
        out.reps.assign(static_cast<std::size_t>(max_total_degree) + 1, {});
        for (int n = 0; n <= max_total_degree; ++n) {
            RankKernelImage cur = rank_kernel_image(D_matrix(n));
            RowReducer span;
            if (n > 0) {
                RankKernelImage prev = rank_kernel_image(D_matrix(n - 1));
                for (Vec& v : prev.image) span.absorb(std::move(v));
            }
            for (const Vec& k : cur.kernel) {
                if (span.absorb(k)) {
                    out.reps[static_cast<std::size_t>(n)].push_back(from_vec(k, n));
                    out.betti[static_cast<std::size_t>(n)] += 1;
                }
            }
        }
        return out;
    }

private:
    ChartCategory cat_;
    std::size_t cap_;
    mutable std::vector<std::vector<std::vector<std::string>>> strings_;
    mutable std::vector<std::map<std::vector<std::string>, int>> string_index_;
    mutable std::map<std::pair<std::string, int>, SparseMatrix> pullbacks_;
    mutable std::map<std::pair<std::string, int>, SparseMatrix> coboundaries_;
    mutable std::map<int, SparseMatrix> d_matrices_;

    struct Layout {
        std::vector<std::vector<int>> offsets; // [p][string index]
        int total = 0;
    };
    mutable std::map<int, Layout> layouts_;

    const Layout& layout(int n) const {
        auto it = layouts_.find(n);
        if (it != layouts_.end()) return it->second;
        Layout L;
        int off = 0;
        for (int p = 0; p <= n; ++p) {
            int q = n - p;
            const auto& ss = strings(p);
            std::vector<int> offs;
            for (const auto& key : ss) {
                offs.push_back(off);
                off += source_complex(key, p).cochain_dim(q);
            }
            L.offsets.push_back(std::move(offs));
        }
        L.total = off;
        return layouts_.emplace(n, std::move(L)).first->second;
    }

    const SparseMatrix& coboundary_of(const std::string& object_id, int q) const {
        auto k = std::make_pair(object_id, q);
        auto it = coboundaries_.find(k);
        if (it == coboundaries_.end())
            it = coboundaries_.emplace(k, cat_.object(object_id).complex.coboundary(q)).first;
        return it->second;
    }

    static void accumulate(TotalCochain& out, BigradedCochain part) {
        auto it = out.parts.find(part.p);
        if (it == out.parts.end())
            out.parts.emplace(part.p, std::move(part));
        else
            it->second += part;
    }
};

// Seeded random cochain with small rational entries, for differential and
// homotopy identity checks.
inline BigradedCochain random_bigraded(const CechDeRham& engine, int p, int q,
                                       std::mt19937_64& gen) {
    BigradedCochain out{p, q, {}};
    for (const auto& key : engine.strings(p)) {
        int dim = engine.source_complex(key, p).cochain_dim(q);
        Vec v(static_cast<std::size_t>(dim), 0);
        bool nonzero = false;
        for (int i = 0; i < dim; ++i) {
            int num = static_cast<int>(gen() % 19) - 9;
            int den = static_cast<int>(gen() % 9) + 1;
            v[static_cast<std::size_t>(i)] = Rational(num) / Rational(den);
            nonzero = nonzero || num != 0;
        }
        if (nonzero) out.values.emplace(key, std::move(v));
    }
    return out;
}

// The (0,q) cochain assigning the family member to each object. The family
// must be morphism-compatible: pullback along every morphism sends the target
// member to the source member.
inline BigradedCochain j_map(const CechDeRham& engine, const std::map<std::string, Vec>& family,
                             int q) {
    const ChartCategory& cat = engine.category();
    for (const auto& [oid, obj] : cat.objects()) {
        auto it = family.find(oid);
        if (it == family.end()) throw usage_error("family misses object '" + oid + "'");
        if (static_cast<int>(it->second.size()) != obj.complex.cochain_dim(q))
            throw usage_error("family cochain length mismatch on object '" + oid + "'");
    }
    for (const auto& [mid, m] : cat.morphisms()) {
        Vec pulled = engine.pullback(mid, q).apply(family.at(m.target));
        if (pulled != family.at(m.source))
            throw usage_error("family incompatible at morphism '" + mid + "'");
    }
    BigradedCochain out{0, q, {}};
    for (const auto& [oid, obj] : cat.objects())
        if (!is_zero_vec(family.at(oid))) out.values.emplace(std::vector<std::string>{oid},
                                                             family.at(oid));
    return out;
}

// Coordinates of a D-closed total cochain in the representative basis of its
// degree; throws when the cochain is not closed modulo the computed image.
inline Vec class_coordinates(const CechDeRham& engine, const TotalCohomologyResult& coh,
                             const TotalCochain& x) {
    int n = x.degree;
    if (n >= static_cast<int>(coh.reps.size()))
        throw usage_error("degree exceeds computed cohomology range");
    const auto& reps = coh.reps[static_cast<std::size_t>(n)];
    int r = static_cast<int>(reps.size());
    int image_cols = n > 0 ? engine.total_dim(n - 1) : 0;
    SparseMatrix A(engine.total_dim(n), r + image_cols);
    for (int j = 0; j < r; ++j) {
        Vec col = engine.to_vec(reps[static_cast<std::size_t>(j)]);
        for (std::size_t i = 0; i < col.size(); ++i)
            if (col[i] != 0) A.set(static_cast<int>(i), j, col[i]);
    }
    if (n > 0) {
        const SparseMatrix& D = engine.D_matrix(n - 1);
        for (int i = 0; i < D.rows(); ++i)
            for (const auto& [j, v] : D.row(i)) A.set(i, r + j, v);
    }
    auto sol = solve(A, engine.to_vec(x));
    if (!sol) throw error("cochain is not D-closed in the computed range");
    Vec out(static_cast<std::size_t>(r), 0);
    for (int j = 0; j < r; ++j) out[static_cast<std::size_t>(j)] = (*sol)[static_cast<std::size_t>(j)];
    return out;
}

} // namespace folcc
