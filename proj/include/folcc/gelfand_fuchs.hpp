#pragma once

// Finite cochain models built from odd generators y_i (degree 2i-1) and even
// generators c_i (degree 2i), with d(y_i) = c_i and the truncation that kills
// every c-monomial whose index weight exceeds n.
//
//   variant w:   y_1..y_n and c_1..c_n
//   variant wo:  y_i for odd i only, all c_i
//   variant wgl: c_i only, zero differential

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "folcc/errors.hpp"
#include "folcc/rational.hpp"
#include "folcc/sparse_matrix.hpp"

namespace folcc {

enum class GfVariant { w, wo, wgl };

inline std::string variant_name(GfVariant v) {
    switch (v) {
        case GfVariant::w: return "w";
        case GfVariant::wo: return "wo";
        case GfVariant::wgl: return "wgl";
    }
    throw error("bad variant");
}

inline GfVariant parse_variant(const std::string& s) {
    std::string t;
    for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "w") return GfVariant::w;
    if (t == "wo") return GfVariant::wo;
    if (t == "wgl") return GfVariant::wgl;
    throw usage_error("unknown variant '" + s + "' (expected w, wo, or wgl)");
}

struct GfMonomial {
    std::vector<int> y; // 0/1 exponents, y[i] is the generator y_{i+1}
    std::vector<int> c; // c[j] is the exponent of c_{j+1}
    auto operator<=>(const GfMonomial&) const = default;
};

using GfElement = std::map<GfMonomial, Rational>;

inline int gf_degree(const GfMonomial& m) {
    int d = 0;
    for (std::size_t i = 0; i < m.y.size(); ++i) d += m.y[i] * (2 * static_cast<int>(i) + 1);
    for (std::size_t j = 0; j < m.c.size(); ++j) d += m.c[j] * (2 * static_cast<int>(j) + 2);
    return d;
}

inline int c_weight(const GfMonomial& m) {
    int w = 0;
    for (std::size_t j = 0; j < m.c.size(); ++j) w += m.c[j] * (static_cast<int>(j) + 1);
    return w;
}

class GfAlgebra {
public:
    GfAlgebra(GfVariant variant, int n) : variant_(variant), n_(n) {
        if (n < 1) throw usage_error("n must be at least 1");
        enumerate();
    }

    GfVariant variant() const { return variant_; }
    int n() const { return n_; }
    int top_degree() const { return static_cast<int>(basis_.size()) - 1; }

    bool has_y(int index1) const {
        if (index1 < 1 || index1 > n_) return false;
        if (variant_ == GfVariant::wgl) return false;
        if (variant_ == GfVariant::wo) return index1 % 2 == 1;
        return true;
    }
    bool has_c(int index1) const { return index1 >= 1 && index1 <= n_; }

    const std::vector<GfMonomial>& basis(int q) const {
        static const std::vector<GfMonomial> empty;
        if (q < 0 || q > top_degree()) return empty;
        return basis_[static_cast<std::size_t>(q)];
    }
    int dim(int q) const { return static_cast<int>(basis(q).size()); }

    int index_of(const GfMonomial& m) const {
        int q = gf_degree(m);
        if (q < 0 || q > top_degree()) throw error("monomial degree out of range");
        const auto& ix = index_[static_cast<std::size_t>(q)];
        auto it = ix.find(m);
        if (it == ix.end()) throw error("monomial not in basis");
        return it->second;
    }

    // Zero for monomials killed by truncation or by a repeated odd generator;
    // throws on generators the variant does not contain.
    bool admissible(const GfMonomial& m) const {
        if (m.y.size() != static_cast<std::size_t>(n_) ||
            m.c.size() != static_cast<std::size_t>(n_))
            throw error("monomial arity mismatch");
        for (int i = 0; i < n_; ++i) {
            if (m.y[static_cast<std::size_t>(i)] > 0 && !has_y(i + 1))
                throw error("generator y" + std::to_string(i + 1) + " not in variant " +
                            variant_name(variant_));
            if (m.y[static_cast<std::size_t>(i)] > 1) return false;
        }
        return c_weight(m) <= n_;
    }

    GfElement reduce(const GfElement& e) const {
        GfElement out;
        for (const auto& [m, coef] : e) {
            if (coef == 0) continue;
            if (admissible(m)) out[m] += coef;
        }
        for (auto it = out.begin(); it != out.end();)
            it = it->second == 0 ? out.erase(it) : std::next(it);
        return out;
    }

    GfElement differential(const GfElement& e) const {
        GfElement out;
        if (variant_ == GfVariant::wgl) return out;
        for (const auto& [m, coef] : e) {
            int seen = 0;
            for (int i = 0; i < n_; ++i) {
                std::size_t si = static_cast<std::size_t>(i);
                if (m.y[si] == 0) continue;
                GfMonomial t = m;
                t.y[si] = 0;
                t.c[si] += 1;
                if (c_weight(t) <= n_) {
                    Rational s = (seen % 2 == 0) ? coef : -coef;
                    out[t] += s;
                }
                ++seen;
            }
        }
        return reduce(out);
    }

    GfElement multiply(const GfElement& a, const GfElement& b) const {
        GfElement out;
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b) {
                bool clash = false;
                long inversions = 0, smaller = 0;
                for (int i = 0; i < n_; ++i) {
                    std::size_t si = static_cast<std::size_t>(i);
                    if (ma.y[si] && mb.y[si]) {
                        clash = true;
                        break;
                    }
                    if (ma.y[si]) inversions += smaller;
                    if (mb.y[si]) ++smaller;
                }
                if (clash) continue;
                GfMonomial t = ma;
                for (int i = 0; i < n_; ++i) {
                    std::size_t si = static_cast<std::size_t>(i);
                    t.y[si] += mb.y[si];
                    t.c[si] += mb.c[si];
                }
                if (c_weight(t) > n_) continue;
                out[t] += (inversions % 2 == 0) ? ca * cb : -(ca * cb);
            }
        return reduce(out);
    }

    GfMonomial unit_monomial() const {
        return GfMonomial{std::vector<int>(static_cast<std::size_t>(n_), 0),
                          std::vector<int>(static_cast<std::size_t>(n_), 0)};
    }

    std::string name(const GfMonomial& m) const {
        std::ostringstream out;
        bool wrote = false;
        for (int i = 0; i < n_; ++i) {
            if (!m.y[static_cast<std::size_t>(i)]) continue;
            if (wrote) out << "*";
            out << "y" << (i + 1);
            wrote = true;
        }
        for (int j = 0; j < n_; ++j) {
            int e = m.c[static_cast<std::size_t>(j)];
            if (!e) continue;
            if (wrote) out << "*";
            out << "c" << (j + 1);
            if (e > 1) out << "^" << e;
            wrote = true;
        }
        return wrote ? out.str() : "1";
    }

    std::string str(const GfElement& e) const {
        if (e.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [m, coef] : e) {
            Rational c = coef;
            if (first) {
                if (c < 0) {
                    out << "-";
                    c = -c;
                }
            } else {
                out << (c < 0 ? " - " : " + ");
                if (c < 0) c = -c;
            }
            first = false;
            std::string nm = name(m);
            if (c == 1 && nm != "1")
                out << nm;
            else if (nm == "1")
                out << to_string(c);
            else
                out << to_string(c) << "*" << nm;
        }
        return out.str();
    }

    Vec to_vec(const GfElement& e, int q) const {
        Vec v(static_cast<std::size_t>(dim(q)), 0);
        for (const auto& [m, coef] : e) {
            if (gf_degree(m) != q) throw error("element is not homogeneous of the given degree");
            v[static_cast<std::size_t>(index_of(m))] = coef;
        }
        return v;
    }
    GfElement from_vec(const Vec& v, int q) const {
        if (static_cast<int>(v.size()) != dim(q)) throw error("vector length mismatch");
        GfElement e;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) e[basis(q)[i]] = v[i];
        return e;
    }

    // Matrix of d restricted to degree q, written in the canonical bases.
    SparseMatrix diff_matrix(int q) const {
        SparseMatrix m(dim(q + 1), dim(q));
        for (int j = 0; j < dim(q); ++j) {
            GfElement img = differential(GfElement{{basis(q)[static_cast<std::size_t>(j)], 1}});
            for (const auto& [mono, coef] : img) m.set(index_of(mono), j, coef);
        }
        return m;
    }

private:
    GfVariant variant_;
    int n_;
    std::vector<std::vector<GfMonomial>> basis_;
    std::vector<std::map<GfMonomial, int>> index_;

    void enumerate() {
        std::set<GfMonomial> all;
        std::vector<int> c(static_cast<std::size_t>(n_), 0);
        enumerate_c(0, 0, c, all);
        int top = 0;
        for (const GfMonomial& m : all) top = std::max(top, gf_degree(m));
        basis_.assign(static_cast<std::size_t>(top) + 1, {});
        index_.assign(static_cast<std::size_t>(top) + 1, {});
        for (const GfMonomial& m : all) {
            std::size_t q = static_cast<std::size_t>(gf_degree(m));
            index_[q].emplace(m, static_cast<int>(basis_[q].size()));
            basis_[q].push_back(m);
        }
    }

    void enumerate_c(int j, int weight, std::vector<int>& c, std::set<GfMonomial>& all) {
        if (j == n_) {
            std::vector<int> y(static_cast<std::size_t>(n_), 0);
            enumerate_y(0, y, c, all);
            return;
        }
        for (int e = 0; weight + e * (j + 1) <= n_; ++e) {
            c[static_cast<std::size_t>(j)] = e;
            enumerate_c(j + 1, weight + e * (j + 1), c, all);
        }
        c[static_cast<std::size_t>(j)] = 0;
    }

    void enumerate_y(int i, std::vector<int>& y, const std::vector<int>& c,
                     std::set<GfMonomial>& all) {
        if (i == n_) {
            all.insert(GfMonomial{y, c});
            return;
        }
        enumerate_y(i + 1, y, c, all);
        if (has_y(i + 1)) {
            y[static_cast<std::size_t>(i)] = 1;
            enumerate_y(i + 1, y, c, all);
            y[static_cast<std::size_t>(i)] = 0;
        }
    }
};

struct GfCohomology {
    std::vector<int> betti;                  // indexed by degree, 0..top
    std::vector<std::vector<GfElement>> reps; // canonical representatives per degree
};

inline GfCohomology cohomology(const GfAlgebra& a) {
    GfCohomology out;
    int top = a.top_degree();
    out.betti.assign(static_cast<std::size_t>(top) + 1, 0);
    out.reps.assign(static_cast<std::size_t>(top) + 1, {});
    for (int q = 0; q <= top; ++q) {
        RankKernelImage cur = rank_kernel_image(a.diff_matrix(q));
        std::vector<Vec> kernel = std::move(cur.kernel);
        RowReducer span;
        if (q > 0) {
            RankKernelImage prev = rank_kernel_image(a.diff_matrix(q - 1));
            for (Vec& v : prev.image) span.absorb(std::move(v));
        }
        for (const Vec& k : kernel) {
            if (span.absorb(k)) {
                out.reps[static_cast<std::size_t>(q)].push_back(a.from_vec(k, q));
                out.betti[static_cast<std::size_t>(q)] += 1;
            }
        }
    }
    return out;
}

struct TrivialityReport {
    bool closed = false;
    GfElement boundary;   // d of the input when not closed
    bool trivial = false; // meaningful only when closed
    GfElement primitive;  // with d(primitive) == input when trivial
    Vec class_coords;     // coordinates in the representative basis when nontrivial
};

// Decide whether a closed homogeneous element is a coboundary; either way the
// report carries a finite certificate that the caller can re-verify.
inline TrivialityReport check_triviality(const GfAlgebra& a, const GfElement& e, int q) {
    TrivialityReport rep;
    rep.boundary = a.differential(e);
    rep.closed = rep.boundary.empty();
    if (!rep.closed) return rep;

    Vec v = a.to_vec(e, q);
    SparseMatrix prev = q > 0 ? a.diff_matrix(q - 1) : SparseMatrix(a.dim(0), 0);
    auto sol = solve(prev, v);
    if (sol.has_value()) {
        rep.trivial = true;
        if (q > 0) rep.primitive = a.from_vec(*sol, q - 1);
        return rep;
    }

    GfCohomology h = cohomology(a);
    const auto& reps = h.reps[static_cast<std::size_t>(q)];
    RankKernelImage prev_rki = rank_kernel_image(prev);
    int nrep = static_cast<int>(reps.size());
    int nbd = static_cast<int>(prev_rki.image.size());
    SparseMatrix basis_mat(a.dim(q), nrep + nbd);
    for (int j = 0; j < nrep; ++j) {
        Vec rv = a.to_vec(reps[static_cast<std::size_t>(j)], q);
        for (std::size_t i = 0; i < rv.size(); ++i)
            basis_mat.set(static_cast<int>(i), j, rv[i]);
    }
    for (int j = 0; j < nbd; ++j)
        for (std::size_t i = 0; i < prev_rki.image[static_cast<std::size_t>(j)].size(); ++i)
            basis_mat.set(static_cast<int>(i), nrep + j,
                          prev_rki.image[static_cast<std::size_t>(j)][i]);
    auto coords = solve(basis_mat, v);
    if (!coords.has_value()) throw error("closed element outside kernel span");
    rep.class_coords.assign(coords->begin(), coords->begin() + nrep);
    return rep;
}

// Cohomology maps induced by the inclusions wgl into wo into w. Source
// monomials are sent to themselves; the matrix in each degree expresses the
// image classes in the target's representative basis.
inline std::vector<SparseMatrix> induced_map(const GfAlgebra& from, const GfAlgebra& to) {
    if (from.n() != to.n()) throw usage_error("induced map requires matching n");
    auto rank_of = [](GfVariant v) {
        return v == GfVariant::wgl ? 0 : (v == GfVariant::wo ? 1 : 2);
    };
    if (rank_of(from.variant()) >= rank_of(to.variant()))
        throw usage_error("induced map goes from wgl toward w");

    GfCohomology hf = cohomology(from);
    GfCohomology ht = cohomology(to);
    int top = to.top_degree();
    std::vector<SparseMatrix> maps;
    for (int q = 0; q <= top; ++q) {
        int rows = q < static_cast<int>(ht.betti.size()) ? ht.betti[static_cast<std::size_t>(q)] : 0;
        int cols = q < static_cast<int>(hf.betti.size()) ? hf.betti[static_cast<std::size_t>(q)] : 0;
        SparseMatrix m(rows, cols);
        for (int j = 0; j < cols; ++j) {
            const GfElement& r = hf.reps[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
            GfElement image = to.reduce(r);
            TrivialityReport t = check_triviality(to, image, q);
            if (!t.closed) throw error("inclusion image of a cocycle is not closed");
            if (t.trivial) continue;
            for (int i = 0; i < rows; ++i)
                m.set(i, j, t.class_coords[static_cast<std::size_t>(i)]);
        }
        maps.push_back(std::move(m));
    }
    return maps;
}

} // namespace folcc
