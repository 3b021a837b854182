#pragma once

// Finite abstract simplicial complexes over named vertices, with exact
// rational cochains: face enumeration from maximal simplices, coboundary
// matrices, pullback along vertex maps, induced subcomplexes, and the ordered
// product triangulation.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "folcc/errors.hpp"
#include "folcc/sparse_matrix.hpp"

namespace folcc {

namespace detail {

// Sorts in place; returns the permutation sign, or 0 when a value repeats.
inline int sort_sign(std::vector<int>& v) {
    int sign = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t j = i; j > 0 && v[j] <= v[j - 1]; --j) {
            if (v[j] == v[j - 1]) return 0;
            std::swap(v[j], v[j - 1]);
            sign = -sign;
        }
    return sign;
}

} // namespace detail

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    SimplicialComplex(std::vector<std::string> vertices,
                      const std::vector<std::vector<std::string>>& maximal_simplices)
        : vertices_(std::move(vertices)) {
        std::sort(vertices_.begin(), vertices_.end());
        if (vertices_.empty()) throw model_error("simplicial complex has no vertices");
        if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
            throw model_error("duplicate vertex name");
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            index_[vertices_[i]] = static_cast<int>(i);

        std::set<std::vector<int>> faces;
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            faces.insert({static_cast<int>(i)});
        for (const auto& s : maximal_simplices) {
            if (s.empty()) throw model_error("empty simplex");
            if (s.size() > 16) throw model_error("simplex too large");
            std::vector<int> ix;
            for (const auto& v : s) ix.push_back(vertex_index(v));
            std::sort(ix.begin(), ix.end());
            if (std::adjacent_find(ix.begin(), ix.end()) != ix.end())
                throw model_error("repeated vertex in simplex");
            for (unsigned mask = 1; mask < (1u << ix.size()); ++mask) {
                std::vector<int> face;
                for (std::size_t b = 0; b < ix.size(); ++b)
                    if (mask & (1u << b)) face.push_back(ix[b]);
                faces.insert(std::move(face));
            }
        }
        for (const auto& f : faces) {
            std::size_t q = f.size() - 1;
            if (faces_.size() <= q) faces_.resize(q + 1);
            faces_[q].push_back(f);
        }
    }

    int dim() const { return static_cast<int>(faces_.size()) - 1; }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::string& vertex_name(int i) const {
        return vertices_[static_cast<std::size_t>(i)];
    }
    bool has_vertex(const std::string& v) const { return index_.count(v) > 0; }
    int vertex_index(const std::string& v) const {
        auto it = index_.find(v);
        if (it == index_.end()) throw model_error("unknown vertex '" + v + "'");
        return it->second;
    }

    const std::vector<std::vector<int>>& simplices(int q) const {
        static const std::vector<std::vector<int>> none;
        if (q < 0 || q > dim()) return none;
        return faces_[static_cast<std::size_t>(q)];
    }
    int cochain_dim(int q) const { return static_cast<int>(simplices(q).size()); }
    int simplex_index(int q, const std::vector<int>& s) const {
        const auto& list = simplices(q);
        auto it = std::lower_bound(list.begin(), list.end(), s);
        if (it == list.end() || *it != s) return -1;
        return static_cast<int>(it - list.begin());
    }
    std::string simplex_name(int q, int i) const {
        const auto& s = simplices(q)[static_cast<std::size_t>(i)];
        std::string out = "[";
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (k > 0) out += ",";
            out += vertex_name(s[k]);
        }
        return out + "]";
    }

    // (d f)([v_0..v_{q+1}]) = sum_i (-1)^i f([.. v_i dropped ..])
    SparseMatrix coboundary(int q) const {
        SparseMatrix m(cochain_dim(q + 1), cochain_dim(q));
        const auto& hi = simplices(q + 1);
        for (int r = 0; r < static_cast<int>(hi.size()); ++r) {
            const auto& s = hi[static_cast<std::size_t>(r)];
            for (std::size_t i = 0; i < s.size(); ++i) {
                std::vector<int> face = s;
                face.erase(face.begin() + static_cast<long>(i));
                m.add_to(r, simplex_index(q, face), i % 2 == 0 ? 1 : -1);
            }
        }
        return m;
    }

    bool operator==(const SimplicialComplex& o) const {
        return vertices_ == o.vertices_ && faces_ == o.faces_;
    }

private:
    std::vector<std::string> vertices_;
    std::map<std::string, int> index_;
    std::vector<std::vector<std::vector<int>>> faces_; // faces_[q] sorted lexicographically
};

// Pullback of q-cochains along a vertex map h: src -> tgt, as a matrix acting
// on target cochain vectors. Degenerate simplex images contribute zero;
// otherwise the entry is the sign of the vertex-sorting permutation.
inline SparseMatrix pullback_matrix(const SimplicialComplex& src, const SimplicialComplex& tgt,
                                    const std::map<std::string, std::string>& vertex_map,
                                    int q) {
    SparseMatrix m(src.cochain_dim(q), tgt.cochain_dim(q));
    const auto& list = src.simplices(q);
    for (int r = 0; r < static_cast<int>(list.size()); ++r) {
        std::vector<int> img;
        for (int v : list[static_cast<std::size_t>(r)]) {
            auto it = vertex_map.find(src.vertex_name(v));
            if (it == vertex_map.end())
                throw model_error("vertex map misses vertex '" + src.vertex_name(v) + "'");
            img.push_back(tgt.vertex_index(it->second));
        }
        int sign = detail::sort_sign(img);
        if (sign == 0) continue;
        int c = tgt.simplex_index(q, img);
        if (c < 0) throw model_error("vertex map is not simplicial");
        m.add_to(r, c, sign);
    }
    return m;
}

// Full subcomplex spanned by the listed vertices.
inline SimplicialComplex induced_subcomplex(const SimplicialComplex& c,
                                            const std::vector<std::string>& verts) {
    std::set<int> keep;
    for (const auto& v : verts) keep.insert(c.vertex_index(v));
    if (keep.empty()) throw model_error("empty sub-object vertex list");
    std::vector<std::vector<std::string>> maximal;
    for (int q = c.dim(); q >= 0; --q)
        for (const auto& s : c.simplices(q)) {
            bool inside = true;
            for (int v : s) inside = inside && keep.count(v) > 0;
            if (!inside) continue;
            std::vector<std::string> names;
            for (int v : s) names.push_back(c.vertex_name(v));
            maximal.push_back(std::move(names));
        }
    std::vector<std::string> vnames;
    for (int v : keep) vnames.push_back(c.vertex_name(v));
    return SimplicialComplex(vnames, maximal);
}

// Ordered product triangulation: vertices are "u|w" pairs; every pair of
// simplices contributes its monotone staircase simplices.
inline std::string product_vertex(const std::string& u, const std::string& w) {
    return u + "|" + w;
}

inline SimplicialComplex ordered_product(const SimplicialComplex& a,
                                         const SimplicialComplex& b) {
    std::vector<std::string> verts;
    for (const auto& u : a.vertices())
        for (const auto& w : b.vertices()) verts.push_back(product_vertex(u, w));

    std::vector<std::vector<std::string>> maximal;
    for (int qa = 0; qa <= a.dim(); ++qa)
        for (const auto& sa : a.simplices(qa))
            for (int qb = 0; qb <= b.dim(); ++qb)
                for (const auto& sb : b.simplices(qb)) {
                    std::vector<std::pair<int, int>> path{{0, 0}};
                    std::vector<std::vector<std::pair<int, int>>> complete;
                    struct Walker {
                        int ia, ib;
                        void run(std::vector<std::pair<int, int>>& cur,
                                 std::vector<std::vector<std::pair<int, int>>>& out) {
                            auto [x, y] = cur.back();
                            if (x == ia && y == ib) {
                                out.push_back(cur);
                                return;
                            }
                            if (x < ia) {
                                cur.emplace_back(x + 1, y);
                                run(cur, out);
                                cur.pop_back();
                            }
                            if (y < ib) {
                                cur.emplace_back(x, y + 1);
                                run(cur, out);
                                cur.pop_back();
                            }
                        }
                    } walker{qa, qb};
                    walker.run(path, complete);
                    for (const auto& steps : complete) {
                        std::vector<std::string> names;
                        for (auto [i, j] : steps)
                            names.push_back(product_vertex(
                                a.vertex_name(sa[static_cast<std::size_t>(i)]),
                                b.vertex_name(sb[static_cast<std::size_t>(j)])));
                        maximal.push_back(std::move(names));
                    }
                }
    return SimplicialComplex(verts, maximal);
}

// Betti numbers of the simplicial cochain complex in degrees 0..max_q.
inline std::vector<int> simplicial_betti(const SimplicialComplex& c, int max_q) {
    std::vector<int> betti(static_cast<std::size_t>(max_q) + 1, 0);
    for (int q = 0; q <= max_q; ++q) {
        RankKernelImage cur = rank_kernel_image(c.coboundary(q));
        int kernel_dim = c.cochain_dim(q) - cur.rank;
        int image_dim = 0;
        if (q > 0) image_dim = rank_kernel_image(c.coboundary(q - 1)).rank;
        betti[static_cast<std::size_t>(q)] = kernel_dim - image_dim;
    }
    return betti;
}

} // namespace folcc
