#pragma once

// Independent Betti oracle for small complexes. Faces are enumerated by
// bitmask from maximal simplices over integer vertices, coboundaries are built
// by vertex deletion, ranks come from the dense fraction-free eliminator.
// Shares nothing with the production simplicial pipeline.

#include <algorithm>
#include <set>
#include <vector>

#include "folcc/sparse_matrix.hpp"
#include "dense_oracle.hpp"

namespace folcc::testsupport {

inline std::vector<int> oracle_betti(const std::vector<std::vector<int>>& maximal, int max_q) {
    std::set<std::vector<int>> all;
    for (const auto& m : maximal) {
        for (unsigned mask = 1; mask < (1u << m.size()); ++mask) {
            std::vector<int> f;
            for (std::size_t i = 0; i < m.size(); ++i)
                if (mask & (1u << i)) f.push_back(m[i]);
            std::sort(f.begin(), f.end());
            f.erase(std::unique(f.begin(), f.end()), f.end());
            all.insert(f);
        }
    }
    std::vector<std::vector<std::vector<int>>> faces;
    for (const auto& f : all) {
        std::size_t q = f.size() - 1;
        if (faces.size() <= q) faces.resize(q + 1);
        faces[q].push_back(f);
    }
    for (auto& level : faces) std::sort(level.begin(), level.end());

    auto dim_of = [&](int q) {
        return q >= 0 && q < static_cast<int>(faces.size())
                   ? static_cast<int>(faces[static_cast<std::size_t>(q)].size())
                   : 0;
    };
    auto rank_d = [&](int q) {
        int rows = dim_of(q + 1), cols = dim_of(q);
        if (rows == 0 || cols == 0) return 0;
        SparseMatrix d(rows, cols);
        const auto& lvl = faces[static_cast<std::size_t>(q)];
        for (int r = 0; r < rows; ++r) {
            const auto& s = faces[static_cast<std::size_t>(q + 1)][static_cast<std::size_t>(r)];
            for (std::size_t i = 0; i < s.size(); ++i) {
                std::vector<int> face = s;
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
                auto it = std::lower_bound(lvl.begin(), lvl.end(), face);
                d.set(r, static_cast<int>(it - lvl.begin()), i % 2 == 0 ? 1 : -1);
            }
        }
        return bareiss_rank(d);
    };

    std::vector<int> betti;
    int prev_rank = 0;
    for (int q = 0; q <= max_q; ++q) {
        int r = rank_d(q);
        betti.push_back(dim_of(q) - r - prev_rank);
        prev_rank = r;
    }
    return betti;
}

} // namespace folcc::testsupport
