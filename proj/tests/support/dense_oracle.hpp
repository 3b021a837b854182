#pragma once

// Independent rank oracle: dense fraction-free elimination (Bareiss) on an
// integer-scaled copy of the matrix. Deliberately shares no code with the
// sparse RREF used by the library.

#include <vector>

#include "folcc/rational.hpp"
#include "folcc/sparse_matrix.hpp"

namespace folcc::testsupport {

inline int bareiss_rank(const SparseMatrix& A) {
    int n = A.rows(), m = A.cols();
    std::vector<std::vector<BigInt>> M(static_cast<std::size_t>(n),
                                       std::vector<BigInt>(static_cast<std::size_t>(m), 0));
    for (int i = 0; i < n; ++i) {
        BigInt l = 1;
        for (const auto& [j, v] : A.row(i)) l = boost::multiprecision::lcm(l, denom(v));
        for (const auto& [j, v] : A.row(i))
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                numer(v) * (l / denom(v));
    }
    BigInt prev = 1;
    int rank = 0;
    for (int c = 0; c < m && rank < n; ++c) {
        int p = -1;
        for (int i = rank; i < n; ++i)
            if (M[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(M[static_cast<std::size_t>(p)], M[static_cast<std::size_t>(rank)]);
        auto& pr = M[static_cast<std::size_t>(rank)];
        for (int i = rank + 1; i < n; ++i) {
            auto& ri = M[static_cast<std::size_t>(i)];
            BigInt lead = ri[static_cast<std::size_t>(c)];
            for (int j = c; j < m; ++j) {
                std::size_t sj = static_cast<std::size_t>(j);
                ri[sj] = (pr[static_cast<std::size_t>(c)] * ri[sj] - lead * pr[sj]) / prev;
            }
        }
        prev = pr[static_cast<std::size_t>(c)];
        ++rank;
    }
    return rank;
}

} // namespace folcc::testsupport
