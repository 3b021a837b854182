#pragma once

// Sparse matrices over the rationals with a deterministic reduced row echelon
// form. Kernel and image bases derived from the RREF are canonical, so every
// run of a computation prints identical vectors.

#include <map>
#include <optional>
#include <vector>

#include "folcc/errors.hpp"
#include "folcc/rational.hpp"

namespace folcc {

using Vec = std::vector<Rational>;

class SparseMatrix {
public:
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {
        if (rows < 0 || cols < 0) throw error("negative matrix dimension");
    }

    static SparseMatrix identity(int n) {
        SparseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }
    static SparseMatrix from_dense(const std::vector<Vec>& rows, int cols) {
        SparseMatrix m(static_cast<int>(rows.size()), cols);
        for (int i = 0; i < m.rows_; ++i) {
            if (static_cast<int>(rows[i].size()) != cols) throw error("ragged dense matrix");
            for (int j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::map<int, Rational>& row(int i) const { return data_[i]; }

    Rational entry(int i, int j) const {
        auto it = data_[i].find(j);
        return it == data_[i].end() ? Rational(0) : it->second;
    }
    void set(int i, int j, const Rational& v) {
        check_index(i, j);
        if (v == 0)
            data_[i].erase(j);
        else
            data_[i][j] = v;
    }
    void add_to(int i, int j, const Rational& v) {
        check_index(i, j);
        auto [it, inserted] = data_[i].try_emplace(j, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) data_[i].erase(it);
        }
    }

    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) t.data_[j][i] = v;
        return t;
    }

    Vec apply(const Vec& x) const {
        if (static_cast<int>(x.size()) != cols_) throw error("vector length mismatch");
        Vec y(rows_, 0);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) y[i] += v * x[j];
        return y;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_) throw error("matrix dimension mismatch");
        SparseMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (const auto& [k, av] : a.data_[i])
                for (const auto& [j, bv] : b.data_[k]) c.add_to(i, j, av * bv);
        return c;
    }
    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw error("matrix dimension mismatch");
        SparseMatrix c = a;
        for (int i = 0; i < b.rows_; ++i)
            for (const auto& [j, v] : b.data_[i]) c.add_to(i, j, -v);
        return c;
    }

    bool is_zero() const {
        for (const auto& r : data_)
            if (!r.empty()) return false;
        return true;
    }
    bool operator==(const SparseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    int rows_, cols_;
    std::vector<std::map<int, Rational>> data_;

    void check_index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw error("matrix index out of range");
    }
};

struct Rref {
    SparseMatrix R;              // pivot rows only, in pivot-column order
    std::vector<int> pivot_cols; // strictly increasing
};

// Columns are processed left to right; the pivot row is the unused row with
// the fewest nonzeros (ties broken by lowest index), which keeps fill-in down
// without affecting the resulting RREF, since RREF is unique.
inline Rref rref(const SparseMatrix& A) {
    int nr = A.rows(), nc = A.cols();
    std::vector<std::map<int, Rational>> rows(nr);
    for (int i = 0; i < nr; ++i) rows[i] = A.row(i);
    std::vector<bool> used(nr, false);
    std::vector<int> pivot_rows, pivot_cols;

    for (int c = 0; c < nc; ++c) {
        int best = -1;
        std::size_t best_nnz = 0;
        for (int r = 0; r < nr; ++r) {
            if (used[r]) continue;
            if (!rows[r].count(c)) continue;
            if (best < 0 || rows[r].size() < best_nnz) {
                best = r;
                best_nnz = rows[r].size();
            }
        }
        if (best < 0) continue;
        Rational inv = Rational(1) / rows[best].at(c);
        if (inv != 1)
            for (auto& [j, v] : rows[best]) v *= inv;
        for (int r = 0; r < nr; ++r) {
            if (r == best) continue;
            auto it = rows[r].find(c);
            if (it == rows[r].end()) continue;
            Rational f = it->second;
            for (const auto& [j, v] : rows[best]) {
                auto [jt, inserted] = rows[r].try_emplace(j, -f * v);
                if (!inserted) {
                    jt->second -= f * v;
                    if (jt->second == 0) rows[r].erase(jt);
                }
            }
        }
        used[best] = true;
        pivot_rows.push_back(best);
        pivot_cols.push_back(c);
    }

    Rref out{SparseMatrix(static_cast<int>(pivot_rows.size()), nc), pivot_cols};
    for (std::size_t i = 0; i < pivot_rows.size(); ++i)
        for (const auto& [j, v] : rows[pivot_rows[i]]) out.R.set(static_cast<int>(i), j, v);
    return out;
}

struct RankKernelImage {
    int rank = 0;
    std::vector<Vec> kernel; // basis of null space, one vector per free column
    std::vector<Vec> image;  // canonical basis of column space
    std::vector<int> pivot_cols;
};

inline RankKernelImage rank_kernel_image(const SparseMatrix& A) {
    RankKernelImage out;
    Rref r = rref(A);
    out.rank = static_cast<int>(r.pivot_cols.size());
    out.pivot_cols = r.pivot_cols;

    std::vector<bool> is_pivot(A.cols(), false);
    for (int c : r.pivot_cols) is_pivot[c] = true;
    for (int f = 0; f < A.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec v(A.cols(), 0);
        v[f] = 1;
        for (int i = 0; i < out.rank; ++i) v[r.pivot_cols[i]] = -r.R.entry(i, f);
        out.kernel.push_back(std::move(v));
    }

    Rref rt = rref(A.transpose());
    for (int i = 0; i < rt.R.rows(); ++i) {
        Vec v(A.rows(), 0);
        for (const auto& [j, val] : rt.R.row(i)) v[j] = val;
        out.image.push_back(std::move(v));
    }
    return out;
}

// Incremental span tracker. absorb() reports whether the vector enlarged the
// span; used to pick representatives greedily in a deterministic order.
class RowReducer {
public:
    bool absorb(Vec v) {
        for (const auto& [p, r] : rows_) {
            std::size_t sp = static_cast<std::size_t>(p);
            if (sp >= v.size() || v[sp] == 0) continue;
            Rational f = v[sp];
            for (std::size_t j = sp; j < v.size(); ++j) v[j] -= f * r[j];
        }
        for (std::size_t p = 0; p < v.size(); ++p) {
            if (v[p] == 0) continue;
            Rational inv = Rational(1) / v[p];
            for (std::size_t j = p; j < v.size(); ++j) v[j] *= inv;
            rows_.emplace(static_cast<int>(p), std::move(v));
            return true;
        }
        return false;
    }
    int rank() const { return static_cast<int>(rows_.size()); }

private:
    std::map<int, Vec> rows_;
};

// Particular solution of A x = b with all free variables set to zero, or
// nullopt when the system is inconsistent.
inline std::optional<Vec> solve(const SparseMatrix& A, const Vec& b) {
    if (static_cast<int>(b.size()) != A.rows()) throw error("vector length mismatch");
    SparseMatrix aug(A.rows(), A.cols() + 1);
    for (int i = 0; i < A.rows(); ++i) {
        for (const auto& [j, v] : A.row(i)) aug.set(i, j, v);
        aug.set(i, A.cols(), b[i]);
    }
    Rref r = rref(aug);
    for (int c : r.pivot_cols)
        if (c == A.cols()) return std::nullopt;
    Vec x(A.cols(), 0);
    for (std::size_t i = 0; i < r.pivot_cols.size(); ++i)
        x[r.pivot_cols[i]] = r.R.entry(static_cast<int>(i), A.cols());
    return x;
}

} // namespace folcc
