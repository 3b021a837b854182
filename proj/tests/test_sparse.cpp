#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

#include "folcc/sparse_matrix.hpp"
#include "support/dense_oracle.hpp"

using namespace folcc;

namespace {

SparseMatrix example3x3() {
    return SparseMatrix::from_dense({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}}, 3);
}

// Deterministic pseudo-random rationals for property tests.
struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 33;
    }
    Rational rational() {
        int num = static_cast<int>(next() % 11) - 5;
        int den = 1 + static_cast<int>(next() % 4);
        return Rational(num, den);
    }
};

SparseMatrix random_matrix(Lcg& rng, int rows, int cols, int fill_percent) {
    SparseMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (static_cast<int>(rng.next() % 100) < fill_percent) m.set(i, j, rng.rational());
    return m;
}

} // namespace

TEST_CASE("rref of a rank-2 matrix is the canonical one") {
    Rref r = rref(example3x3());
    REQUIRE(r.pivot_cols == std::vector<int>{0, 1});
    REQUIRE(r.R.rows() == 2);
    CHECK(r.R.entry(0, 0) == 1);
    CHECK(r.R.entry(0, 1) == 0);
    CHECK(r.R.entry(0, 2) == -1);
    CHECK(r.R.entry(1, 0) == 0);
    CHECK(r.R.entry(1, 1) == 1);
    CHECK(r.R.entry(1, 2) == 2);
}

TEST_CASE("rank, kernel, and image of the worked example") {
    RankKernelImage rki = rank_kernel_image(example3x3());
    CHECK(rki.rank == 2);
    REQUIRE(rki.kernel.size() == 1);
    CHECK(rki.kernel[0] == Vec{1, -2, 1});
    REQUIRE(rki.image.size() == 2);
    CHECK(rki.image[0] == Vec{1, 2, 0});
    CHECK(rki.image[1] == Vec{0, 0, 1});
    CHECK(rki.pivot_cols == std::vector<int>{0, 1});
}

TEST_CASE("solve returns the particular solution with free variables zero") {
    SparseMatrix A = example3x3();
    auto x = solve(A, Vec{3, 6, 1});
    REQUIRE(x.has_value());
    CHECK(*x == Vec{-1, 2, 0});
    CHECK(A.apply(*x) == Vec{3, 6, 1});

    CHECK(!solve(A, Vec{1, 0, 0}).has_value());
}

TEST_CASE("degenerate shapes") {
    SparseMatrix z(0, 0);
    CHECK(rank_kernel_image(z).rank == 0);
    SparseMatrix wide(0, 3);
    RankKernelImage rw = rank_kernel_image(wide);
    CHECK(rw.rank == 0);
    CHECK(rw.kernel.size() == 3);
    SparseMatrix tall(3, 0);
    RankKernelImage rt = rank_kernel_image(tall);
    CHECK(rt.rank == 0);
    CHECK(rt.kernel.empty());
    CHECK(rt.image.empty());
    auto x = solve(tall, Vec{0, 0, 0});
    REQUIRE(x.has_value());
    CHECK(x->empty());
    CHECK(!solve(tall, Vec{1, 0, 0}).has_value());
}

TEST_CASE("matrix product and identity") {
    SparseMatrix A = example3x3();
    CHECK(A * SparseMatrix::identity(3) == A);
    CHECK(SparseMatrix::identity(3) * A == A);
    CHECK((A - A).is_zero());
    SparseMatrix B = SparseMatrix::from_dense({{0, 1}, {1, 0}, {2, 2}}, 2);
    SparseMatrix AB = A * B;
    CHECK(AB.entry(0, 0) == 8);
    CHECK(AB.entry(0, 1) == 7);
    CHECK(AB.entry(2, 0) == 3);
    CHECK(AB.entry(2, 1) == 3);
}

TEST_CASE("properties against the dense fraction-free oracle") {
    Lcg rng(20260823);
    for (int trial = 0; trial < 40; ++trial) {
        int rows = 1 + static_cast<int>(rng.next() % 8);
        int cols = 1 + static_cast<int>(rng.next() % 8);
        int fill = 25 + static_cast<int>(rng.next() % 70);
        SparseMatrix A = random_matrix(rng, rows, cols, fill);

        RankKernelImage rki = rank_kernel_image(A);
        CAPTURE(trial, rows, cols, fill);

        CHECK(rki.rank == testsupport::bareiss_rank(A));
        CHECK(rki.rank == testsupport::bareiss_rank(A.transpose()));
        CHECK(rki.rank + static_cast<int>(rki.kernel.size()) == cols);
        CHECK(static_cast<int>(rki.image.size()) == rki.rank);

        Vec zero(rows, 0);
        for (const Vec& k : rki.kernel) CHECK(A.apply(k) == zero);
        for (const Vec& v : rki.image) CHECK(solve(A, v).has_value());

        Vec x(cols);
        for (int j = 0; j < cols; ++j) x[static_cast<std::size_t>(j)] = rng.rational();
        Vec b = A.apply(x);
        auto sol = solve(A, b);
        REQUIRE(sol.has_value());
        CHECK(A.apply(*sol) == b);
    }
}

TEST_CASE("rref is idempotent") {
    Lcg rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        SparseMatrix A = random_matrix(rng, 5, 6, 60);
        Rref r1 = rref(A);
        Rref r2 = rref(r1.R);
        CHECK(r1.R == r2.R);
        CHECK(r1.pivot_cols == r2.pivot_cols);
    }
}
