/*
 * test_linalg.cpp
 * Exactness and invariants of the elimination kernels: fixed examples over Q
 * and F_p, rank/kernel/solve identities on seeded random matrices, and
 * serial-vs-parallel agreement.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "perfdim/linalg.hpp"

using namespace perfdim;

namespace {

Matrix random_matrix(FieldSpec f, int rows, int cols, std::mt19937& rng, int density_pct = 60) {
    std::uniform_int_distribution<int> val(-9, 9);
    std::uniform_int_distribution<int> keep(0, 99);
    Matrix a(f, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (keep(rng) < density_pct) a.set(i, j, Scalar::of_long(f, val(rng)));
    return a;
}

}  // namespace

TEST_CASE("scalar arithmetic over Q and F_p") {
    auto q = FieldSpec::rationals();
    auto a = Scalar::of_long(q, 2, 3), b = Scalar::of_long(q, -1, 6);
    CHECK((a + b) == Scalar::of_long(q, 1, 2));
    CHECK((a * b) == Scalar::of_long(q, -1, 9));
    CHECK((a / b) == Scalar::of_long(q, -4));
    CHECK(Scalar::parse(q, "-5/15") == Scalar::of_long(q, -1, 3));

    auto f7 = FieldSpec::prime(7);
    auto x = Scalar::of_long(f7, 3), y = Scalar::of_long(f7, 5);
    CHECK((x * y).residue() == 1);  // 15 = 1 mod 7
    CHECK(x.inv().residue() == 5);
    CHECK((x - y).residue() == 5);
    CHECK(Scalar::of_long(f7, -1).residue() == 6);
    CHECK(Scalar::of_long(f7, 1, 2).residue() == 4);  // 1/2 = 4 mod 7

    CHECK_THROWS_AS(Scalar::of_long(f7, 1, 7), LinalgError);
    CHECK_THROWS_AS(FieldSpec::prime(6), LinalgError);
    CHECK_THROWS_AS(Scalar::parse(q, "abc"), LinalgError);
}

TEST_CASE("rank of fixed matrices") {
    auto q = FieldSpec::rationals();
    // Rank-2: third row = first + second.
    Matrix a = Matrix::from_longs(q, {{1, 2, 3}, {4, 5, 6}, {5, 7, 9}});
    CHECK(rank(a) == 2);
    CHECK(rank(Matrix::identity(q, 4)) == 4);
    CHECK(rank(Matrix(q, 3, 5)) == 0);

    // Same matrix mod 3 loses more rank: rows collapse to multiples of (1,2,0).
    auto f3 = FieldSpec::prime(3);
    Matrix b = Matrix::from_longs(f3, {{1, 2, 3}, {4, 5, 6}, {5, 7, 9}});
    CHECK(rank(b) == 1);
    Matrix c = Matrix::from_longs(f3, {{1, 2}, {2, 1}});  // det = -3 = 0 mod 3
    CHECK(rank(c) == 1);
}

TEST_CASE("kernel_basis spans the exact kernel") {
    auto q = FieldSpec::rationals();
    Matrix a = Matrix::from_longs(q, {{1, 2, 3}, {4, 5, 6}, {5, 7, 9}});
    Matrix k = kernel_basis(a);
    CHECK(k.cols() == 1);
    CHECK((a * k).is_zero());
    // The kernel of [1 2 3; 4 5 6] is spanned by (1, -2, 1).
    Matrix v = Matrix::from_longs(q, {{1}, {-2}, {1}});
    CHECK(rank(Matrix::hcat(k, v)) == 1);
}

TEST_CASE("solve returns exact solutions and detects inconsistency") {
    auto q = FieldSpec::rationals();
    Matrix a = Matrix::from_longs(q, {{2, 1}, {1, 3}});
    Matrix b = Matrix::from_longs(q, {{5}, {10}});
    auto x = solve(a, b);
    REQUIRE(x.has_value());
    CHECK(a * *x == b);
    CHECK(x->at(0, 0) == Scalar::of_long(q, 1));
    CHECK(x->at(1, 0) == Scalar::of_long(q, 3));

    Matrix bad_a = Matrix::from_longs(q, {{1, 1}, {1, 1}});
    Matrix bad_b = Matrix::from_longs(q, {{0}, {1}});
    CHECK_FALSE(solve(bad_a, bad_b).has_value());
}

TEST_CASE("hilbert matrix inverts exactly") {
    auto q = FieldSpec::rationals();
    int n = 6;
    Matrix h(q, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h.set(i, j, Scalar::of_long(q, 1, i + j + 1));
    auto hinv = inverse(h);
    REQUIRE(hinv.has_value());
    CHECK(h * *hinv == Matrix::identity(q, n));
    CHECK(rank(h) == n);
}

TEST_CASE("random matrices: rank-nullity, transpose rank, solve consistency") {
    std::mt19937 rng(20240817);
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(101)}) {
        for (int trial = 0; trial < 12; ++trial) {
            int rows = 1 + (int)(rng() % 10), cols = 1 + (int)(rng() % 10);
            Matrix a = random_matrix(f, rows, cols, rng);
            int r = rank(a);
            CHECK(r == rank(a.transpose()));
            CHECK(kernel_basis(a).cols() == cols - r);
            Matrix k = kernel_basis(a);
            if (k.cols() > 0) CHECK((a * k).is_zero());

            // A solvable system: b in the column space by construction.
            Matrix x0 = random_matrix(f, cols, 1, rng);
            auto x = solve(a, a * x0);
            REQUIRE(x.has_value());
            CHECK(a * *x == a * x0);
        }
    }
}

TEST_CASE("serial and parallel elimination agree exactly") {
    std::mt19937 rng(7);
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(32749)}) {
        for (int trial = 0; trial < 4; ++trial) {
            Matrix a = random_matrix(f, 40, 33, rng, 40);
            Matrix s = a, p = a;
            std::vector<int> ps, pp;
            int rs = rref_in_place(s, &ps, Exec::serial);
            int rp = rref_in_place(p, &pp, Exec::parallel);
            CHECK(rs == rp);
            CHECK(ps == pp);
            CHECK(s == p);
        }
    }
}

TEST_CASE("rref is idempotent") {
    std::mt19937 rng(99);
    auto q = FieldSpec::rationals();
    Matrix a = random_matrix(q, 8, 11, rng);
    Matrix w = a;
    rref_in_place(w);
    Matrix w2 = w;
    rref_in_place(w2);
    CHECK(w == w2);
}
