#include <doctest.h>

#include "certiqp/error.hpp"
#include "certiqp/linalg.hpp"
#include "test_util.hpp"

using namespace certiqp;
using testutil::inf_diff;

TEST_CASE("cholesky of identity is identity") {
  const auto f = cholesky_factor(Matrix::identity(2));
  CHECK(f.lower == Matrix::identity(2));
}

TEST_CASE("cholesky of a 2x2 reconstructs it") {
  const Matrix a{{4, 2}, {2, 3}};
  const auto f = cholesky_factor(a);
  CHECK(f.lower(0, 0) == doctest::Approx(2.0));
  CHECK(f.lower(1, 0) == doctest::Approx(1.0));
  CHECK(f.lower(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(f.lower(0, 1) == 0.0);
  const Matrix back = testutil::naive_matmul(f.lower, transpose(f.lower));
  CHECK(inf_diff(back, a) <= 1e-14);
}

TEST_CASE("cholesky rejects an indefinite matrix") {
  try {
    cholesky_factor(Matrix{{1, 2}, {2, 1}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotPositiveDefinite);
  }
}

TEST_CASE("cholesky solve") {
  const auto id = cholesky_factor(Matrix::identity(3));
  const Vector b{1, -2, 3};
  CHECK(cholesky_solve(id, b) == b);

  const Matrix a{{4, 2}, {2, 3}};
  const Vector x = cholesky_solve(cholesky_factor(a), Vector{6, 5});
  CHECK(inf_diff(testutil::naive_matvec(a, x), Vector{6, 5}) <= 1e-12);

  CHECK_THROWS_AS(cholesky_solve(id, Vector{1, 2}), Error);
}

TEST_CASE("spd inverse") {
  CHECK(spd_inverse(Matrix::identity(3)) == Matrix::identity(3));
  const Matrix d = spd_inverse(Matrix{{2, 0}, {0, 4}});
  CHECK(d(0, 0) == doctest::Approx(0.5));
  CHECK(d(1, 1) == doctest::Approx(0.25));
  CHECK(d(0, 1) == 0.0);

  std::mt19937_64 rng(5);
  const Matrix a = testutil::random_spd(5, rng);
  const Matrix prod = testutil::naive_matmul(a, spd_inverse(a));
  CHECK(inf_diff(prod, Matrix::identity(5)) <= 1e-8 * 5);
}

TEST_CASE("rank-1 symmetric update") {
  Matrix m = Matrix::identity(3);
  rank1_symmetric_update(m, 1.0, Vector{1, 0, 0});
  CHECK(m == Matrix{{2, 0, 0}, {0, 1, 0}, {0, 0, 1}});

  std::mt19937_64 rng(6);
  const Matrix a = testutil::random_spd(4, rng);
  Matrix same = a;
  rank1_symmetric_update(same, 0.0, testutil::random_vector(4, rng));
  CHECK(same == a);
}

TEST_CASE("rank-1 update keeps exact symmetry") {
  std::mt19937_64 rng(7);
  Matrix m = testutil::random_spd(6, rng);
  for (int k = 0; k < 20; ++k) rank1_symmetric_update(m, 0.37, testutil::random_vector(6, rng));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(m(i, j) == m(j, i));
}

TEST_CASE("matvec") {
  const Vector x{1.5, -2, 0.25};
  CHECK(matvec(Matrix::identity(3), x) == x);
  CHECK(matvec(Matrix(2, 3), x) == Vector{0, 0});
  std::mt19937_64 rng(8);
  const Matrix a = testutil::random_matrix(3, 3, rng);
  CHECK(inf_diff(matvec(a, x), testutil::naive_matvec(a, x)) <= 1e-14);
  CHECK_THROWS_AS(matvec(a, Vector{1, 2}), Error);
}

TEST_CASE("matmul and transpose against naive loops") {
  std::mt19937_64 rng(9);
  const Matrix a = testutil::random_matrix(4, 7, rng);
  const Matrix b = testutil::random_matrix(7, 3, rng);
  CHECK(inf_diff(matmul(a, b), testutil::naive_matmul(a, b)) <= 1e-13);
  const Matrix at = transpose(a);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 7; ++j) CHECK(at(j, i) == a(i, j));
  CHECK(inf_diff(matvec_transposed(a, Vector(4, 1.0)), testutil::naive_matvec(at, Vector(4, 1.0))) <=
        1e-14);
}

TEST_CASE("property: factor reconstructs random SPD matrices") {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> size(1, 64);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(size(rng));
    const Matrix a = testutil::random_spd(n, rng, 0.1);
    const auto f = cholesky_factor(a);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(f.lower(i, i) > 0.0);
    const Matrix back = testutil::naive_matmul(f.lower, transpose(f.lower));
    REQUIRE(inf_diff(back, a) <= 1e-10 * n * testutil::max_abs(a));
  }
}

TEST_CASE("property: solve residual for well conditioned matrices") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 40;
    const Matrix a = testutil::random_spd(n, rng, 0.5);
    const Vector b = testutil::random_vector(n, rng);
    const Vector x = cholesky_solve(cholesky_factor(a), b);
    REQUIRE(inf_diff(testutil::naive_matvec(a, x), b) <= 1e-8 * norm_inf(b));
  }
}

TEST_CASE("property: Sherman-Morrison diagonal bump matches a fresh inverse") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> bump(-10.0, 10.0);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + t % 12;
    Matrix b = testutil::random_spd(n, rng, 1.0);
    Matrix m = spd_inverse(b);
    const std::size_t i = t % n;
    // keep B + Δ e_i e_iᵀ positive definite
    double delta = bump(rng);
    if (b(i, i) + delta < 0.5) delta = std::abs(delta);
    const double c = -delta / (1.0 + delta * m(i, i));
    const Vector col = m.column(i);
    rank1_symmetric_update(m, c, col);
    b(i, i) += delta;
    REQUIRE(inf_diff(m, spd_inverse(b)) <= 1e-8);
    REQUIRE(inf_diff(testutil::naive_matmul(m, b), Matrix::identity(n)) <= 1e-9);
  }
}

TEST_CASE("dimension mismatches throw") {
  CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), Error);
  CHECK_THROWS_AS(add(Matrix(2, 2), Matrix(3, 3)), Error);
  CHECK_THROWS_AS(dot(Vector{1}, Vector{1, 2}), Error);
}
