#include <doctest.h>

#include <chrono>
#include <cmath>

#include "certiqp/certificate.hpp"
#include "certiqp/error.hpp"
#include "test_util.hpp"

using namespace certiqp;

TEST_CASE("exact-method constants at alpha 0.3") {
  const auto c = alg1_constants(40, 0.3);
  CHECK(std::abs(c.mu - 0.4286) <= 5e-5);
  CHECK(std::abs(c.sigma - 0.0643) <= 5e-5);
  CHECK(c.beta > 0.0);
}

TEST_CASE("exact-method constants vanish as alpha goes to zero") {
  const auto c = alg1_constants(10, 1e-9);
  CHECK(c.sigma < 1e-17);
  CHECK(c.mu < 2e-9);
}

TEST_CASE("beta identity") {
  const auto c = alg1_constants(50, 0.3);
  CHECK(std::abs(c.beta * (1.0 + 0.3 / std::sqrt(100.0)) + c.sigma - 0.3) <= 1e-14);
}

TEST_CASE("exact-method alpha outside (0, 0.5) is rejected") {
  for (double a : {0.0, 0.5, 0.7, -0.1}) {
    try {
      alg1_constants(10, a);
      FAIL("expected InvalidParameter");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInvalidParameter);
    }
  }
}

TEST_CASE("approximated-method constants at alpha 0.3, delta 0.15") {
  const auto c = alg2_constants(40, 0.3, 0.15);
  CHECK(std::abs(c.mu - 0.6518) <= 5e-5);
  CHECK(std::abs(c.sigma - 0.1997) <= 5e-5);
  CHECK(c.eta == c.mu);
  const auto l = testutil::long_alg2(40, 0.3L, 0.15L);
  CHECK(std::abs(c.sigma - (double)l.sigma) <= 1e-15);
  CHECK(std::abs(c.beta - (double)l.beta) <= 1e-15);
  CHECK(std::abs(c.mu - (double)l.mu) <= 1e-15);
}

TEST_CASE("delta 0 reduces to the exact-method constants") {
  for (std::size_t n : {1u, 7u, 100u}) {
    const auto a = alg1_constants(n, 0.3);
    const auto b = alg2_constants(n, 0.3, 0.0);
    CHECK(std::abs(a.mu - b.mu) <= 1e-15);
    CHECK(std::abs(a.sigma - b.sigma) <= 1e-15);
    CHECK(std::abs(a.beta - b.beta) <= 1e-15);
  }
}

TEST_CASE("inadmissible (alpha, delta) is rejected") {
  try {
    alg2_constants(10, 0.45, 0.5);
    FAIL("expected InvalidParameter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidParameter);
  }
}

TEST_CASE("iteration count n=40 eps=1e-6") {
  const auto c = alg2_constants(40, 0.3, 0.15);
  CHECK(iteration_count(40, 1e-6, c) == 1672);
}

TEST_CASE("iteration count agrees with a long double evaluation") {
  for (std::size_t n : {1u, 3u, 10u, 40u, 100u, 200u, 500u, 1000u}) {
    for (double eps : {1e-4, 1e-6, 1e-8, 1e-10}) {
      const auto c = alg2_constants(n, 0.3, 0.15);
      const auto l = testutil::long_alg2(n, 0.3L, 0.15L);
      CHECK(iteration_count(n, eps, c) == testutil::long_iter(n, eps, 0.3L, l.beta));
      const auto c1 = alg1_constants(n, 0.3);
      const auto l1 = testutil::long_alg2(n, 0.3L, 0.0L);
      CHECK(iteration_count(n, eps, c1) == testutil::long_iter(n, eps, 0.3L, l1.beta));
    }
  }
}

TEST_CASE("certificate values from a 50-digit evaluation") {
  // mpmath, 50 significant digits: n=100 gives 2745.9955..., n=3 gives 423.1506...
  const auto c100 = alg2_constants(100, 0.3, 0.15);
  CHECK(iteration_count(100, 1e-6, c100) == 2746);
  CHECK(rank1_count_bound(100, 2746, c100) == 1470639);
  const auto c40 = alg2_constants(40, 0.3, 0.15);
  CHECK(rank1_count_bound(40, 1672, c40) == 566201);
  const auto c3 = alg2_constants(3, 0.3, 0.15);
  CHECK(iteration_count(3, 1e-6, c3) == 424);
  CHECK(rank1_count_bound(3, 424, c3) == 39253);
}

TEST_CASE("iteration count is monotone in n and in 1/eps") {
  const auto a = alg2_constants(100, 0.3, 0.15);
  const auto b = alg2_constants(200, 0.3, 0.15);
  CHECK(iteration_count(200, 1e-6, b) > iteration_count(100, 1e-6, a));
  CHECK(iteration_count(100, 1e-8, a) > iteration_count(100, 1e-6, a));
  CHECK_THROWS_AS(iteration_count(100, 0.0, a), Error);
}

TEST_CASE("rank-1 bound") {
  const auto c = alg2_constants(40, 0.3, 0.15);
  CHECK(rank1_count_bound(40, 1, c) == 0);
  const auto l = testutil::long_alg2(40, 0.3L, 0.15L);
  CHECK(rank1_count_bound(40, 1672, c) == testutil::long_rank1(40, 1672, l.mu, 0.15L));
  std::uint64_t prev = 0;
  for (std::uint64_t k = 1; k < 3000; k += 97) {
    const auto v = rank1_count_bound(40, k, c);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("certify") {
  const auto t0 = std::chrono::steady_clock::now();
  const Certificate c = certify(40, 1e-6, Algorithm::kApprox, 0.3, 0.15);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  CHECK(ms < 1.0);
  CHECK(c.n_iter == 1672);
  CHECK(c.n_rank1_bound == 566201);
  CHECK(std::holds_alternative<Alg2Constants>(c.constants));
  const double n = 40;
  CHECK(c.flop_estimate == doctest::Approx(n * n * n + 2 * n * n * 566201.0 + 8 * n * n * 1672.0));

  const Certificate three = certify(3, 1e-6, Algorithm::kApprox);
  const auto l = testutil::long_alg2(3, 0.3L, 0.15L);
  CHECK(three.n_iter == testutil::long_iter(3, 1e-6L, 0.3L, l.beta));

  const Certificate one = certify(1, 1e-6, Algorithm::kExact, 0.3);
  CHECK(one.n_iter >= 1);
  CHECK(one.n_rank1_bound == 0);
  CHECK(std::holds_alternative<Alg1Constants>(one.constants));
  CHECK(one.flop_estimate == doctest::Approx(one.n_iter * (1.0 / 3.0 + 9.0)));
}

TEST_CASE("property: certify is pure") {
  for (std::size_t n = 1; n < 300; n += 13) {
    const auto a = certify(n, 1e-7, Algorithm::kApprox);
    const auto b = certify(n, 1e-7, Algorithm::kApprox);
    CHECK(a.n_iter == b.n_iter);
    CHECK(a.n_rank1_bound == b.n_rank1_bound);
    CHECK(a.flop_estimate == b.flop_estimate);
  }
}

TEST_CASE("property: defaults are admissible for every n") {
  for (std::size_t n = 1; n <= 5000; n = n < 20 ? n + 1 : n * 2) {
    const auto c = alg2_constants(n, kDefaultAlpha, kDefaultDelta);
    CHECK(c.sigma < c.alpha);
    CHECK(c.beta > 0.0);
    CHECK(c.sigma <= 3 * c.alpha);
    CHECK(c.mu < 1.0);
  }
}
