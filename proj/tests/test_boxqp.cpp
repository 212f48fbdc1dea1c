#include <doctest.h>

#include <cmath>

#include "certiqp/boxqp.hpp"
#include "certiqp/error.hpp"
#include "certiqp/harness.hpp"
#include "test_util.hpp"

using namespace certiqp;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kParse;
}

}  // namespace

TEST_CASE("validate") {
  BoxQP p{Matrix::identity(2), {1, 2}};
  CHECK_NOTHROW(validate(p, true));

  BoxQP asym{Matrix{{1, 0.5}, {0.4, 1}}, {1, 1}};
  CHECK(kind_of([&] { validate(asym, false); }) == ErrorKind::kAsymmetricH);

  BoxQP neg{scaled(Matrix::identity(2), -1.0), {1, 1}};
  CHECK(kind_of([&] { validate(neg, true); }) == ErrorKind::kNotPsd);
  CHECK_NOTHROW(validate(neg, false));

  BoxQP bad{Matrix::identity(3), {1, 1}};
  CHECK(kind_of([&] { validate(bad, false); }) == ErrorKind::kDimensionMismatch);
}

TEST_CASE("PSD but singular H passes the shifted check") {
  BoxQP p{Matrix{{1, 1}, {1, 1}}, {1, 0}};
  CHECK_NOTHROW(validate(p, true));
  BoxQP zero{Matrix(3, 3), {1, 0, 0}};
  CHECK_NOTHROW(validate(zero, true));
}

TEST_CASE("scale") {
  BoxQP zero_h{Matrix::identity(2), {0, 0}};
  CHECK_FALSE(scale(zero_h, 0.3).has_value());

  BoxQP p{Matrix{{0}}, {5}};
  const auto sp = scale(p, 0.3);
  REQUIRE(sp);
  CHECK(sp->lambda == doctest::Approx(0.3 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sp->lambda == doctest::Approx(0.21213).epsilon(1e-5));
  CHECK(sp->htilde[0] == 1.0);
  CHECK(sp->hinf == 5.0);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const BoxQP q = random_boxqp(1 + t, 100 + t);
    const auto s = scale(q, 0.3);
    REQUIRE(s);
    CHECK(norm_inf(s->htilde) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s->lambda > 0.0);
    CHECK(s->lambda <= 0.3);
    const double f = 2.0 * s->lambda / s->hinf;
    CHECK(testutil::inf_diff(s->two_lam_htilde, scaled(q.H, f)) <= 1e-15 * testutil::max_abs(q.H));
  }
}

TEST_CASE("initialize") {
  BoxQP p{Matrix{{0}}, {5}};
  const auto sp = scale(p, 0.3);
  const Iterate it = initialize(*sp);
  CHECK(it.z == Vector{0.0});
  CHECK(it.gamma[0] == doctest::Approx(1.0 - 0.3 / std::sqrt(2.0)));
  CHECK(it.gamma[0] == doctest::Approx(0.78787).epsilon(1e-5));
  CHECK(it.theta[0] == doctest::Approx(1.21213).epsilon(1e-5));
  CHECK(it.phi == Vector{1.0});
  CHECK(it.psi == Vector{1.0});
  CHECK(it.tau == 1.0);
  CHECK(duality_gap(it) == doctest::Approx(2.0));
}

TEST_CASE("property: starting point lies in the neighborhood") {
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 30;
    const BoxQP p = random_boxqp(n, 500 + t, t % 3 == 0 ? 0.5 : 1.0);
    const auto sp = scale(p, 0.3);
    REQUIRE(sp);
    const Iterate it = initialize(*sp);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(it.gamma[i] > 0.0);
      REQUIRE(it.theta[i] > 0.0);
    }
    CHECK(it.z == Vector(n, 0.0));
    CHECK(neighborhood_norm(it) <= 0.3 + 1e-15);
    // ‖x∘s − e‖ = √2·λ‖h̃‖
    CHECK(neighborhood_norm(it) == doctest::Approx(std::sqrt(2.0) * sp->lambda * norm2(sp->htilde)));
  }
}

TEST_CASE("kkt residuals") {
  const BoxQP p = random_boxqp(6, 77);
  const auto sp = scale(p, 0.3);
  Iterate it = initialize(*sp);
  auto r = kkt_residuals(it, *sp);
  CHECK(r.primal_upper == 0.0);
  CHECK(r.primal_lower == 0.0);
  CHECK(r.stationarity <= 1e-15);
  CHECK(r.complementarity_gap == doctest::Approx(12.0));

  it.z[2] += 0.125;
  r = kkt_residuals(it, *sp);
  CHECK(r.primal_upper == doctest::Approx(0.125));
  CHECK(r.primal_lower == doctest::Approx(0.125));
}

TEST_CASE("duality gap") {
  Iterate it;
  it.z = {0, 0};
  it.gamma = it.theta = it.phi = it.psi = {1, 1};
  CHECK(duality_gap(it) == 4.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int t = 0; t < 50; ++t) {
    for (Vector* v : {&it.gamma, &it.theta, &it.phi, &it.psi})
      for (double& x : *v) x = u(rng);
    CHECK(duality_gap(it) >= 0.0);
  }
}

TEST_CASE("curvature and step") {
  Direction d{{1, -1}, {1, 2}, {3, 4}, {-1, 1}, {1, -1}};
  CHECK(curvature(d) == doctest::Approx(1 * -1 + 2 * 1 + 3 * 1 + 4 * -1));
  Iterate it;
  it.z = {0, 0};
  it.gamma = it.theta = it.phi = it.psi = {1, 1};
  apply_step(it, d);
  CHECK(it.z == Vector{1, -1});
  CHECK(it.phi == Vector{0, 2});
}

TEST_CASE("objective") {
  BoxQP p{Matrix{{2, 0}, {0, 4}}, {1, -1}};
  CHECK(p.objective(Vector{1, 1}) == doctest::Approx(0.5 * (2 + 4) + 0));
}
