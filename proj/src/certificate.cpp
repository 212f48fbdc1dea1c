#include "certiqp/certificate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "certiqp/error.hpp"

namespace certiqp {

namespace {

void check_dimension(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidParameter, "dimension must be at least 1");
}

// Values like 1671.9999999999998 that should be an exact integer are pulled
// down by one ulp before rounding up.
std::uint64_t guarded_ceil(double x) {
  const double nudged = std::nextafter(x, -std::numeric_limits<double>::infinity());
  return static_cast<std::uint64_t>(std::ceil(nudged));
}

double beta_for(std::size_t n, double alpha, double sigma) {
  return (alpha - sigma) / (1.0 + alpha / std::sqrt(2.0 * static_cast<double>(n)));
}

std::uint64_t count_iterations(std::size_t n, double epsilon, double alpha, double beta) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kInvalidParameter, "epsilon must be positive");
  const double root = std::sqrt(2.0 * static_cast<double>(n));
  const double numerator = std::log((2.0 * static_cast<double>(n) + alpha * root) / epsilon);
  const double denominator = -std::log1p(-beta / root);
  const std::uint64_t k = guarded_ceil(numerator / denominator);
  return k == 0 ? 1 : k;
}

}  // namespace

std::string_view to_string(Algorithm a) { return a == Algorithm::kExact ? "exact" : "approx"; }

Alg1Constants alg1_constants(std::size_t n, double alpha) {
  check_dimension(n);
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorKind::kInvalidParameter,
                "alpha must lie in (0, 0.5), got " + std::to_string(alpha));
  }
  Alg1Constants c;
  c.alpha = alpha;
  c.n = n;
  c.sigma = alpha * alpha / (2.0 * (1.0 - alpha));
  c.beta = beta_for(n, alpha, c.sigma);
  c.mu = alpha / (1.0 - alpha);
  return c;
}

Alg2Constants alg2_constants(std::size_t n, double alpha, double delta) {
  check_dimension(n);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter,
                "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (!(delta >= 0.0)) {
    throw Error(ErrorKind::kInvalidParameter,
                "delta must be non-negative, got " + std::to_string(delta));
  }
  const double grow = (1.0 + delta) * (1.0 + delta);
  Alg2Constants c;
  c.alpha = alpha;
  c.delta = delta;
  c.n = n;
  c.sigma = std::sqrt(2.0) * delta * grow * alpha * std::sqrt((1.0 + alpha) / (1.0 - alpha)) +
            grow * alpha * alpha / (2.0 * (1.0 - alpha));
  c.beta = beta_for(n, alpha, c.sigma);
  c.mu = grow * (1.0 + delta) * alpha / (1.0 - alpha);
  c.eta = c.mu;
  if (!(c.mu < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter,
                "(alpha, delta) inadmissible: mu = " + std::to_string(c.mu) + " >= 1");
  }
  if (!(c.beta > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter,
                "(alpha, delta) inadmissible: beta = " + std::to_string(c.beta) + " <= 0");
  }
  return c;
}

std::uint64_t iteration_count(std::size_t n, double epsilon, const Alg1Constants& c) {
  check_dimension(n);
  return count_iterations(n, epsilon, c.alpha, c.beta);
}

std::uint64_t iteration_count(std::size_t n, double epsilon, const Alg2Constants& c) {
  check_dimension(n);
  return count_iterations(n, epsilon, c.alpha, c.beta);
}

std::uint64_t rank1_count_bound(std::size_t n, std::uint64_t n_iter, const Alg2Constants& c) {
  if (n_iter == 0) throw Error(ErrorKind::kInvalidParameter, "n_iter must be at least 1");
  if (n_iter == 1) return 0;
  if (!(c.delta > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "rank-1 bound needs delta > 0");
  }
  const double bound = 4.0 * c.eta * static_cast<double>(n_iter - 1) *
                       std::sqrt(static_cast<double>(n)) /
                       ((1.0 - c.eta) * std::log1p(c.delta));
  return guarded_ceil(bound);
}

Certificate certify(std::size_t n, double epsilon, Algorithm algorithm, double alpha,
                    double delta) {
  Certificate cert;
  cert.n = n;
  cert.epsilon = epsilon;
  cert.algorithm = algorithm;
  const double dn = static_cast<double>(n);
  if (algorithm == Algorithm::kExact) {
    const Alg1Constants c = alg1_constants(n, alpha);
    cert.n_iter = iteration_count(n, epsilon, c);
    cert.n_rank1_bound = 0;
    cert.constants = c;
    cert.flop_estimate = static_cast<double>(cert.n_iter) * (dn * dn * dn / 3.0 + 9.0 * dn * dn);
  } else {
    const Alg2Constants c = alg2_constants(n, alpha, delta);
    cert.n_iter = iteration_count(n, epsilon, c);
    cert.n_rank1_bound = rank1_count_bound(n, cert.n_iter, c);
    cert.constants = c;
    cert.flop_estimate = dn * dn * dn + 2.0 * dn * dn * static_cast<double>(cert.n_rank1_bound) +
                         8.0 * dn * dn * static_cast<double>(cert.n_iter);
  }
  return cert;
}

}  // namespace certiqp
