#include "certiqp/boxqp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "certiqp/error.hpp"

namespace certiqp {

double BoxQP::objective(std::span<const double> z) const {
  const Vector hz = matvec(H, z);
  return 0.5 * dot(z, hz) + dot(z, h);
}

void validate(const BoxQP& p, bool check_psd) {
  const std::size_t n = p.n();
  if (n == 0) throw Error(ErrorKind::kDimensionMismatch, "problem dimension must be at least 1");
  if (p.H.rows() != n || p.H.cols() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "H must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  for (double v : p.H.data()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidParameter, "H has a non-finite entry");
  }
  for (double v : p.h) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidParameter, "h has a non-finite entry");
  }
  const double tol = 1e-12 * p.H.max_abs();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(p.H(i, j) - p.H(j, i)) > tol) {
        throw Error(ErrorKind::kAsymmetricH, "H(" + std::to_string(i) + "," + std::to_string(j) +
                                                 ") differs from its transpose entry");
      }
    }
  }
  if (check_psd) {
    Matrix shifted = p.H;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += 1e-10;
    try {
      (void)cholesky_factor(shifted);
    } catch (const Error&) {
      throw Error(ErrorKind::kNotPsd, "H + 1e-10·I is not positive definite");
    }
  }
}

std::optional<ScaledProblem> scale(const BoxQP& p, double alpha) {
  const double hinf = norm_inf(p.h);
  if (hinf == 0.0) return std::nullopt;
  ScaledProblem sp;
  sp.n = p.n();
  sp.hinf = hinf;
  sp.lambda = alpha / std::sqrt(2.0 * static_cast<double>(sp.n));
  sp.two_lam_htilde = scaled(p.H, 2.0 * sp.lambda / hinf);
  sp.htilde = scaled(p.h, 1.0 / hinf);
  return sp;
}

Iterate initialize(const ScaledProblem& sp) {
  const std::size_t n = sp.n;
  Iterate it;
  it.z.assign(n, 0.0);
  it.gamma.resize(n);
  it.theta.resize(n);
  it.phi.assign(n, 1.0);
  it.psi.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    it.gamma[i] = 1.0 - sp.lambda * sp.htilde[i];
    it.theta[i] = 1.0 + sp.lambda * sp.htilde[i];
  }
  it.tau = 1.0;
  return it;
}

KktResiduals kkt_residuals(const Iterate& it, const ScaledProblem& sp) {
  KktResiduals r;
  const std::size_t n = it.n();
  const Vector hz = matvec(sp.two_lam_htilde, it.z);
  const double two_lam = 2.0 * sp.lambda;
  for (std::size_t i = 0; i < n; ++i) {
    const double stat = hz[i] + two_lam * sp.htilde[i] + it.gamma[i] - it.theta[i];
    r.stationarity = std::max(r.stationarity, std::abs(stat));
    r.primal_upper = std::max(r.primal_upper, std::abs(it.z[i] + it.phi[i] - 1.0));
    r.primal_lower = std::max(r.primal_lower, std::abs(it.z[i] - it.psi[i] + 1.0));
  }
  r.complementarity_gap = duality_gap(it);
  return r;
}

double duality_gap(const Iterate& it) {
  return dot(it.gamma, it.phi) + dot(it.theta, it.psi);
}

double neighborhood_norm(const Iterate& it) {
  double sq = 0.0;
  for (std::size_t i = 0; i < it.n(); ++i) {
    const double a = it.gamma[i] * it.phi[i] - it.tau;
    const double b = it.theta[i] * it.psi[i] - it.tau;
    sq += a * a + b * b;
  }
  return std::sqrt(sq) / it.tau;
}

double curvature(const Direction& d) {
  return dot(d.dgamma, d.dphi) + dot(d.dtheta, d.dpsi);
}

void apply_step(Iterate& it, const Direction& d) {
  for (std::size_t i = 0; i < it.n(); ++i) {
    it.z[i] += d.dz[i];
    it.gamma[i] += d.dgamma[i];
    it.theta[i] += d.dtheta[i];
    it.phi[i] += d.dphi[i];
    it.psi[i] += d.dpsi[i];
  }
}

Solution zero_solution(std::size_t n) {
  Solution s;
  s.z_star.assign(n, 0.0);
  return s;
}

}  // namespace certiqp
