#include "certiqp/approx_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "certiqp/error.hpp"
#include "solver_loop.hpp"

namespace certiqp {

namespace {

Matrix system_matrix(const ScaledProblem& sp, std::span<const double> d) {
  Matrix b = sp.two_lam_htilde;
  for (std::size_t i = 0; i < sp.n; ++i) b(i, i) += d[i];
  return b;
}

// Column i of the symmetric matrix whose lower triangle is stored in m.
void lower_column(const Matrix& m, std::size_t i, std::span<double> out) {
  const std::size_t n = m.rows();
  for (std::size_t j = 0; j <= i; ++j) out[j] = m(i, j);
  for (std::size_t j = i + 1; j < n; ++j) out[j] = m(j, i);
}

bool outside_band(double lagged, double current, double upper) {
  const double ratio = lagged / current;
  return ratio < 1.0 / upper || ratio > upper;
}

void check_inverse(const ApproxState& st, const ScaledProblem& sp, std::size_t k) {
  const Matrix prod = matmul(st.full_inverse(), system_matrix(sp, st.d));
  const double err = max_abs_diff(prod, Matrix::identity(sp.n));
  if (err > 1e-6) {
    throw Error(ErrorKind::kSingularUpdate, "maintained inverse drifted: ‖M·B − I‖∞ = " +
                                                std::to_string(err) + " at iteration " +
                                                std::to_string(k));
  }
}

void check_d(const ApproxState& st, std::size_t k) {
  for (std::size_t i = 0; i < st.d.size(); ++i) {
    const double fresh = st.gamma_t[i] / st.phi_t[i] + st.theta_t[i] / st.psi_t[i];
    if (std::abs(fresh - st.d[i]) > 1e-12 * std::max(1.0, std::abs(fresh))) {
      throw Error(ErrorKind::kSingularUpdate, "incremental d disagrees with tildes at index " +
                                                  std::to_string(i) + ", iteration " +
                                                  std::to_string(k));
    }
  }
}

}  // namespace

Matrix ApproxState::full_inverse() const {
  Matrix full = m;
  mirror_lower(full);
  return full;
}

std::vector<std::size_t> IndexSets::merged() const {
  std::vector<std::size_t> all;
  all.reserve(i_gamma.size() + i_theta.size() + i_phi.size() + i_psi.size());
  for (const auto* set : {&i_gamma, &i_theta, &i_phi, &i_psi}) {
    all.insert(all.end(), set->begin(), set->end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

ApproxState init_state(const Iterate& it, const ScaledProblem& sp) {
  ApproxState st;
  st.gamma_t = it.gamma;
  st.theta_t = it.theta;
  st.phi_t = it.phi;
  st.psi_t = it.psi;
  st.d.resize(it.n());
  for (std::size_t i = 0; i < it.n(); ++i) {
    st.d[i] = st.gamma_t[i] / st.phi_t[i] + st.theta_t[i] / st.psi_t[i];
  }
  st.m = spd_inverse(system_matrix(sp, st.d));
  return st;
}

IndexSets refresh_tildes(ApproxState& st, const Iterate& it, double delta) {
  const double upper = 1.0 + delta;
  IndexSets sets;
  for (std::size_t i = 0; i < it.n(); ++i) {
    if (outside_band(st.gamma_t[i], it.gamma[i], upper)) {
      st.gamma_t[i] = it.gamma[i];
      sets.i_gamma.push_back(i);
    }
    if (outside_band(st.theta_t[i], it.theta[i], upper)) {
      st.theta_t[i] = it.theta[i];
      sets.i_theta.push_back(i);
    }
    // The published procedure assigns γ̃ here; the update rule it implements
    // resets φ̃, which is what is done.
    if (outside_band(st.phi_t[i], it.phi[i], upper)) {
      st.phi_t[i] = it.phi[i];
      sets.i_phi.push_back(i);
    }
    if (outside_band(st.psi_t[i], it.psi[i], upper)) {
      st.psi_t[i] = it.psi[i];
      sets.i_psi.push_back(i);
    }
  }
  return sets;
}

std::size_t apply_rank1(ApproxState& st, const IndexSets& sets) {
  if (sets.empty()) return 0;
  const std::vector<std::size_t> indices = sets.merged();
  Vector col(st.d.size());
  for (std::size_t i : indices) {
    const double target = st.gamma_t[i] / st.phi_t[i] + st.theta_t[i] / st.psi_t[i];
    const double bump = target - st.d[i];
    const double denom = 1.0 + bump * st.m(i, i);
    if (!(denom > 1e-14)) {
      throw Error(ErrorKind::kSingularUpdate,
                  "1 + Δ·M_ii = " + std::to_string(denom) + " at index " + std::to_string(i));
    }
    lower_column(st.m, i, col);
    rank1_update_lower(st.m, -bump / denom, col);
    st.d[i] = target;
  }
  return indices.size();
}

Direction approx_direction(const ApproxState& st, const Iterate& it) {
  const std::size_t n = it.n();
  const double tau = it.tau;
  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = tau / st.psi_t[i] - tau / st.phi_t[i] + it.gamma[i] * it.phi[i] / st.phi_t[i] -
             it.theta[i] * it.psi[i] / st.psi_t[i];
  }
  Direction d;
  d.dz.resize(n);
  symv_lower(st.m, rhs, d.dz);
  d.dgamma.resize(n);
  d.dtheta.resize(n);
  d.dphi.resize(n);
  d.dpsi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.dgamma[i] = st.gamma_t[i] / st.phi_t[i] * d.dz[i] + tau / st.phi_t[i] -
                  it.gamma[i] * it.phi[i] / st.phi_t[i];
    d.dtheta[i] = -st.theta_t[i] / st.psi_t[i] * d.dz[i] + tau / st.psi_t[i] -
                  it.theta[i] * it.psi[i] / st.psi_t[i];
    d.dphi[i] = -d.dz[i];
    d.dpsi[i] = d.dz[i];
  }
  return d;
}

Solution solve_approx(const BoxQP& p, const SolverOptions& opts) {
  validate(p, false);
  const Alg2Constants c = alg2_constants(p.n(), opts.alpha, opts.delta);
  const auto sp = scale(p, opts.alpha);
  if (!sp) return zero_solution(p.n());

  const std::size_t n_iter = iteration_count(p.n(), opts.epsilon, c);
  detail::LoopBookkeeper book(opts, p.n(), c.beta, n_iter);
  Iterate it = initialize(*sp);
  ApproxState st = init_state(it, *sp);
  if (opts.debug_checks) check_inverse(st, *sp, 0);

  for (std::size_t k = 1; k <= n_iter; ++k) {
    const IndexSets sets = refresh_tildes(st, it, opts.delta);
    const std::size_t updates = apply_rank1(st, sets);
    if (opts.reinvert_every != 0 && k % opts.reinvert_every == 0) {
      st.m = spd_inverse(system_matrix(*sp, st.d));
    }
    if (opts.debug_checks) {
      check_d(st, k);
      check_inverse(st, *sp, k);
    }
    const Iterate before = it;
    const Direction d = approx_direction(st, it);
    apply_step(it, d);
    it.tau *= book.shrink();
    const TildeView tildes{st.gamma_t, st.theta_t, st.phi_t, st.psi_t};
    if (book.record(k, before, d, it, before.tau, updates, tildes)) break;
  }
  return book.finish(it);
}

}  // namespace certiqp
