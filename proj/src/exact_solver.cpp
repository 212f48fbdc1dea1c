#include "certiqp/exact_solver.hpp"

#include "certiqp/error.hpp"
#include "solver_loop.hpp"

namespace certiqp {

Direction exact_direction(const Iterate& it, const ScaledProblem& sp) {
  const std::size_t n = it.n();
  Matrix lhs = sp.two_lam_htilde;
  Direction d;
  d.dz.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    lhs(i, i) += it.gamma[i] / it.phi[i] + it.theta[i] / it.psi[i];
    d.dz[i] = it.tau / it.psi[i] - it.tau / it.phi[i] + it.gamma[i] - it.theta[i];
  }
  const CholeskyFactor f = cholesky_factor(lhs);
  cholesky_solve_in_place(f, d.dz);

  d.dgamma.resize(n);
  d.dtheta.resize(n);
  d.dphi.resize(n);
  d.dpsi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.dgamma[i] = it.gamma[i] / it.phi[i] * d.dz[i] + it.tau / it.phi[i] - it.gamma[i];
    d.dtheta[i] = -it.theta[i] / it.psi[i] * d.dz[i] + it.tau / it.psi[i] - it.theta[i];
    d.dphi[i] = -d.dz[i];
    d.dpsi[i] = d.dz[i];
  }
  return d;
}

Solution solve_exact(const BoxQP& p, const SolverOptions& opts) {
  validate(p, false);
  const Alg1Constants c = alg1_constants(p.n(), opts.alpha);
  const auto sp = scale(p, opts.alpha);
  if (!sp) return zero_solution(p.n());

  const std::size_t n_iter = iteration_count(p.n(), opts.epsilon, c);
  detail::LoopBookkeeper book(opts, p.n(), c.beta, n_iter);
  Iterate it = initialize(*sp);
  for (std::size_t k = 1; k <= n_iter; ++k) {
    const Iterate before = it;
    const Direction d = exact_direction(it, *sp);
    apply_step(it, d);
    it.tau *= book.shrink();
    if (book.record(k, before, d, it, before.tau, 0, std::nullopt)) break;
  }
  return book.finish(it);
}

}  // namespace certiqp
