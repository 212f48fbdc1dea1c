#pragma once

#include <cstddef>
#include <vector>

#include "certiqp/boxqp.hpp"

namespace certiqp {

/// Bookkeeping of the approximated Newton step.
///
/// The lagged ("tilde") copies of γ, θ, φ, ψ stay within a multiplicative
/// band [1/(1+δ), 1+δ] of the current values. The system matrix
/// B = 2λH̃ + diag(d), d = γ̃/φ̃ + θ̃/ψ̃, therefore only changes through
/// diagonal bumps, and its inverse M is maintained by Sherman–Morrison
/// rank-1 corrections instead of refactorizing.
///
/// Only the lower triangle of `m` is kept current; use full_inverse() to get
/// a dense symmetric copy.
struct ApproxState {
  Vector gamma_t, theta_t, phi_t, psi_t;
  Vector d;
  Matrix m;

  Matrix full_inverse() const;
};

/// Indices whose lagged value was refreshed this iteration, one set per family.
struct IndexSets {
  std::vector<std::size_t> i_gamma, i_theta, i_phi, i_psi;

  /// Sorted union without duplicates.
  std::vector<std::size_t> merged() const;
  bool empty() const noexcept {
    return i_gamma.empty() && i_theta.empty() && i_phi.empty() && i_psi.empty();
  }
};

/// Copies the iterate into the tildes and inverts B once.
ApproxState init_state(const Iterate& it, const ScaledProblem& sp);

/// Re-syncs every tilde whose ratio to the current value left the band.
IndexSets refresh_tildes(ApproxState& st, const Iterate& it, double delta);

/// One Sherman–Morrison update of M per unique index in the union of the
/// sets, in ascending order. Returns the number of updates performed.
/// Throws kSingularUpdate when 1 + Δ·M_ii ≤ 1e-14.
std::size_t apply_rank1(ApproxState& st, const IndexSets& sets);

/// Δz = M·(τ/ψ̃ − τ/φ̃ + γ∘φ/φ̃ − θ∘ψ/ψ̃), the rest by back-substitution.
Direction approx_direction(const ApproxState& st, const Iterate& it);

/// O(n³) feasible IPM: exact certified iteration count, at most the
/// certified number of rank-1 updates.
Solution solve_approx(const BoxQP& p, const SolverOptions& opts = {});

}  // namespace certiqp
