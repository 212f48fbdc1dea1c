#pragma once

#include "certiqp/boxqp.hpp"

namespace certiqp {

/// Exact Newton direction: a fresh Cholesky solve of
/// (2λH̃ + diag(γ/φ) + diag(θ/ψ))·Δz = τ/ψ − τ/φ + γ − θ.
Direction exact_direction(const Iterate& it, const ScaledProblem& sp);

/// Feasible full-step IPM with exact Newton steps, O(n^3.5). Runs exactly the
/// certified iteration count unless opts.early_stop is set. opts.delta is
/// ignored.
Solution solve_exact(const BoxQP& p, const SolverOptions& opts = {});

}  // namespace certiqp
