#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "certiqp/certificate.hpp"
#include "certiqp/linalg.hpp"

namespace certiqp {

/// min ½zᵀHz + zᵀh  subject to  −e ≤ z ≤ e, with H symmetric PSD.
struct BoxQP {
  Matrix H;
  Vector h;

  std::size_t n() const noexcept { return h.size(); }
  double objective(std::span<const double> z) const;
};

/// Throws kDimensionMismatch, kAsymmetricH or (when check_psd) kNotPsd.
void validate(const BoxQP& p, bool check_psd);

/// Problem after the cost-free scaling: the objective is multiplied by
/// 2λ/‖h‖∞ with λ = α/√(2n), which leaves the minimizer unchanged.
struct ScaledProblem {
  std::size_t n = 0;
  double lambda = 0.0;
  Matrix two_lam_htilde;  // (2λ/‖h‖∞)·H
  Vector htilde;          // h/‖h‖∞
  double hinf = 0.0;
};

/// std::nullopt signals a zero linear term, for which z* = 0.
std::optional<ScaledProblem> scale(const BoxQP& p, double alpha);

/// Primal-dual point. γ, θ are the multipliers of the upper and lower bound,
/// φ = e − z and ψ = z + e the matching slacks; x = (γ, θ), s = (φ, ψ).
struct Iterate {
  Vector z, gamma, theta, phi, psi;
  double tau = 1.0;

  std::size_t n() const noexcept { return z.size(); }
};

/// Strictly feasible, well-centred start: z = 0, γ = e − λh̃, θ = e + λh̃,
/// φ = ψ = e, τ = 1.
Iterate initialize(const ScaledProblem& sp);

struct KktResiduals {
  double stationarity = 0.0;  // ‖2λH̃z + 2λh̃ + γ − θ‖∞
  double primal_upper = 0.0;  // ‖z + φ − e‖∞
  double primal_lower = 0.0;  // ‖z − ψ + e‖∞
  double complementarity_gap = 0.0;
};

KktResiduals kkt_residuals(const Iterate& it, const ScaledProblem& sp);

/// xᵀs = γᵀφ + θᵀψ.
double duality_gap(const Iterate& it);

/// ‖x∘s − τe‖₂ / τ.
double neighborhood_norm(const Iterate& it);

/// Newton direction. Δφ = −Δz and Δψ = Δz always.
struct Direction {
  Vector dz, dgamma, dtheta, dphi, dpsi;
};

/// ΔxᵀΔs = Δγᵀ Δφ + Δθᵀ Δψ.
double curvature(const Direction& d);

/// Adds the direction with unit step length.
void apply_step(Iterate& it, const Direction& d);

struct TraceRecord {
  std::size_t k = 0;
  double tau = 0.0;
  double duality_gap = 0.0;
  double neighborhood_norm = 0.0;
  std::size_t cumulative_rank1 = 0;
};

using IterationTrace = std::vector<TraceRecord>;

struct RankOneLog {
  std::vector<std::size_t> per_iteration;
  std::size_t total = 0;
};

/// Lagged coefficients of the approximated method, exposed to observers.
struct TildeView {
  std::span<const double> gamma, theta, phi, psi;
};

/// Passed to SolverOptions::observer after every iteration.
struct StepInfo {
  std::size_t k = 0;
  const Iterate* before = nullptr;
  const Direction* direction = nullptr;
  const Iterate* after = nullptr;
  double tau_before = 0.0;  // τ used to build the direction
  double tau_after = 0.0;   // τ after the decrease
  std::size_t rank1_this_iteration = 0;
  std::size_t rank1_cumulative = 0;
  std::optional<TildeView> tildes;  // approximated method only
};

/// Test hook: multiply τ by `factor` right after iteration `iteration`.
struct TauFault {
  std::size_t iteration = 0;
  double factor = 1.0;
};

struct SolverOptions {
  double alpha = kDefaultAlpha;
  double delta = kDefaultDelta;
  double epsilon = kDefaultEpsilon;
  /// Stop as soon as the gap is ≤ ε. Off by default: certified runs always
  /// perform exactly N_iter iterations.
  bool early_stop = false;
  bool record_trace = false;
  /// Extra O(n³) consistency checks in the approximated method.
  bool debug_checks = false;
  /// Re-invert M every this many iterations (0 = never).
  std::size_t reinvert_every = 0;
  std::function<void(const StepInfo&)> observer;
  std::optional<TauFault> tau_fault;
};

struct Solution {
  Vector z_star;
  double duality_gap = 0.0;
  std::size_t iterations_run = 0;
  std::size_t n_iter_certified = 0;
  std::size_t rank1_used = 0;
  std::optional<IterationTrace> trace;
  RankOneLog rank1_log;
};

/// Result of a solve when h = 0: z* = 0 with no iterations.
Solution zero_solution(std::size_t n);

}  // namespace certiqp
