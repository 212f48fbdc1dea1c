#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "certiqp/boxqp.hpp"
#include "certiqp/transforms.hpp"

namespace certiqp {

struct LtiModel {
  Matrix A, B, C;
  double Ts = 0.0;

  std::size_t nx() const noexcept { return A.rows(); }
  std::size_t nu() const noexcept { return B.cols(); }
  std::size_t ny() const noexcept { return C.rows(); }
};

/// exp(M) by scaling and squaring around a degree-6 Taylor polynomial.
Matrix matrix_exp(const Matrix& m);

/// Zero-order-hold pair (A, B) from the exponential of [[Ac, Bc], [0, 0]]·Ts.
std::pair<Matrix, Matrix> zoh_discretize(const Matrix& Ac, const Matrix& Bc, double Ts);

/// Spectral radius estimate via ‖A^k‖^(1/k) for a large power k.
double spectral_radius(const Matrix& a);

/// Tracking MPC over the stacked input moves ΔU = (Δu_0, …, Δu_{Np−1}):
///
///   min  ½Σ_{k=1..Np} ‖wy∘(C·x_k − r)‖² + ½Σ_{k=0..Np−1} ‖wdu∘Δu_k‖²
///   s.t. Ex·x_{k+1} + Eu·u_k + Edu·Δu_k ≤ f,   k = 0..Np−1,
///
/// with u_k = u_{−1} + Δu_0 + … + Δu_k. Every constraint row is softened
/// with its own ℓ1 penalty weight rho[i].
struct MpcConfig {
  std::size_t Np = 1;
  Vector wy;   // per output
  Vector wdu;  // per input, strictly positive
  Matrix Ex, Eu, Edu;
  Vector f;
  Vector rho;  // one per constraint row
  std::function<Vector(std::size_t)> reference;

  std::size_t rows_per_step() const noexcept { return f.size(); }
};

struct CondensedMpc {
  StrictQP qp;
  double constant = 0.0;  // cost of the unforced rollout (ΔU = 0)
};

CondensedMpc condense_mpc(const LtiModel& model, const MpcConfig& cfg, std::span<const double> x0,
                          std::span<const double> u_prev, std::span<const double> r);

struct MpcStepResult {
  Vector u;
  Vector du;  // full optimal ΔU
  std::size_t box_dimension = 0;
  Solution solve;
};

MpcStepResult mpc_step(const LtiModel& model, const MpcConfig& cfg, std::span<const double> x0,
                       std::span<const double> u_prev, std::span<const double> r,
                       const SolverOptions& opts = {}, Algorithm algorithm = Algorithm::kApprox);

struct StepStats {
  std::size_t box_dimension = 0;
  std::size_t iterations = 0;
  std::size_t n_iter_certified = 0;
  std::size_t rank1 = 0;
  double duality_gap = 0.0;
};

struct ClosedLoopRecord {
  std::vector<Vector> states;   // x(0) … x(steps)
  std::vector<Vector> outputs;  // y(t) = C·x(t), t = 0 … steps − 1
  std::vector<Vector> inputs;   // u(t)
  std::vector<Vector> references;
  std::vector<StepStats> stats;
};

ClosedLoopRecord simulate_closed_loop(const LtiModel& model, const MpcConfig& cfg,
                                      std::span<const double> x0, std::size_t steps,
                                      const SolverOptions& opts = {},
                                      Algorithm algorithm = Algorithm::kApprox);

struct Afti16Setup {
  LtiModel model;
  MpcConfig config;
  Vector x0;
};

/// Open-loop unstable AFTI-16 pitch dynamics at Ts = 0.05 s, Np = 5,
/// wy = (10, 10), wdu = (0.1, 0.1), |u_i| ≤ 25 (ρ = 1e4), |y1| ≤ 0.5 and
/// |y2| ≤ 100 (ρ = 1e3), reference (0, 10), x0 = (0, 5, 0, 0).
Afti16Setup afti16_setup();

}  // namespace certiqp
