#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "certiqp/boxqp.hpp"
#include "certiqp/mpc.hpp"

namespace certiqp {

struct RkfConfig {
  Matrix Qn;  // process noise covariance
  Matrix Rn;  // measurement noise covariance
  double rho = 1.0;
  SolverOptions solver;
  Algorithm algorithm = Algorithm::kApprox;
};

struct KfState {
  Vector xhat;
  Matrix P;
};

/// x̂ ← A x̂ + B u,  P ← A P Aᵀ + Qn.
KfState kf_predict(const KfState& st, const LtiModel& model, std::span<const double> u,
                   const RkfConfig& cfg);

/// Standard measurement update.
KfState kf_update(const KfState& st, std::span<const double> y, const LtiModel& model,
                  const RkfConfig& cfg);

struct RkfUpdate {
  KfState state;
  Vector outlier;  // ẑ
  Solution solve;
  std::size_t box_dimension = 0;
};

/// Update with a sparse outlier estimate ẑ from
///   min (e − ẑ)ᵀ W (e − ẑ) + ρ‖ẑ‖₁,  W = (I − CL)ᵀR⁻¹(I − CL) + LᵀP⁻¹L,
/// solved as a Lasso with A = Lwᵀ (W = Lw·Lwᵀ), b = A·e, weight ρ/2.
RkfUpdate rkf_update(const KfState& st, std::span<const double> y, const LtiModel& model,
                     const RkfConfig& cfg);

/// Weight matrix W of the outlier subproblem for the predicted state.
Matrix rkf_weight(const KfState& st, const LtiModel& model, const RkfConfig& cfg);

struct ThreeTankSetup {
  LtiModel model;
  RkfConfig config;
  Vector x0;
  Matrix P0;
};

/// Three-tank benchmark with default noise Qn = Rn = 1e-2·I.
ThreeTankSetup three_tank_setup();

/// √(mean over time of the squared error), one entry per state.
Vector rms_error(const std::vector<Vector>& truth, const std::vector<Vector>& estimates);

struct OutlierSpec {
  double probability = 0.05;
  double magnitude = 10.0;  // in measurement standard deviations
};

struct RkfRun {
  std::vector<Vector> truth, kf, rkf, measurements, inputs;
  std::vector<std::size_t> iterations, rank1;
  std::vector<double> gaps;
  Vector rms_kf, rms_rkf;
};

/// Simulates the plant with Gaussian process and measurement noise plus
/// sparse outliers of random sign, and filters the same measurements with
/// both the standard and the robust filter. Input u(t) = sin(0.1·t).
RkfRun simulate_rkf(const ThreeTankSetup& setup, std::size_t steps, std::uint64_t seed,
                    const OutlierSpec& outliers = {});

}  // namespace certiqp
