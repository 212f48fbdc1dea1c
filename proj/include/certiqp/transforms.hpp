#pragma once

#include <cstddef>
#include <span>

#include "certiqp/boxqp.hpp"
#include "certiqp/linalg.hpp"

namespace certiqp {

/// min ½yᵀQy + qᵀy  s.t.  Gy ≤ g, softened by ‖ρ∘max(0, Gy − g)‖₁.
struct StrictQP {
  Matrix Q;
  Vector q;
  Matrix G;
  Vector g;
  Vector rho;

  /// Objective of the ℓ1-penalised problem.
  double penalized_objective(std::span<const double> y) const;
};

/// min ½‖Ax − b‖² + weight·‖x‖₁ with AᵀA nonsingular.
struct LassoProblem {
  Matrix A;
  Vector b;
  double weight = 0.0;

  double objective(std::span<const double> x) const;
};

/// Soft-margin SVM given through the Gram matrix of bias-augmented features.
struct SvmProblem {
  Vector labels;  // ±1
  Matrix gram;
  double rho = 1.0;
};

struct L1Recovery {
  CholeskyFactor q_factor;
  Matrix G;
  Vector q;
  Vector rho;
};

struct LassoRecovery {
  CholeskyFactor ata_factor;
  Vector atb;
  double weight = 0.0;
};

struct SvmRecovery {
  Vector labels;
  double rho = 0.0;
};

struct GenBoxRecovery {
  Vector half_width;  // (u − l)/2
  Vector center;      // (u + l)/2
};

/// A canonical Box-QP together with what is needed to map its solution back.
template <class R>
struct Reduction {
  BoxQP problem;
  R recovery;
};

/// H = diag(ρ)GQ⁻¹Gᵀdiag(ρ), h = diag(ρ)(GQ⁻¹Gᵀρ + 2(GQ⁻¹q + g)).
Reduction<L1Recovery> l1_penalty_to_boxqp(const StrictQP& p);

/// y* = −Q⁻¹(q + ½Gᵀ(ρ∘z* + ρ)).
Vector recover_l1(std::span<const double> z_star, const L1Recovery& r);

/// Dual of the Lasso scaled to the unit box: H = w·(AᵀA)⁻¹, h = −(AᵀA)⁻¹Aᵀb.
/// Throws kRankDeficient when AᵀA is not positive definite.
Reduction<LassoRecovery> lasso_to_boxqp(const LassoProblem& p);

/// x* = (AᵀA)⁻¹(Aᵀb − w·z*).
Vector recover_lasso(std::span<const double> z_star, const LassoRecovery& r);

/// Dual SVM over [0, ρ] mapped to [−e, e] through z = (ρ/2)(z' + e).
Reduction<SvmRecovery> svm_to_boxqp(const SvmProblem& p);

/// Dual multipliers in [0, ρ].
Vector recover_svm_duals(std::span<const double> z_star, const SvmRecovery& r);

/// General box l ≤ y ≤ u to the unit box via y = D·z + c.
Reduction<GenBoxRecovery> genbox_to_unitbox(const Matrix& H, std::span<const double> h,
                                            std::span<const double> l,
                                            std::span<const double> u);

Vector recover_genbox(std::span<const double> z_star, const GenBoxRecovery& r);

enum class KernelKind { kLinear, kRbf };

struct Kernel {
  KernelKind kind = KernelKind::kLinear;
  double sigma = 1.0;  // RBF width: exp(−‖a − b‖² / (2σ²))

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

/// Gram matrix of bias-augmented features: K(x_i, x_j) + 1. Rows of X are
/// instances.
Matrix augmented_gram(const Matrix& X, const Kernel& k);

/// Trained classifier y(x) = Σ z_i y_i (K(x, x_i) + 1).
struct SvmModel {
  Matrix X;
  Vector coeffs;  // z_i · y_i
  Kernel kernel;

  double decision(std::span<const double> x) const;
  int classify(std::span<const double> x) const { return decision(x) >= 0.0 ? 1 : -1; }
};

SvmModel make_svm_model(const Matrix& X, std::span<const double> labels,
                        std::span<const double> duals, const Kernel& k);

/// w* = Σ z_i y_i col(x_i, 1) for the linear kernel; last entry is the bias.
Vector linear_svm_weights(const SvmModel& m);

}  // namespace certiqp
