#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>

namespace certiqp {

enum class Algorithm { kExact, kApprox };

std::string_view to_string(Algorithm a);

inline constexpr double kDefaultAlpha = 0.3;
inline constexpr double kDefaultDelta = 0.15;
inline constexpr double kDefaultEpsilon = 1e-6;

/// Step constants of the exact-Newton method. Requires alpha in (0, 0.5).
struct Alg1Constants {
  double alpha = 0.0;
  double sigma = 0.0;  // alpha² / (2(1 − alpha))
  double beta = 0.0;   // (alpha − sigma) / (1 + alpha/√(2n))
  double mu = 0.0;     // alpha / (1 − alpha); also bounds the relative step
  std::size_t n = 0;
};

/// Step constants of the approximated-Newton method. `delta` is the width of
/// the multiplicative band inside which lagged coefficients are tolerated.
struct Alg2Constants {
  double alpha = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  double eta = 0.0;  // equal to mu; bound on ‖Δx/x‖ and ‖Δs/s‖
  std::size_t n = 0;
};

/// Data-independent execution-time certificate: everything here depends on
/// (n, epsilon, alpha, delta) only, never on problem data.
struct Certificate {
  std::size_t n = 0;
  double epsilon = 0.0;
  Algorithm algorithm = Algorithm::kApprox;
  std::uint64_t n_iter = 0;
  std::uint64_t n_rank1_bound = 0;  // zero for the exact method
  std::variant<Alg1Constants, Alg2Constants> constants;
  /// Rough floating-point operation estimate. Not a contract; see certify().
  double flop_estimate = 0.0;
};

Alg1Constants alg1_constants(std::size_t n, double alpha);
Alg2Constants alg2_constants(std::size_t n, double alpha, double delta);

/// ⌈ln((2n + α√(2n))/ε) / −ln(1 − β/√(2n))⌉.
std::uint64_t iteration_count(std::size_t n, double epsilon, const Alg1Constants& c);
std::uint64_t iteration_count(std::size_t n, double epsilon, const Alg2Constants& c);

/// ⌈4η(N_iter − 1)√n / ((1 − η)·ln(1 + δ))⌉; zero when n_iter is 1.
std::uint64_t rank1_count_bound(std::size_t n, std::uint64_t n_iter, const Alg2Constants& c);

/// Flop model: exact → N_iter·(n³/3 + 9n²); approx → n³ + 2n²·N_rank1 + 8n²·N_iter.
Certificate certify(std::size_t n, double epsilon, Algorithm algorithm,
                    double alpha = kDefaultAlpha, double delta = kDefaultDelta);

}  // namespace certiqp
