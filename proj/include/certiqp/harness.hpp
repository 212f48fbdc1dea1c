#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "certiqp/boxqp.hpp"
#include "certiqp/transforms.hpp"

namespace certiqp {

/// H = SᵀS/n with S a k×n standard normal matrix, k = ⌈density·n⌉, and
/// h standard normal. Deterministic in the seed.
BoxQP random_boxqp(std::size_t n, std::uint64_t seed, double density = 1.0);

/// Brute force over all 3ⁿ lower/free/upper patterns. Throws kIntractable
/// for n > 10.
Vector oracle_active_set(const BoxQP& p);

struct IstaResult {
  Vector x;
  std::size_t iterations = 0;
  double gradient_map_norm = 0.0;
};

/// Proximal gradient with step 1/‖AᵀA‖₂ (power method estimate).
IstaResult oracle_ista(const LassoProblem& p, std::size_t max_iters = 200000,
                       double tol = 1e-10);

/// One invariant tracked over a solve: how often it failed, the worst value
/// of value/limit (≤ 1 means satisfied) and the per-iteration verdicts.
struct InvariantRecord {
  explicit InvariantRecord(std::string label) : name(std::move(label)) {}

  std::string name;
  std::size_t failures = 0;
  double worst_ratio = 0.0;
  std::vector<char> passed;
};

struct AuditReport {
  Algorithm algorithm = Algorithm::kApprox;
  std::size_t n = 0;
  std::size_t iterations = 0;
  std::uint64_t n_iter_certified = 0;
  std::uint64_t rank1_bound = 0;
  InvariantRecord positivity{"positivity"};
  InvariantRecord neighborhood{"neighborhood"};
  InvariantRecord sandwich{"gap_sandwich"};
  InvariantRecord ratio_band{"ratio_band"};
  InvariantRecord curvature{"curvature"};
  InvariantRecord step_ratio{"step_ratio"};
  InvariantRecord rank1_budget{"rank1_budget"};
  Solution solution;

  std::vector<const InvariantRecord*> records() const;
  std::size_t total_failures() const;
  bool clean() const { return total_failures() == 0; }
};

/// Solves with an observer attached and checks, after every iteration:
/// x, s > 0; ‖x∘s − τe‖ ≤ ατ(1 + 1e-8); (2n ∓ α√(2n))τ bracketing the gap
/// with 1e-9 relative slack; lagged values within the δ band; ΔxᵀΔs ≥ −1e-12;
/// ‖Δx/x‖∞, ‖Δs/s‖∞ ≤ η + 1e-8; cumulative rank-1 count within its bound.
AuditReport audit_solve(const BoxQP& p, Algorithm algorithm, const SolverOptions& opts = {});

struct TraceRow {
  std::size_t n = 0;
  double epsilon = 0.0;
  std::size_t k = 0;
  double tau = 0.0;
  double gap = 0.0;
  std::size_t rank1_cum = 0;
  std::uint64_t n_iter_bound = 0;
  std::uint64_t rank1_bound = 0;
};

/// Approximated-method traces on random_boxqp(n, seed) for every (n, ε)
/// cell. Row k = 0 is the starting point. Cells run on up to `jobs` threads.
std::vector<TraceRow> trace_experiment(const std::vector<std::size_t>& ns,
                                       const std::vector<double>& epsilons, std::uint64_t seed,
                                       std::size_t jobs = 1);

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

struct TimingRow {
  std::size_t n = 0;
  Algorithm algorithm = Algorithm::kApprox;
  double median_seconds = 0.0;
};

/// Median wall time over `reps` solves (after one untimed warmup) of both
/// methods on the same random problem per n.
std::vector<TimingRow> timing_experiment(const std::vector<std::size_t>& ns, std::size_t reps,
                                         std::uint64_t seed, double epsilon = kDefaultEpsilon);

void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows);

}  // namespace certiqp
