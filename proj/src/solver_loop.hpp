#pragma once

// Bookkeeping shared by the two interior-point loops: τ schedule, trace,
// observer callback and the fault-injection hook.

#include <cmath>

#include "certiqp/boxqp.hpp"

namespace certiqp::detail {

class LoopBookkeeper {
 public:
  LoopBookkeeper(const SolverOptions& opts, std::size_t n, double beta, std::size_t n_iter)
      : opts_(opts), shrink_(1.0 - beta / std::sqrt(2.0 * static_cast<double>(n))) {
    solution_.n_iter_certified = n_iter;
    if (opts.record_trace) {
      solution_.trace.emplace();
      solution_.trace->reserve(n_iter);
    }
  }

  double shrink() const noexcept { return shrink_; }

  /// Called after the step has been applied and τ decreased. Returns true
  /// when the loop should stop early.
  bool record(std::size_t k, const Iterate& before, const Direction& dir, Iterate& after,
              double tau_before, std::size_t rank1_now, std::optional<TildeView> tildes) {
    if (opts_.tau_fault && opts_.tau_fault->iteration == k) after.tau *= opts_.tau_fault->factor;
    rank1_total_ += rank1_now;
    solution_.rank1_log.per_iteration.push_back(rank1_now);
    const double gap = duality_gap(after);
    if (solution_.trace) {
      solution_.trace->push_back(
          TraceRecord{k, after.tau, gap, neighborhood_norm(after), rank1_total_});
    }
    if (opts_.observer) {
      StepInfo info;
      info.k = k;
      info.before = &before;
      info.direction = &dir;
      info.after = &after;
      info.tau_before = tau_before;
      info.tau_after = after.tau;
      info.rank1_this_iteration = rank1_now;
      info.rank1_cumulative = rank1_total_;
      info.tildes = tildes;
      opts_.observer(info);
    }
    solution_.iterations_run = k;
    return opts_.early_stop && gap <= opts_.epsilon;
  }

  Solution finish(const Iterate& it) {
    solution_.z_star = it.z;
    solution_.duality_gap = duality_gap(it);
    solution_.rank1_used = rank1_total_;
    solution_.rank1_log.total = rank1_total_;
    return std::move(solution_);
  }

 private:
  const SolverOptions& opts_;
  double shrink_;
  std::size_t rank1_total_ = 0;
  Solution solution_;
};

}  // namespace certiqp::detail
