#include "certiqp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include "certiqp/approx_solver.hpp"
#include "certiqp/error.hpp"
#include "certiqp/exact_solver.hpp"

namespace certiqp {

BoxQP random_boxqp(std::size_t n, std::uint64_t seed, double density) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "density must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto k = static_cast<std::size_t>(std::ceil(density * static_cast<double>(n)));
  Matrix s(k, n);
  for (double& v : s.data()) v = normal(rng);
  BoxQP p;
  p.H = Matrix(n, n);
  const double inv_n = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < k; ++r) acc += s(r, i) * s(r, j);
      p.H(i, j) = acc * inv_n;
      p.H(j, i) = acc * inv_n;
    }
  }
  p.h.resize(n);
  for (double& v : p.h) v = normal(rng);
  return p;
}

Vector oracle_active_set(const BoxQP& p) {
  const std::size_t n = p.n();
  if (n > 10) throw Error(ErrorKind::kIntractable, "active-set enumeration needs n <= 10");
  validate(p, false);
  const double tol = 1e-9 * std::max(1.0, std::max(p.H.max_abs(), norm_inf(p.h)));

  std::size_t patterns = 1;
  for (std::size_t i = 0; i < n; ++i) patterns *= 3;

  Vector best;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<int> state(n);  // -1 lower, 0 free, +1 upper
  Vector z(n);
  for (std::size_t code = 0; code < patterns; ++code) {
    std::size_t c = code;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
      if (state[i] == 0) free.push_back(i);
      z[i] = state[i];
    }
    if (!free.empty()) {
      const std::size_t nf = free.size();
      Matrix hff(nf, nf);
      Vector rhs(nf);
      for (std::size_t a = 0; a < nf; ++a) {
        double r = -p.h[free[a]];
        for (std::size_t j = 0; j < n; ++j) {
          if (state[j] != 0) r -= p.H(free[a], j) * z[j];
        }
        rhs[a] = r;
        for (std::size_t b = 0; b < nf; ++b) hff(a, b) = p.H(free[a], free[b]);
      }
      try {
        const CholeskyFactor f = cholesky_factor(hff);
        cholesky_solve_in_place(f, rhs);
      } catch (const Error&) {
        continue;
      }
      for (std::size_t a = 0; a < nf; ++a) z[free[a]] = rhs[a];
    }
    bool ok = true;
    const Vector grad = add(matvec(p.H, z), p.h);
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (state[i] == 0) ok = std::abs(z[i]) <= 1.0 + 1e-9 && std::abs(grad[i]) <= tol * 1e3;
      if (state[i] == 1) ok = grad[i] <= tol;
      if (state[i] == -1) ok = grad[i] >= -tol;
    }
    if (!ok) continue;
    const double obj = p.objective(z);
    if (obj < best_obj) {
      best_obj = obj;
      best = z;
    }
  }
  if (best.empty() && n > 0) {
    throw Error(ErrorKind::kNotPsd, "no KKT point found; H is probably not PSD");
  }
  for (double& v : best) v = std::clamp(v, -1.0, 1.0);
  return best;
}

namespace {

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double spectral_norm_estimate(const Matrix& ata) {
  const std::size_t n = ata.rows();
  Vector v(n, 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1))));
  double est = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vector w = matvec(ata, v);
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (double& x : w) x /= nw;
    const double prev = est;
    est = nw;
    v = std::move(w);
    if (std::abs(est - prev) <= 1e-14 * est) break;
  }
  return est;
}

}  // namespace

IstaResult oracle_ista(const LassoProblem& p, std::size_t max_iters, double tol) {
  const std::size_t n = p.A.cols();
  const Matrix ata = matmul(transpose(p.A), p.A);
  const Vector atb = matvec_transposed(p.A, p.b);
  const double lip = spectral_norm_estimate(ata) * 1.001;
  IstaResult res;
  res.x.assign(n, 0.0);
  if (lip == 0.0) return res;
  const double step = 1.0 / lip;
  Vector next(n);
  for (std::size_t it = 0; it < max_iters; ++it) {
    const Vector grad = subtract(matvec(ata, res.x), atb);
    double gm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = soft_threshold(res.x[i] - step * grad[i], step * p.weight);
      gm = std::max(gm, std::abs(next[i] - res.x[i]) / step);
    }
    res.x.swap(next);
    res.iterations = it + 1;
    res.gradient_map_norm = gm;
    if (gm <= tol) break;
  }
  return res;
}

std::vector<const InvariantRecord*> AuditReport::records() const {
  return {&positivity, &neighborhood, &sandwich, &ratio_band,
          &curvature,  &step_ratio,   &rank1_budget};
}

std::size_t AuditReport::total_failures() const {
  std::size_t total = 0;
  for (const auto* r : records()) total += r->failures;
  return total;
}

namespace {

void note(InvariantRecord& r, double ratio) {
  const bool ok = ratio <= 1.0;
  r.passed.push_back(ok ? 1 : 0);
  if (!ok) ++r.failures;
  if (std::isnan(ratio)) {
    r.worst_ratio = std::numeric_limits<double>::infinity();
  } else {
    r.worst_ratio = std::max(r.worst_ratio, ratio);
  }
}

double max_relative(std::span<const double> delta, std::span<const double> base) {
  double m = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) m = std::max(m, std::abs(delta[i] / base[i]));
  return m;
}

double band_ratio(std::span<const double> lagged, std::span<const double> current, double upper) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lagged.size(); ++i) {
    const double r = lagged[i] / current[i];
    worst = std::max(worst, std::max(r, 1.0 / r) / upper);
  }
  return worst;
}

}  // namespace

AuditReport audit_solve(const BoxQP& p, Algorithm algorithm, const SolverOptions& opts) {
  const std::size_t n = p.n();
  AuditReport rep;
  rep.algorithm = algorithm;
  rep.n = n;
  double eta = 0.0;
  if (algorithm == Algorithm::kExact) {
    const auto c = alg1_constants(n, opts.alpha);
    eta = c.mu;
    rep.n_iter_certified = iteration_count(n, opts.epsilon, c);
  } else {
    const auto c = alg2_constants(n, opts.alpha, opts.delta);
    eta = c.eta;
    rep.n_iter_certified = iteration_count(n, opts.epsilon, c);
    rep.rank1_bound = rank1_count_bound(n, rep.n_iter_certified, c);
  }
  const double two_n = 2.0 * static_cast<double>(n);
  const double spread = opts.alpha * std::sqrt(two_n);
  const double upper_band = 1.0 + opts.delta;

  SolverOptions o = opts;
  auto user_observer = opts.observer;
  o.observer = [&](const StepInfo& info) {
    const Iterate& a = *info.after;
    const Iterate& b = *info.before;
    const Direction& d = *info.direction;
    const double tau = info.tau_after;

    bool positive = true;
    for (const Vector* v : {&a.gamma, &a.theta, &a.phi, &a.psi}) {
      for (double x : *v) positive = positive && x > 0.0;
    }
    note(rep.positivity, positive ? 0.0 : 2.0);

    note(rep.neighborhood, neighborhood_norm(a) / (opts.alpha * (1.0 + 1e-8)));

    const double gap = duality_gap(a);
    const double lo = (two_n - spread) * tau * (1.0 - 1e-9);
    const double hi = (two_n + spread) * tau * (1.0 + 1e-9);
    note(rep.sandwich, std::max(lo / gap, gap / hi));

    if (info.tildes) {
      const auto& t = *info.tildes;
      note(rep.ratio_band, std::max({band_ratio(t.gamma, b.gamma, upper_band),
                                     band_ratio(t.theta, b.theta, upper_band),
                                     band_ratio(t.phi, b.phi, upper_band),
                                     band_ratio(t.psi, b.psi, upper_band)}) /
                               (1.0 + 1e-12));
    } else {
      note(rep.ratio_band, 0.0);
    }

    const double curv = curvature(d);
    note(rep.curvature, curv >= -1e-12 ? 0.0 : 2.0);

    const double step = std::max({max_relative(d.dgamma, b.gamma), max_relative(d.dtheta, b.theta),
                                  max_relative(d.dphi, b.phi), max_relative(d.dpsi, b.psi)});
    note(rep.step_ratio, step / (eta + 1e-8));

    if (algorithm == Algorithm::kApprox) {
      note(rep.rank1_budget, static_cast<double>(info.rank1_cumulative) /
                                 static_cast<double>(std::max<std::uint64_t>(rep.rank1_bound, 1)));
    } else {
      note(rep.rank1_budget, 0.0);
    }
    if (user_observer) user_observer(info);
  };
  rep.solution = algorithm == Algorithm::kExact ? solve_exact(p, o) : solve_approx(p, o);
  rep.iterations = rep.solution.iterations_run;
  return rep;
}

std::vector<TraceRow> trace_experiment(const std::vector<std::size_t>& ns,
                                       const std::vector<double>& epsilons, std::uint64_t seed,
                                       std::size_t jobs) {
  struct Cell {
    std::size_t n;
    double eps;
    std::vector<TraceRow> rows;
  };
  std::vector<Cell> cells;
  for (std::size_t n : ns) {
    for (double e : epsilons) cells.push_back({n, e, {}});
  }

  auto run = [&](Cell& cell) {
    const BoxQP p = random_boxqp(cell.n, seed);
    const auto c = alg2_constants(cell.n, kDefaultAlpha, kDefaultDelta);
    const std::uint64_t n_iter = iteration_count(cell.n, cell.eps, c);
    const std::uint64_t bound = rank1_count_bound(cell.n, n_iter, c);
    SolverOptions o;
    o.epsilon = cell.eps;
    o.record_trace = true;
    const Solution s = solve_approx(p, o);
    cell.rows.push_back({cell.n, cell.eps, 0, 1.0, 2.0 * static_cast<double>(cell.n), 0, n_iter,
                         bound});
    for (const auto& r : *s.trace) {
      cell.rows.push_back(
          {cell.n, cell.eps, r.k, r.tau, r.duality_gap, r.cumulative_rank1, n_iter, bound});
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  if (workers == 1) {
    for (auto& cell : cells) run(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) run(cells[i]);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<TraceRow> rows;
  for (auto& cell : cells) rows.insert(rows.end(), cell.rows.begin(), cell.rows.end());
  return rows;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "experiment,n,epsilon,k,tau,gap,rank1_cum,n_iter_bound,rank1_bound\n";
  for (const auto& r : rows) {
    os << "trace," << r.n << ',' << num(r.epsilon) << ',' << r.k << ',' << num(r.tau) << ','
       << num(r.gap) << ',' << r.rank1_cum << ',' << r.n_iter_bound << ',' << r.rank1_bound
       << '\n';
  }
}

std::vector<TimingRow> timing_experiment(const std::vector<std::size_t>& ns, std::size_t reps,
                                         std::uint64_t seed, double epsilon) {
  if (reps == 0) throw Error(ErrorKind::kInvalidParameter, "reps must be positive");
  std::vector<TimingRow> rows;
  SolverOptions o;
  o.epsilon = epsilon;
  for (std::size_t n : ns) {
    const BoxQP p = random_boxqp(n, seed);
    for (Algorithm a : {Algorithm::kExact, Algorithm::kApprox}) {
      auto solve = [&] { return a == Algorithm::kExact ? solve_exact(p, o) : solve_approx(p, o); };
      solve();
      std::vector<double> secs;
      for (std::size_t r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const Solution s = solve();
        const auto t1 = std::chrono::steady_clock::now();
        secs.push_back(std::chrono::duration<double>(t1 - t0).count());
        if (s.z_star.size() != n) throw Error(ErrorKind::kDimensionMismatch, "bad solve");
      }
      std::sort(secs.begin(), secs.end());
      const std::size_t m = secs.size();
      const double median = m % 2 == 1 ? secs[m / 2] : 0.5 * (secs[m / 2 - 1] + secs[m / 2]);
      rows.push_back({n, a, median});
    }
  }
  return rows;
}

void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows) {
  os << "n,algo,median_seconds\n";
  for (const auto& r : rows) os << r.n << ',' << to_string(r.algorithm) << ',' << num(r.median_seconds) << '\n';
}

}  // namespace certiqp
