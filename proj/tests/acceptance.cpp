// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "certiqp/approx_solver.hpp"
#include "certiqp/certificate.hpp"
#include "certiqp/exact_solver.hpp"
#include "certiqp/harness.hpp"
#include "certiqp/kalman.hpp"
#include "certiqp/mpc.hpp"
#include "certiqp/transforms.hpp"

using namespace certiqp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("%s criterion %d: %s [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double inf_diff(const Vector& a, const Vector& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void criterion1() {
  const auto t0 = Clock::now();
  const Certificate c = certify(40, 1e-6, Algorithm::kApprox, 0.3, 0.15);
  const double ms = seconds_since(t0) * 1e3;
  report(1, c.n_iter == 1672 && ms < 1.0, "certificate n=40 eps=1e-6 gives N_iter = 1672 in < 1 ms",
         "N_iter=" + std::to_string(c.n_iter) + " time=" + fmt("%.4f", ms) + "ms");
}

void criterion2() {
  const auto a2 = alg2_constants(40, 0.3, 0.15);
  const auto a1 = alg1_constants(40, 0.3);
  const bool ok = std::abs(a2.mu - 0.6518) <= 5e-5 && std::abs(a2.sigma - 0.1997) <= 5e-5 &&
                  std::abs(a1.mu - 0.4286) <= 5e-5 && std::abs(a1.sigma - 0.0643) <= 5e-5;
  report(2, ok, "step constants within 5e-5",
         "approx mu=" + fmt("%.6f", a2.mu) + " sigma=" + fmt("%.6f", a2.sigma) +
             "; exact mu=" + fmt("%.6f", a1.mu) + " sigma=" + fmt("%.6f", a1.sigma));
}

// Criteria 3 and 4 share the same runs.
void criteria3and4() {
  const std::vector<std::size_t> ns{100, 200};
  const std::vector<double> eps{1e-6, 1e-8};
  const auto t0 = Clock::now();
  const auto jobs = std::size_t{std::max(1u, std::min(4u, std::thread::hardware_concurrency()))};
  const std::vector<TraceRow> rows = trace_experiment(ns, eps, 42, jobs);
  const double elapsed = seconds_since(t0);

  struct Cell {
    double gap_last = 0, gap_before = 0;
    std::size_t rank1 = 0;
    std::uint64_t bound = 0, n_iter = 0;
  };
  std::map<std::pair<std::size_t, double>, Cell> cells;
  for (const TraceRow& r : rows) {
    Cell& c = cells[{r.n, r.epsilon}];
    c.n_iter = r.n_iter_bound;
    c.bound = r.rank1_bound;
    if (r.k + 1 == r.n_iter_bound) c.gap_before = r.gap;
    if (r.k == r.n_iter_bound) {
      c.gap_last = r.gap;
      c.rank1 = r.rank1_cum;
    }
  }

  bool ok3 = elapsed <= 60.0;
  bool ok4 = true;
  std::string d3, d4;
  for (const auto& [key, c] : cells) {
    const bool last_ok = c.gap_last <= key.second;
    const bool before_ok = c.gap_before > key.second;
    ok3 = ok3 && last_ok && before_ok;
    d3 += "n=" + std::to_string(key.first) + " eps=" + fmt("%.0e", key.second) +
          " N=" + std::to_string(c.n_iter) + " gap_N/eps=" + fmt("%.4f", c.gap_last / key.second) +
          " gap_N-1/eps=" + fmt("%.4f", c.gap_before / key.second) + "; ";
    const bool in_budget = c.rank1 <= c.bound && 2 * c.rank1 <= c.bound;
    ok4 = ok4 && in_budget;
    d4 += "n=" + std::to_string(key.first) + " eps=" + fmt("%.0e", key.second) + " " +
          std::to_string(c.rank1) + "/" + std::to_string(c.bound) + "; ";
  }
  d3 += "time=" + fmt("%.2f", elapsed) + "s";
  report(3, ok3, "gap <= eps at N_iter and > eps at N_iter-1 (approximated method)", d3);
  report(4, ok4, "rank-1 updates within 50% of the bound", d4);
}

void criterion5() {
  const std::vector<std::size_t> sizes{1, 2, 3, 4, 5, 6, 7, 8, 20, 50, 100};
  std::size_t solves = 0, failed = 0, singular = 0;
  std::map<std::string, double> worst;
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = sizes[t % sizes.size()];
    // every third problem has a rank-deficient H, every tenth H = 0
    const double density = t % 10 == 9 ? 0.0 : (t % 3 == 0 ? 0.5 : 1.0);
    if (density < 1.0 && std::ceil(density * n) < n) ++singular;
    const BoxQP p = random_boxqp(n, 20000 + t, density);
    for (Algorithm a : {Algorithm::kExact, Algorithm::kApprox}) {
      const AuditReport r = audit_solve(p, a);
      ++solves;
      failed += r.total_failures();
      for (const InvariantRecord* rec : r.records())
        worst[rec->name] = std::max(worst[rec->name], rec->worst_ratio);
    }
  }
  std::string d = std::to_string(solves) + " solves, " + std::to_string(singular) +
                  " singular H, failures=" + std::to_string(failed) + "; worst ratio:";
  for (const auto& [k, v] : worst) d += " " + k + "=" + fmt("%.4f", v);
  report(5, solves == 300 && failed == 0, "iterate invariants hold on every iteration", d);
}

void criterion6() {
  SolverOptions o;
  o.epsilon = 1e-8;
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 8;
    const BoxQP p = random_boxqp(n, 30000 + t);
    const Vector want = oracle_active_set(p);
    worst = std::max(worst, inf_diff(solve_exact(p, o).z_star, want));
    worst = std::max(worst, inf_diff(solve_approx(p, o).z_star, want));
  }
  report(6, worst <= 1e-5, "both methods match the enumeration oracle within 1e-5 (200 problems)",
         "worst=" + fmt("%.3e", worst));
}

void criterion7() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd(0, 1);
  std::uniform_real_distribution<double> frac(0.05, 0.8);
  SolverOptions o;
  o.epsilon = 1e-10;
  double worst_sub = 0, worst_ista = 0, worst_zero = 0;
  for (int t = 0; t < 50; ++t) {
    LassoProblem p;
    p.A = Matrix(20, 5);
    for (double& v : p.A.data()) v = nd(rng);
    p.b.resize(20);
    for (double& v : p.b) v = nd(rng);
    const double lam_max = norm_inf(matvec_transposed(p.A, p.b));
    p.weight = frac(rng) * lam_max;
    auto red = lasso_to_boxqp(p);
    const Vector x = recover_lasso(solve_approx(red.problem, o).z_star, red.recovery);
    const Vector grad = matvec_transposed(p.A, subtract(matvec(p.A, x), p.b));
    for (std::size_t i = 0; i < 5; ++i) {
      const double v = x[i] - grad[i];
      const double soft = std::copysign(std::max(0.0, std::abs(v) - p.weight), v);
      worst_sub = std::max(worst_sub, std::abs(x[i] - soft));
    }
    worst_ista = std::max(worst_ista, inf_diff(x, oracle_ista(p).x));

    p.weight = lam_max * (1.0 + 0.5 * (t % 3));
    red = lasso_to_boxqp(p);
    worst_zero = std::max(
        worst_zero, norm_inf(recover_lasso(solve_approx(red.problem, o).z_star, red.recovery)));
  }
  report(7, worst_sub <= 1e-4 && worst_ista <= 1e-4 && worst_zero <= 1e-5,
         "Lasso optimality, ISTA agreement and zero solution (50 instances, eps=1e-10)",
         "subgradient=" + fmt("%.3e", worst_sub) + " ista=" + fmt("%.3e", worst_ista) +
             " zero=" + fmt("%.3e", worst_zero));
}

void criterion8() {
  const auto rows = timing_experiment({500}, 5, 8);
  double exact = 0, approx = 0;
  for (const TimingRow& r : rows) (r.algorithm == Algorithm::kExact ? exact : approx) = r.median_seconds;
  report(8, approx < exact, "median time at n=500: approximated < exact (5 reps)",
         "exact=" + fmt("%.3f", exact) + "s approx=" + fmt("%.3f", approx) +
             "s speedup=" + fmt("%.2f", exact / approx));
}

void criterion9() {
  const Afti16Setup s = afti16_setup();
  const std::size_t steps = 100;
  const ClosedLoopRecord rec = simulate_closed_loop(s.model, s.config, s.x0, steps);
  double umax = 0;
  bool dims = true;
  for (std::size_t t = 0; t < steps; ++t) {
    umax = std::max(umax, norm_inf(rec.inputs[t]));
    dims = dims && rec.stats[t].box_dimension == 40;
  }
  std::size_t enter = 0;  // first step after which y1 stays in the band
  for (std::size_t t = 0; t < steps; ++t)
    if (std::abs(rec.outputs[t][0]) > 0.5) enter = t + 1;
  report(9, umax <= 25.0 + 1e-6 && enter <= 50 && dims,
         "AFTI-16: |u| <= 25, y1 in [-0.5, 0.5] within 50 steps, Box-QP dimension 40",
         "max|u|=" + fmt("%.6f", umax) + " y1 settles at step " + std::to_string(enter) +
             " dims40=" + (dims ? "yes" : "no"));
}

void criterion10() {
  const ThreeTankSetup base = three_tank_setup();
  Vector kf(3, 0.0), rkf(3, 0.0);
  double coincide = 0;
  ThreeTankSetup large = base;
  large.config.rho = 1e6;
  for (int seed = 1; seed <= 20; ++seed) {
    const RkfRun run = simulate_rkf(base, 200, seed);
    for (std::size_t i = 0; i < 3; ++i) {
      kf[i] += run.rms_kf[i] / 20;
      rkf[i] += run.rms_rkf[i] / 20;
    }
    const RkfRun same = simulate_rkf(large, 200, seed);
    for (std::size_t t = 0; t < same.kf.size(); ++t)
      coincide = std::max(coincide, inf_diff(same.kf[t], same.rkf[t]));
  }
  bool ok = coincide <= 1e-8;
  std::string d;
  for (std::size_t i = 0; i < 3; ++i) {
    ok = ok && rkf[i] <= kf[i];
    d += "x" + std::to_string(i + 1) + ": kf=" + fmt("%.4f", kf[i]) + " rkf=" + fmt("%.4f", rkf[i]) + "; ";
  }
  d += "max |kf - rkf| at rho=1e6: " + fmt("%.3e", coincide);
  report(10, ok, "robust KF beats KF on every state; coincides for large rho", d);
}

void criterion11() {
  const auto c40 = alg2_constants(40, 0.3, 0.15);
  const auto c3 = alg2_constants(3, 0.3, 0.15);
  const auto r40 = rank1_count_bound(40, iteration_count(40, 1e-6, c40), c40);
  const auto n3 = iteration_count(3, 1e-6, c3);
  const auto r3 = rank1_count_bound(3, n3, c3);
  const bool differ = r40 != 11060 && n3 != 304 && r3 != 550;

  std::ifstream in(std::string(CERTIQP_SOURCE_DIR) + "/README.md");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string readme = ss.str();
  bool documented = readme.find("Known discrepancies") != std::string::npos;
  const std::vector<std::string> needles{"11060", "304", "550", std::to_string(r40),
                                         std::to_string(n3), std::to_string(r3)};
  for (const std::string& v : needles) documented = documented && readme.find(v) != std::string::npos;
  report(11, differ && documented, "published 11060 / 304 / 550 differ from the formulas and are documented",
         "formula: N_rank1(40)=" + std::to_string(r40) + " N_iter(3)=" + std::to_string(n3) +
             " N_rank1(3)=" + std::to_string(r3) + "; README section " +
             (documented ? "present" : "missing"));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criteria3and4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
