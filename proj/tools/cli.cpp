#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "certiqp/approx_solver.hpp"
#include "certiqp/error.hpp"
#include "certiqp/exact_solver.hpp"
#include "certiqp/harness.hpp"
#include "certiqp/io.hpp"
#include "certiqp/kalman.hpp"
#include "certiqp/log.hpp"
#include "certiqp/mpc.hpp"
#include "certiqp/transforms.hpp"

namespace certiqp::cli {

namespace {

struct CliConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string algorithm = "approx";
  double epsilon = kDefaultEpsilon;
  double alpha = kDefaultAlpha;
  double delta = kDefaultDelta;
  std::uint64_t seed = 42;
  std::string trace_path;
  bool audit = false;
  bool early_stop = false;
  std::size_t jobs = 1;

  // command specific
  std::size_t n = 0;
  std::string which;
  std::size_t steps = 0;
  std::optional<double> rho;
  std::vector<std::size_t> sizes;
  std::vector<double> epsilons;
  std::size_t reps = 5;
};

Algorithm algorithm_of(const CliConfig& c) {
  return c.algorithm == "exact" ? Algorithm::kExact : Algorithm::kApprox;
}

SolverOptions options_of(const CliConfig& c) {
  SolverOptions o;
  o.alpha = c.alpha;
  o.delta = c.delta;
  o.epsilon = c.epsilon;
  o.early_stop = c.early_stop;
  o.record_trace = !c.trace_path.empty();
  return o;
}

std::string num(double v, const char* fmt = "%.17g") {
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

Solution run_solver(const BoxQP& p, const CliConfig& c) {
  const SolverOptions o = options_of(c);
  log(LogLevel::kInfo, "solving n=" + std::to_string(p.n()) + " with " + c.algorithm);
  return algorithm_of(c) == Algorithm::kExact ? solve_exact(p, o) : solve_approx(p, o);
}

void write_solution_trace(const CliConfig& c, const Solution& s) {
  if (c.trace_path.empty() || !s.trace) return;
  std::ofstream os(c.trace_path);
  if (!os) throw Error(ErrorKind::kParse, "cannot write " + c.trace_path);
  os << "k,tau,gap,neighborhood,rank1_cum\n";
  for (const auto& r : *s.trace) {
    os << r.k << ',' << num(r.tau) << ',' << num(r.duality_gap) << ','
       << num(r.neighborhood_norm) << ',' << r.cumulative_rank1 << '\n';
  }
}

// Solve, or audit when requested, and attach the shared fields.
Solution solve_box(const BoxQP& p, const CliConfig& c, Json& out) {
  Solution s;
  if (c.audit) {
    AuditReport rep = audit_solve(p, algorithm_of(c), options_of(c));
    out["audit"] = to_json(rep);
    s = std::move(rep.solution);
  } else {
    s = run_solver(p, c);
  }
  write_solution_trace(c, s);
  out["duality_gap"] = s.duality_gap;
  out["iterations"] = s.iterations_run;
  out["n_iter_certified"] = s.n_iter_certified;
  out["rank1_updates"] = s.rank1_used;
  out["algorithm"] = c.algorithm;
  return s;
}

void emit(std::ostream& out, const CliConfig& c, const std::string& text) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream os(c.output);
  if (!os) throw Error(ErrorKind::kParse, "cannot write " + c.output);
  os << text;
}

int cmd_solve(const CliConfig& c, std::ostream& out) {
  const BoxQpInput in = boxqp_from_json(read_json_file(c.input));
  Json j;
  if (in.lower) {
    const auto red = genbox_to_unitbox(in.problem.H, in.problem.h, *in.lower, *in.upper);
    const Solution s = solve_box(red.problem, c, j);
    const Vector y = recover_genbox(s.z_star, red.recovery);
    j["z"] = y;
    j["objective"] = in.problem.objective(y);
  } else {
    const Solution s = solve_box(in.problem, c, j);
    j["z"] = s.z_star;
    j["objective"] = in.problem.objective(s.z_star);
  }
  emit(out, c, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_certify(const CliConfig& c, std::ostream& out) {
  const Certificate cert = certify(c.n, c.epsilon, algorithm_of(c), c.alpha, c.delta);
  emit(out, c, to_json(cert).dump(2) + "\n");
  return kExitOk;
}

int cmd_lasso(const CliConfig& c, std::ostream& out) {
  const LassoProblem p = lasso_from_json(read_json_file(c.input));
  const auto red = lasso_to_boxqp(p);
  Json j;
  const Solution s = solve_box(red.problem, c, j);
  const Vector x = recover_lasso(s.z_star, red.recovery);
  const Vector grad = matvec_transposed(p.A, subtract(matvec(p.A, x), p.b));
  // |x − soft(x − grad, w)|, zero exactly at a Lasso minimizer
  double viol = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i] - grad[i];
    const double soft = std::copysign(std::max(0.0, std::abs(v) - p.weight), v);
    viol = std::max(viol, std::abs(x[i] - soft));
  }
  j["x"] = x;
  j["objective"] = p.objective(x);
  j["subgradient_violation"] = viol;
  emit(out, c, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_svm(const CliConfig& c, std::ostream& out) {
  const SvmInput in = svm_from_json(read_json_file(c.input));
  const auto red = svm_to_boxqp(in.problem);
  Json j;
  const Solution s = solve_box(red.problem, c, j);
  const Vector duals = recover_svm_duals(s.z_star, red.recovery);
  const std::size_t m = duals.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double f = 0.0;
    for (std::size_t k = 0; k < m; ++k) f += duals[k] * in.problem.labels[k] * in.problem.gram(i, k);
    if ((f >= 0.0 ? 1.0 : -1.0) == in.problem.labels[i]) ++correct;
  }
  j["duals"] = duals;
  j["training_accuracy"] = m == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(m);
  if (in.features && in.kernel.kind == KernelKind::kLinear) {
    const SvmModel model = make_svm_model(*in.features, in.problem.labels, duals, in.kernel);
    j["weights"] = linear_svm_weights(model);
  }
  emit(out, c, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_qp(const CliConfig& c, std::ostream& out) {
  StrictQP p = strict_qp_from_json(read_json_file(c.input));
  if (c.rho) p.rho.assign(p.g.size(), *c.rho);
  const auto red = l1_penalty_to_boxqp(p);
  Json j;
  const Solution s = solve_box(red.problem, c, j);
  const Vector y = recover_l1(s.z_star, red.recovery);
  const Vector gy = matvec(p.G, y);
  double viol = 0.0;
  for (std::size_t i = 0; i < gy.size(); ++i) viol = std::max(viol, gy[i] - p.g[i]);
  j["y"] = y;
  j["objective"] = p.penalized_objective(y);
  j["max_constraint_violation"] = viol;
  emit(out, c, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_demo(const CliConfig& c, std::ostream& out) {
  std::ostringstream csv;
  if (c.which == "mpc-afti16") {
    const Afti16Setup s = afti16_setup();
    const std::size_t steps = c.steps == 0 ? 100 : c.steps;
    const ClosedLoopRecord rec =
        simulate_closed_loop(s.model, s.config, s.x0, steps, options_of(c), algorithm_of(c));
    csv << "t,y1,y2,r1,r2,u1,u2,box_n,iters,rank1,gap\n";
    for (std::size_t t = 0; t < steps; ++t) {
      const auto& st = rec.stats[t];
      csv << num(static_cast<double>(t) * s.model.Ts, "%.6g") << ',' << num(rec.outputs[t][0]) << ','
          << num(rec.outputs[t][1]) << ',' << num(rec.references[t][0]) << ','
          << num(rec.references[t][1]) << ',' << num(rec.inputs[t][0]) << ','
          << num(rec.inputs[t][1]) << ',' << st.box_dimension << ',' << st.iterations << ','
          << st.rank1 << ',' << num(st.duality_gap) << '\n';
    }
  } else if (c.which == "rkf-threetank") {
    ThreeTankSetup s = three_tank_setup();
    if (c.rho) s.config.rho = *c.rho;
    s.config.solver = options_of(c);
    s.config.solver.record_trace = false;
    s.config.algorithm = algorithm_of(c);
    const std::size_t steps = c.steps == 0 ? 200 : c.steps;
    const RkfRun run = simulate_rkf(s, steps, c.seed);
    csv << "t,x1,x2,x3,kf1,kf2,kf3,rkf1,rkf2,rkf3,y1,y2,u,iters,rank1,gap\n";
    for (std::size_t t = 0; t < steps; ++t) {
      csv << t;
      for (const auto* v : {&run.truth[t], &run.kf[t], &run.rkf[t], &run.measurements[t],
                            &run.inputs[t]}) {
        for (double x : *v) csv << ',' << num(x);
      }
      csv << ',' << run.iterations[t] << ',' << run.rank1[t] << ',' << num(run.gaps[t]) << '\n';
    }
    // summary rows, padded to the header width
    for (const auto& [label, rms] : {std::pair{"rms_kf", &run.rms_kf}, {"rms_rkf", &run.rms_rkf}}) {
      csv << label;
      for (double x : *rms) csv << ',' << num(x);
      csv << std::string(12, ',') << '\n';
    }
  } else {
    throw Error(ErrorKind::kInvalidParameter,
                "unknown demo \"" + c.which + "\" (mpc-afti16 | rkf-threetank)");
  }
  emit(out, c, csv.str());
  return kExitOk;
}

int cmd_bench(const CliConfig& c, std::ostream& out) {
  const auto sizes = c.sizes.empty() ? std::vector<std::size_t>{50, 100, 200} : c.sizes;
  std::ostringstream csv;
  write_timing_csv(csv, timing_experiment(sizes, c.reps, c.seed, c.epsilon));
  emit(out, c, csv.str());
  return kExitOk;
}

int cmd_trace(const CliConfig& c, std::ostream& out) {
  const auto sizes = c.sizes.empty() ? std::vector<std::size_t>{100, 200} : c.sizes;
  const auto eps = c.epsilons.empty() ? std::vector<double>{1e-6, 1e-8} : c.epsilons;
  std::ostringstream csv;
  write_trace_csv(csv, trace_experiment(sizes, eps, c.seed, c.jobs));
  emit(out, c, csv.str());
  return kExitOk;
}

void add_common(CLI::App* sub, CliConfig& c) {
  sub->add_option("--algorithm", c.algorithm, "exact | approx")
      ->check(CLI::IsMember({"exact", "approx"}));
  sub->add_option("--eps", c.epsilon, "target duality gap");
  sub->add_option("--alpha", c.alpha, "neighborhood width");
  sub->add_option("--delta", c.delta, "lag band width (approx)");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--trace", c.trace_path, "write per-iteration CSV here");
  sub->add_flag("--audit", c.audit, "check iterate invariants");
  sub->add_flag("--early-stop", c.early_stop, "stop once the gap is below eps");
  sub->add_option("--jobs", c.jobs, "parallel experiment cells");
  sub->add_option("-o,--out", c.output, "output file (default stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  set_log_level(log_level_from_env());
  CliConfig c;
  CLI::App app{"certiqp: Box-QP solver with execution-time certificates", "certiqp"};
  app.require_subcommand(1);

  std::map<std::string, std::function<int(const CliConfig&, std::ostream&)>> handlers;
  auto sub = [&](const char* name, const char* help, auto fn) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, c);
    handlers[name] = fn;
    return s;
  };

  sub("solve", "solve a Box-QP JSON file", cmd_solve)
      ->add_option("input", c.input, "problem file")
      ->required();
  sub("certify", "print the execution-time certificate", cmd_certify)
      ->add_option("--n", c.n, "problem dimension")
      ->required();
  sub("lasso", "solve a Lasso JSON file", cmd_lasso)
      ->add_option("input", c.input, "problem file")
      ->required();
  sub("svm", "train a soft-margin SVM from a JSON file", cmd_svm)
      ->add_option("input", c.input, "problem file")
      ->required();
  CLI::App* qp = sub("qp", "solve an l1-penalized QP JSON file", cmd_qp);
  qp->add_option("input", c.input, "problem file")->required();
  qp->add_option("--rho", c.rho, "override all penalty weights");
  CLI::App* demo = sub("demo", "run an application scenario, CSV output", cmd_demo);
  demo->add_option("which", c.which, "mpc-afti16 | rkf-threetank")->required();
  demo->add_option("--steps", c.steps, "simulation length");
  demo->add_option("--rho", c.rho, "outlier penalty (rkf)");
  CLI::App* bench = sub("bench", "median solve times, CSV output", cmd_bench);
  bench->add_option("--sizes", c.sizes, "problem sizes")->delimiter(',');
  bench->add_option("--reps", c.reps, "timed repetitions");
  CLI::App* trace = sub("trace", "duality gap and rank-1 traces, CSV output", cmd_trace);
  trace->add_option("--sizes", c.sizes, "problem sizes")->delimiter(',');
  trace->add_option("--eps-list", c.epsilons, "tolerances")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  for (const auto* s : app.get_subcommands()) c.command = s->get_name();
  try {
    return handlers.at(c.command)(c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_numerical() ? kExitNumeric : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace certiqp::cli
