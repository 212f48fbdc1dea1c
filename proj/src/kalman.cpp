#include "certiqp/kalman.hpp"

#include <cmath>
#include <random>

#include "certiqp/approx_solver.hpp"
#include "certiqp/error.hpp"
#include "certiqp/exact_solver.hpp"
#include "certiqp/transforms.hpp"

namespace certiqp {

namespace {

Matrix symmetrize(const Matrix& a) {
  Matrix s = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

Matrix spd_inverse_regularized(const Matrix& p) {
  try {
    return spd_inverse(p);
  } catch (const Error&) {
    Matrix shifted = p;
    for (std::size_t i = 0; i < p.rows(); ++i) shifted(i, i) += 1e-10;
    return spd_inverse(shifted);
  }
}

// Gain L = P Cᵀ (C P Cᵀ + R)⁻¹.
Matrix kalman_gain(const Matrix& p, const LtiModel& model, const RkfConfig& cfg) {
  const Matrix pct = matmul(p, transpose(model.C));
  const Matrix s = symmetrize(add(matmul(model.C, pct), cfg.Rn));
  return matmul(pct, spd_inverse(s));
}

KfState corrected(const KfState& st, const Matrix& gain, std::span<const double> innovation,
                  const LtiModel& model) {
  KfState out;
  out.xhat = add(st.xhat, matvec(gain, innovation));
  Matrix ilc = scaled(matmul(gain, model.C), -1.0);
  for (std::size_t i = 0; i < ilc.rows(); ++i) ilc(i, i) += 1.0;
  out.P = symmetrize(matmul(ilc, st.P));
  return out;
}

}  // namespace

KfState kf_predict(const KfState& st, const LtiModel& model, std::span<const double> u,
                   const RkfConfig& cfg) {
  KfState out;
  out.xhat = add(matvec(model.A, st.xhat), matvec(model.B, u));
  out.P = symmetrize(add(matmul(matmul(model.A, st.P), transpose(model.A)), cfg.Qn));
  return out;
}

KfState kf_update(const KfState& st, std::span<const double> y, const LtiModel& model,
                  const RkfConfig& cfg) {
  const Matrix gain = kalman_gain(st.P, model, cfg);
  const Vector e = subtract(y, matvec(model.C, st.xhat));
  return corrected(st, gain, e, model);
}

Matrix rkf_weight(const KfState& st, const LtiModel& model, const RkfConfig& cfg) {
  const std::size_t ny = model.ny();
  const Matrix gain = kalman_gain(st.P, model, cfg);
  Matrix icl = scaled(matmul(model.C, gain), -1.0);
  for (std::size_t i = 0; i < ny; ++i) icl(i, i) += 1.0;
  const Matrix rinv = spd_inverse(cfg.Rn);
  const Matrix pinv = spd_inverse_regularized(st.P);
  const Matrix w = add(matmul(matmul(transpose(icl), rinv), icl),
                       matmul(matmul(transpose(gain), pinv), gain));
  return symmetrize(w);
}

RkfUpdate rkf_update(const KfState& st, std::span<const double> y, const LtiModel& model,
                     const RkfConfig& cfg) {
  if (!(cfg.rho >= 0.0)) throw Error(ErrorKind::kInvalidParameter, "rho must be nonnegative");
  const std::size_t ny = model.ny();
  const Matrix gain = kalman_gain(st.P, model, cfg);
  const Vector e = subtract(y, matvec(model.C, st.xhat));

  RkfUpdate out;
  out.box_dimension = ny;
  if (cfg.rho == 0.0) {
    // Without regularization the outlier absorbs the whole innovation.
    out.outlier = e;
  } else {
    const CholeskyFactor lw = cholesky_factor(rkf_weight(st, model, cfg));
    LassoProblem lasso;
    lasso.A = transpose(lw.lower);
    lasso.b = matvec(lasso.A, e);
    lasso.weight = 0.5 * cfg.rho;
    const auto red = lasso_to_boxqp(lasso);
    out.solve = cfg.algorithm == Algorithm::kExact ? solve_exact(red.problem, cfg.solver)
                                                   : solve_approx(red.problem, cfg.solver);
    out.outlier = recover_lasso(out.solve.z_star, red.recovery);
  }
  out.state = corrected(st, gain, subtract(e, out.outlier), model);
  return out;
}

ThreeTankSetup three_tank_setup() {
  ThreeTankSetup s;
  s.model.A = Matrix{{0.9, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.1, 0.5, 0.8}};
  s.model.B = Matrix{{0.5}, {0.5}, {0.0}};
  s.model.C = Matrix{{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
  s.model.Ts = 1.0;
  s.config.Qn = scaled(Matrix::identity(3), 1e-2);
  s.config.Rn = scaled(Matrix::identity(2), 1e-2);
  s.config.rho = 20.0;
  s.x0 = {0.0, 0.0, 0.0};
  s.P0 = Matrix::identity(3);
  return s;
}

Vector rms_error(const std::vector<Vector>& truth, const std::vector<Vector>& estimates) {
  if (truth.size() != estimates.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "truth and estimates differ in length");
  }
  if (truth.empty()) return {};
  const std::size_t nx = truth.front().size();
  Vector acc(nx, 0.0);
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (truth[t].size() != nx || estimates[t].size() != nx) {
      throw Error(ErrorKind::kDimensionMismatch, "inconsistent state dimension");
    }
    for (std::size_t i = 0; i < nx; ++i) {
      const double d = truth[t][i] - estimates[t][i];
      acc[i] += d * d;
    }
  }
  for (double& v : acc) v = std::sqrt(v / static_cast<double>(truth.size()));
  return acc;
}

namespace {

// Lower-triangular factor of a covariance, zero-safe for Q = 0.
Matrix noise_factor(const Matrix& cov) {
  if (cov.max_abs() == 0.0) return Matrix(cov.rows(), cov.cols());
  return cholesky_factor(cov).lower;
}

Vector gaussian(std::mt19937_64& rng, const Matrix& factor) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector w(factor.cols());
  for (double& v : w) v = normal(rng);
  return matvec(factor, w);
}

}  // namespace

RkfRun simulate_rkf(const ThreeTankSetup& setup, std::size_t steps, std::uint64_t seed,
                    const OutlierSpec& outliers) {
  const LtiModel& m = setup.model;
  const RkfConfig& cfg = setup.config;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Matrix qf = noise_factor(cfg.Qn);
  const Matrix rf = noise_factor(cfg.Rn);

  RkfRun run;
  Vector x = setup.x0;
  KfState kf{setup.x0, setup.P0};
  KfState rkf = kf;
  Vector u_prev(m.nu(), 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    if (t > 0) {
      x = add(add(matvec(m.A, x), matvec(m.B, u_prev)), gaussian(rng, qf));
      kf = kf_predict(kf, m, u_prev, cfg);
      rkf = kf_predict(rkf, m, u_prev, cfg);
    }
    Vector y = add(matvec(m.C, x), gaussian(rng, rf));
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double draw = unif(rng);
      const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
      if (draw < outliers.probability) {
        y[i] += sign * outliers.magnitude * std::sqrt(cfg.Rn(i, i));
      }
    }
    kf = kf_update(kf, y, m, cfg);
    const RkfUpdate r = rkf_update(rkf, y, m, cfg);
    rkf = r.state;

    run.truth.push_back(x);
    run.kf.push_back(kf.xhat);
    run.rkf.push_back(rkf.xhat);
    run.measurements.push_back(y);
    run.iterations.push_back(r.solve.iterations_run);
    run.rank1.push_back(r.solve.rank1_used);
    run.gaps.push_back(r.solve.duality_gap);

    Vector u(m.nu(), std::sin(0.1 * static_cast<double>(t)));
    run.inputs.push_back(u);
    u_prev = std::move(u);
  }
  run.rms_kf = rms_error(run.truth, run.kf);
  run.rms_rkf = rms_error(run.truth, run.rkf);
  return run;
}

}  // namespace certiqp
