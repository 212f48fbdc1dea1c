#include "certiqp/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "certiqp/approx_solver.hpp"
#include "certiqp/error.hpp"
#include "certiqp/exact_solver.hpp"

namespace certiqp {

namespace {

double norm_one(const Matrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kDimensionMismatch, what);
}

}  // namespace

Matrix matrix_exp(const Matrix& m) {
  require(m.square(), "matrix_exp needs a square matrix");
  const std::size_t n = m.rows();
  const double nrm = norm_one(m);
  int squarings = 0;
  if (nrm > 0.05) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.05)));
  const Matrix a = scaled(m, std::ldexp(1.0, -squarings));

  // Horner: I + a(I + a/2(I + a/3(...)))
  Matrix result = Matrix::identity(n);
  for (int k = 6; k >= 1; --k) {
    result = matmul(a, result);
    for (double& v : result.data()) v /= k;
    for (std::size_t i = 0; i < n; ++i) result(i, i) += 1.0;
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

std::pair<Matrix, Matrix> zoh_discretize(const Matrix& Ac, const Matrix& Bc, double Ts) {
  if (!(Ts > 0.0)) throw Error(ErrorKind::kInvalidParameter, "Ts must be positive");
  require(Ac.square() && Bc.rows() == Ac.rows(), "Ac must be nx x nx and Bc nx x nu");
  const std::size_t nx = Ac.rows();
  const std::size_t nu = Bc.cols();
  Matrix aug(nx + nu, nx + nu);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nx; ++j) aug(i, j) = Ac(i, j) * Ts;
    for (std::size_t j = 0; j < nu; ++j) aug(i, nx + j) = Bc(i, j) * Ts;
  }
  const Matrix e = matrix_exp(aug);
  Matrix a(nx, nx), b(nx, nu);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nx; ++j) a(i, j) = e(i, j);
    for (std::size_t j = 0; j < nu; ++j) b(i, j) = e(i, nx + j);
  }
  return {a, b};
}

double spectral_radius(const Matrix& a) {
  require(a.square(), "spectral_radius needs a square matrix");
  double top = a.max_abs();
  if (top == 0.0) return 0.0;
  // A^(2^m) = exp(log_scale)·b with max|b| = 1.
  Matrix b = scaled(a, 1.0 / top);
  double log_scale = std::log(top);
  const int rounds = 40;
  for (int m = 0; m < rounds; ++m) {
    b = matmul(b, b);
    const double c = b.max_abs();
    if (c == 0.0) return 0.0;
    b = scaled(b, 1.0 / c);
    log_scale = 2.0 * log_scale + std::log(c);
  }
  return std::exp(std::ldexp(log_scale, -rounds));
}

CondensedMpc condense_mpc(const LtiModel& model, const MpcConfig& cfg, std::span<const double> x0,
                          std::span<const double> u_prev, std::span<const double> r) {
  const std::size_t nx = model.nx(), nu = model.nu(), ny = model.ny();
  const std::size_t np = cfg.Np;
  const std::size_t nc = cfg.rows_per_step();
  require(model.B.rows() == nx && model.C.cols() == nx, "model dimensions disagree");
  require(x0.size() == nx && u_prev.size() == nu && r.size() == ny, "x0/u_prev/r sizes");
  require(cfg.wy.size() == ny && cfg.wdu.size() == nu, "weight sizes");
  require(cfg.Ex.rows() == nc && cfg.Eu.rows() == nc && cfg.Edu.rows() == nc, "constraint rows");
  require(nc == 0 || (cfg.Ex.cols() == nx && cfg.Eu.cols() == nu && cfg.Edu.cols() == nu),
          "constraint columns");
  require(cfg.rho.size() == nc, "one penalty weight per constraint row");
  if (np == 0) throw Error(ErrorKind::kInvalidParameter, "Np must be at least 1");
  for (double w : cfg.wdu) {
    if (!(w > 0.0)) throw Error(ErrorKind::kInvalidParameter, "wdu must be positive");
  }

  const std::size_t nv = nu * np;
  CondensedMpc out;
  StrictQP& qp = out.qp;
  qp.Q = Matrix(nv, nv);
  qp.q.assign(nv, 0.0);
  qp.G = Matrix(nc * np, nv);
  qp.g.assign(nc * np, 0.0);
  qp.rho.assign(nc * np, 0.0);
  for (std::size_t k = 0; k < np; ++k) {
    for (std::size_t i = 0; i < nu; ++i) qp.Q(k * nu + i, k * nu + i) = cfg.wdu[i] * cfg.wdu[i];
  }

  Vector c(x0.begin(), x0.end());  // free response x_k
  Matrix s(nx, nv);                // sensitivity of x_k to ΔU
  Matrix t(nu, nv);                // u_k = u_prev + t·ΔU
  for (std::size_t k = 0; k < np; ++k) {
    for (std::size_t i = 0; i < nu; ++i) t(i, k * nu + i) = 1.0;
    // x_{k+1} = A x_k + B u_k
    Vector c_next = add(matvec(model.A, c), matvec(model.B, u_prev));
    Matrix s_next = add(matmul(model.A, s), matmul(model.B, t));

    const Vector yc = matvec(model.C, c_next);
    const Matrix ys = matmul(model.C, s_next);
    for (std::size_t o = 0; o < ny; ++o) {
      const double w2 = cfg.wy[o] * cfg.wy[o];
      const double res = yc[o] - r[o];
      out.constant += 0.5 * w2 * res * res;
      for (std::size_t a = 0; a < nv; ++a) {
        const double ya = ys(o, a);
        if (ya == 0.0) continue;
        qp.q[a] += w2 * ya * res;
        for (std::size_t b = 0; b < nv; ++b) qp.Q(a, b) += w2 * ya * ys(o, b);
      }
    }

    if (nc > 0) {
      const Matrix rows = add(matmul(cfg.Ex, s_next), matmul(cfg.Eu, t));
      const Vector fixed = add(matvec(cfg.Ex, c_next), matvec(cfg.Eu, u_prev));
      for (std::size_t i = 0; i < nc; ++i) {
        const std::size_t row = k * nc + i;
        for (std::size_t a = 0; a < nv; ++a) qp.G(row, a) = rows(i, a);
        for (std::size_t j = 0; j < nu; ++j) qp.G(row, k * nu + j) += cfg.Edu(i, j);
        qp.g[row] = cfg.f[i] - fixed[i];
        qp.rho[row] = cfg.rho[i];
      }
    }
    c = std::move(c_next);
    s = std::move(s_next);
  }
  return out;
}

MpcStepResult mpc_step(const LtiModel& model, const MpcConfig& cfg, std::span<const double> x0,
                       std::span<const double> u_prev, std::span<const double> r,
                       const SolverOptions& opts, Algorithm algorithm) {
  const CondensedMpc cm = condense_mpc(model, cfg, x0, u_prev, r);
  const auto red = l1_penalty_to_boxqp(cm.qp);
  MpcStepResult out;
  out.box_dimension = red.problem.n();
  out.solve = algorithm == Algorithm::kExact ? solve_exact(red.problem, opts)
                                             : solve_approx(red.problem, opts);
  out.du = recover_l1(out.solve.z_star, red.recovery);
  out.u.assign(u_prev.begin(), u_prev.end());
  for (std::size_t i = 0; i < out.u.size(); ++i) out.u[i] += out.du[i];
  return out;
}

ClosedLoopRecord simulate_closed_loop(const LtiModel& model, const MpcConfig& cfg,
                                      std::span<const double> x0, std::size_t steps,
                                      const SolverOptions& opts, Algorithm algorithm) {
  ClosedLoopRecord rec;
  Vector x(x0.begin(), x0.end());
  Vector u(model.nu(), 0.0);
  rec.states.push_back(x);
  for (std::size_t t = 0; t < steps; ++t) {
    const Vector r = cfg.reference ? cfg.reference(t) : Vector(model.ny(), 0.0);
    const MpcStepResult step = mpc_step(model, cfg, x, u, r, opts, algorithm);
    rec.outputs.push_back(matvec(model.C, x));
    rec.inputs.push_back(step.u);
    rec.references.push_back(r);
    rec.stats.push_back({step.box_dimension, step.solve.iterations_run,
                         step.solve.n_iter_certified, step.solve.rank1_used,
                         step.solve.duality_gap});
    u = step.u;
    x = add(matvec(model.A, x), matvec(model.B, u));
    rec.states.push_back(x);
  }
  return rec;
}

Afti16Setup afti16_setup() {
  const Matrix ac{{-0.0151, -60.5651, 0.0, -32.174},
                  {-0.0001, -1.3411, 0.9929, 0.0},
                  {0.00018, 43.2541, -0.86939, 0.0},
                  {0.0, 0.0, 1.0, 0.0}};
  const Matrix bc{{-2.516, -13.136}, {-0.1689, -0.2514}, {-17.251, -1.5766}, {0.0, 0.0}};
  Afti16Setup s;
  s.model.Ts = 0.05;
  std::tie(s.model.A, s.model.B) = zoh_discretize(ac, bc, s.model.Ts);
  s.model.C = Matrix{{0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}};

  MpcConfig& c = s.config;
  c.Np = 5;
  c.wy = {10.0, 10.0};
  c.wdu = {0.1, 0.1};
  // rows: ±u1 ≤ 25, ±u2 ≤ 25, ±y1 ≤ 0.5, ±y2 ≤ 100
  c.Ex = Matrix(8, 4);
  c.Eu = Matrix(8, 2);
  c.Edu = Matrix(8, 2);
  c.f = {25.0, 25.0, 25.0, 25.0, 0.5, 0.5, 100.0, 100.0};
  c.rho = {1e4, 1e4, 1e4, 1e4, 1e3, 1e3, 1e3, 1e3};
  for (std::size_t i = 0; i < 2; ++i) {
    c.Eu(2 * i, i) = 1.0;
    c.Eu(2 * i + 1, i) = -1.0;
    for (std::size_t j = 0; j < 4; ++j) {
      c.Ex(4 + 2 * i, j) = s.model.C(i, j);
      c.Ex(4 + 2 * i + 1, j) = -s.model.C(i, j);
    }
  }
  c.reference = [](std::size_t) { return Vector{0.0, 10.0}; };
  s.x0 = {0.0, 5.0, 0.0, 0.0};
  return s;
}

}  // namespace certiqp
