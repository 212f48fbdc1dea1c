#include "certiqp/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "certiqp/error.hpp"

namespace certiqp {

namespace {

void require_dims(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kDimensionMismatch, what);
}

// Q⁻¹·Bᵀ column by column, i.e. the solution X of Q·X = Bᵀ.
Matrix solve_columns(const CholeskyFactor& f, const Matrix& b) {
  Matrix x(f.n, b.rows());
  Vector col(f.n);
  for (std::size_t r = 0; r < b.rows(); ++r) {
    const auto row = b.row(r);
    std::copy(row.begin(), row.end(), col.begin());
    cholesky_solve_in_place(f, col);
    for (std::size_t i = 0; i < f.n; ++i) x(i, r) = col[i];
  }
  return x;
}

Matrix symmetrized(const Matrix& a) {
  Matrix s = a;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

}  // namespace

double StrictQP::penalized_objective(std::span<const double> y) const {
  const Vector qy = matvec(Q, y);
  const Vector gy = matvec(G, y);
  double penalty = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) penalty += rho[i] * std::max(0.0, gy[i] - g[i]);
  return 0.5 * dot(y, qy) + dot(q, y) + penalty;
}

double LassoProblem::objective(std::span<const double> x) const {
  const Vector r = subtract(matvec(A, x), b);
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  return 0.5 * dot(r, r) + weight * l1;
}

Reduction<L1Recovery> l1_penalty_to_boxqp(const StrictQP& p) {
  const std::size_t ny = p.q.size();
  const std::size_t ng = p.g.size();
  require_dims(p.Q.rows() == ny && p.Q.cols() == ny, "Q must be ny x ny");
  require_dims(p.G.rows() == ng && p.G.cols() == ny, "G must be ng x ny");
  require_dims(p.rho.size() == ng, "rho must have ng entries");
  for (double r : p.rho) {
    if (!(r > 0.0)) throw Error(ErrorKind::kInvalidParameter, "penalty weights must be positive");
  }

  Reduction<L1Recovery> out;
  out.recovery.q_factor = cholesky_factor(p.Q);
  const Matrix qinv_gt = solve_columns(out.recovery.q_factor, p.G);  // ny x ng
  const Matrix gqg = symmetrized(matmul(p.G, qinv_gt));             // GQ⁻¹Gᵀ
  const Vector qinv_q = cholesky_solve(out.recovery.q_factor, p.q);
  const Vector gqq = matvec(p.G, qinv_q);
  const Vector gqg_rho = matvec(gqg, p.rho);

  out.problem.H = Matrix(ng, ng);
  out.problem.h.resize(ng);
  for (std::size_t i = 0; i < ng; ++i) {
    for (std::size_t j = 0; j < ng; ++j) out.problem.H(i, j) = p.rho[i] * gqg(i, j) * p.rho[j];
    out.problem.h[i] = p.rho[i] * (gqg_rho[i] + 2.0 * (gqq[i] + p.g[i]));
  }
  out.recovery.G = p.G;
  out.recovery.q = p.q;
  out.recovery.rho = p.rho;
  return out;
}

Vector recover_l1(std::span<const double> z_star, const L1Recovery& r) {
  require_dims(z_star.size() == r.rho.size(), "z* has the wrong length");
  Vector w(z_star.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.5 * (r.rho[i] * z_star[i] + r.rho[i]);
  Vector rhs = matvec_transposed(r.G, w);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -(rhs[i] + r.q[i]);
  cholesky_solve_in_place(r.q_factor, rhs);
  return rhs;
}

Reduction<LassoRecovery> lasso_to_boxqp(const LassoProblem& p) {
  const std::size_t m = p.A.rows();
  const std::size_t n = p.A.cols();
  require_dims(p.b.size() == m, "b must have one entry per row of A");
  if (m < n) throw Error(ErrorKind::kRankDeficient, "Lasso reduction needs m >= n");
  if (!(p.weight > 0.0)) throw Error(ErrorKind::kInvalidParameter, "lambda must be positive");

  const Matrix at = transpose(p.A);
  const Matrix ata = symmetrized(matmul(at, p.A));
  Reduction<LassoRecovery> out;
  try {
    out.recovery.ata_factor = cholesky_factor(ata);
  } catch (const Error&) {
    throw Error(ErrorKind::kRankDeficient, "AᵀA is not positive definite");
  }
  out.recovery.atb = matvec(at, p.b);
  out.recovery.weight = p.weight;

  Matrix inv = spd_inverse(ata);
  out.problem.H = scaled(inv, p.weight);
  out.problem.h = scaled(cholesky_solve(out.recovery.ata_factor, out.recovery.atb), -1.0);
  return out;
}

Vector recover_lasso(std::span<const double> z_star, const LassoRecovery& r) {
  require_dims(z_star.size() == r.atb.size(), "z* has the wrong length");
  Vector rhs(r.atb.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = r.atb[i] - r.weight * z_star[i];
  cholesky_solve_in_place(r.ata_factor, rhs);
  return rhs;
}

Reduction<SvmRecovery> svm_to_boxqp(const SvmProblem& p) {
  const std::size_t m = p.labels.size();
  require_dims(p.gram.rows() == m && p.gram.cols() == m, "gram must be m x m");
  for (double y : p.labels) {
    if (y != 1.0 && y != -1.0) throw Error(ErrorKind::kInvalidLabels, "labels must be +1 or -1");
  }
  if (!(p.rho > 0.0)) throw Error(ErrorKind::kInvalidParameter, "rho must be positive");

  const double half = 0.5 * p.rho;
  Reduction<SvmRecovery> out;
  out.problem.H = Matrix(m, m);
  out.problem.h.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double pij = p.labels[i] * p.labels[j] * p.gram(i, j);
      out.problem.H(i, j) = half * half * pij;
      row_sum += pij;
    }
    out.problem.h[i] = half * (half * row_sum - 1.0);
  }
  out.problem.H = symmetrized(out.problem.H);
  out.recovery.labels = p.labels;
  out.recovery.rho = p.rho;
  return out;
}

Vector recover_svm_duals(std::span<const double> z_star, const SvmRecovery& r) {
  require_dims(z_star.size() == r.labels.size(), "z* has the wrong length");
  Vector z(z_star.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = std::clamp(0.5 * r.rho * (z_star[i] + 1.0), 0.0, r.rho);
  }
  return z;
}

Reduction<GenBoxRecovery> genbox_to_unitbox(const Matrix& H, std::span<const double> h,
                                            std::span<const double> l,
                                            std::span<const double> u) {
  const std::size_t n = h.size();
  require_dims(H.rows() == n && H.cols() == n, "H must be n x n");
  require_dims(l.size() == n && u.size() == n, "bounds must have n entries");
  Reduction<GenBoxRecovery> out;
  out.recovery.half_width.resize(n);
  out.recovery.center.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(l[i] < u[i])) {
      throw Error(ErrorKind::kInvalidBounds, "l[" + std::to_string(i) + "] >= u[" +
                                                 std::to_string(i) + "]");
    }
    out.recovery.half_width[i] = 0.5 * (u[i] - l[i]);
    out.recovery.center[i] = 0.5 * (u[i] + l[i]);
  }
  const auto& dw = out.recovery.half_width;
  const Vector hc = matvec(H, out.recovery.center);
  out.problem.H = Matrix(n, n);
  out.problem.h.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.problem.H(i, j) = dw[i] * H(i, j) * dw[j];
    out.problem.h[i] = dw[i] * (hc[i] + h[i]);
  }
  return out;
}

Vector recover_genbox(std::span<const double> z_star, const GenBoxRecovery& r) {
  require_dims(z_star.size() == r.center.size(), "z* has the wrong length");
  Vector y(z_star.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = r.half_width[i] * z_star[i] + r.center[i];
  return y;
}

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
  if (kind == KernelKind::kLinear) return dot(a, b);
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-sq / (2.0 * sigma * sigma));
}

Matrix augmented_gram(const Matrix& X, const Kernel& k) {
  const std::size_t m = X.rows();
  Matrix gram(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = k(X.row(i), X.row(j)) + 1.0;
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return gram;
}

SvmModel make_svm_model(const Matrix& X, std::span<const double> labels,
                        std::span<const double> duals, const Kernel& k) {
  require_dims(labels.size() == X.rows() && duals.size() == X.rows(),
               "one label and one dual per instance");
  SvmModel model{X, Vector(labels.size()), k};
  for (std::size_t i = 0; i < labels.size(); ++i) model.coeffs[i] = duals[i] * labels[i];
  return model;
}

double SvmModel::decision(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) s += coeffs[i] * (kernel(x, X.row(i)) + 1.0);
  return s;
}

Vector linear_svm_weights(const SvmModel& m) {
  if (m.kernel.kind != KernelKind::kLinear) {
    throw Error(ErrorKind::kInvalidParameter, "explicit weights exist only for the linear kernel");
  }
  Vector w(m.X.cols() + 1, 0.0);
  for (std::size_t i = 0; i < m.X.rows(); ++i) {
    for (std::size_t j = 0; j < m.X.cols(); ++j) w[j] += m.coeffs[i] * m.X(i, j);
    w.back() += m.coeffs[i];
  }
  return w;
}

}  // namespace certiqp
