#pragma once

// Brute-force ground truth on truncated lattices: a finite window with
// open (absorbing) boundaries, dense Lyapunov solves, fixed-step RK4
// integration of the Gramian ODE, and simulation of the minimum-energy
// transfer. Everything here is deliberately simple and verifiable; it
// exists to certify the spectral and closed-form routes at desk scale.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "latgram/lattice.hpp"
#include "latgram/linalg.hpp"
#include "latgram/metrics.hpp"

namespace latgram {
namespace finite {

/// Truncated lattice window as dense system matrices.
struct FiniteSystem {
  int radius = 0;
  std::vector<NodeIndex> node_coords;  // window sites, row-major over coordinates
  std::vector<NodeIndex> drivers;
  Matrix a;  // n x n drift
  Matrix b;  // n x n_d unit input columns

  std::size_t size() const { return node_coords.size(); }

  /// Row of a window site, or -1 when the site lies outside the window.
  int index_of(const NodeIndex& coord) const {
    const int side = 2 * radius + 1;
    int idx = 0;
    for (int c : coord) {
      if (c < -radius || c > radius) return -1;
      idx = idx * side + (c + radius);
    }
    return idx;
  }
};

/// Cuts the window {-radius..radius}^d out of the lattice with open
/// boundaries (edges leaving the window are dropped) and unit input
/// columns at the driver rows.
inline FiniteSystem truncate(const LatticeSpec& spec, int radius,
                             const std::vector<NodeIndex>& drivers) {
  if (radius < 1) throw std::invalid_argument("truncate: radius must be positive");
  if (drivers.empty()) throw std::invalid_argument("truncate: need at least one driver");

  FiniteSystem sys;
  sys.radius = radius;
  sys.drivers = drivers;
  const auto d = static_cast<std::size_t>(spec.d);
  const int side = 2 * radius + 1;
  std::size_t n = 1;
  for (std::size_t c = 0; c < d; ++c) n *= static_cast<std::size_t>(side);

  sys.node_coords.resize(n, NodeIndex(d, 0));
  std::vector<int> idx(d, -radius);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t c = 0; c < d; ++c) sys.node_coords[g][c] = idx[c];
    for (std::size_t c = d; c-- > 0;) {
      if (++idx[c] <= radius) break;
      idx[c] = -radius;
    }
  }

  sys.a = Matrix(n, n);
  NodeIndex neighbor(d);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t o = 0; o < spec.offsets.size(); ++o) {
      for (std::size_t c = 0; c < d; ++c) neighbor[c] = sys.node_coords[g][c] + spec.offsets[o][c];
      const int col = sys.index_of(neighbor);
      if (col >= 0) sys.a(g, static_cast<std::size_t>(col)) += spec.weights[o];
    }
  }

  sys.b = Matrix(n, drivers.size());
  for (std::size_t k = 0; k < drivers.size(); ++k) {
    if (static_cast<int>(drivers[k].size()) != spec.d)
      throw std::invalid_argument("truncate: driver dimension mismatch");
    const int row = sys.index_of(drivers[k]);
    if (row < 0)
      throw std::invalid_argument("truncate: driver " + to_string(drivers[k]) +
                                  " lies outside the window");
    sys.b(static_cast<std::size_t>(row), k) = 1.0;
  }
  return sys;
}

namespace detail {

/// Nonzero pattern of a dense matrix, for O(nnz * n) left-multiplication.
struct SparseOp {
  struct Entry {
    std::size_t r, c;
    double v;
  };
  std::size_t n = 0;
  std::vector<Entry> entries;

  explicit SparseOp(const Matrix& a) : n(a.rows()) {
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (a(i, j) != 0.0) entries.push_back({i, j, a(i, j)});
  }

  // out = A * w
  void apply(const Matrix& w, Matrix& out) const {
    out *= 0.0;
    for (const auto& e : entries) {
      const double* src = w.row(e.c);
      double* dst = out.row(e.r);
      for (std::size_t j = 0; j < n; ++j) dst[j] += e.v * src[j];
    }
  }

  // out = A^T * x for a vector
  void apply_transpose(const std::vector<double>& x, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& e : entries) out[e.c] += e.v * x[e.r];
  }

  void apply(const std::vector<double>& x, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& e : entries) out[e.r] += e.v * x[e.c];
  }
};

inline double inf_norm(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) row += std::fabs(a(i, j));
    best = std::max(best, row);
  }
  return best;
}

/// exp(A h) by plain Taylor series; callers keep ||A h|| <= 0.5.
inline Matrix expm_small(const Matrix& a, double h) {
  const std::size_t n = a.rows();
  Matrix e = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 24; ++k) {
    Matrix next = matmul(term, a);
    next *= h / k;
    term = std::move(next);
    e += term;
    if (term.max_abs() < 1e-20) break;
  }
  return e;
}

/// Estimate of max Re lambda(A) for a general matrix: grow exp(A h) by
/// repeated squaring with norm renormalization. Tight enough to decide
/// Hurwitz-ness with a sensible margin.
inline double spectral_abscissa_estimate(const Matrix& a) {
  if (is_symmetric(a)) return jacobi_eigen(a, false).values.back();
  const double scale = std::max(inf_norm(a), 1e-12);
  const double h = 0.5 / scale;
  Matrix t = expm_small(a, h);
  double acc = 0.0;
  double pow2 = 1.0;
  for (int k = 1; k <= 40; ++k) {
    t = matmul(t, t);
    const double nf = t.frobenius_norm();
    if (!(nf > 0.0)) return -std::numeric_limits<double>::infinity();
    t *= 1.0 / nf;
    pow2 *= 0.5;
    acc += pow2 * std::log(nf);
  }
  return acc / h;
}

}  // namespace detail

/// Steady-state controllability Gramian: solves A W + W A^T + B B^T = 0.
/// Symmetric drift matrices (every lattice in the acceptance scope) go
/// through the eigendecomposition; general matrices fall back to the dense
/// Kronecker solve, capped at 40 nodes. The residual is verified to
/// 1e-10 * ||B B^T||_F before returning.
inline Matrix lyapunov_steady(const FiniteSystem& sys) {
  const std::size_t n = sys.size();
  const Matrix q = matmul(sys.b, sys.b.transposed());

  Matrix w;
  if (is_symmetric(sys.a)) {
    const auto eig = jacobi_eigen(sys.a, /*want_vectors=*/true);
    if (!(eig.values.back() < 0.0))
      throw std::domain_error("lyapunov_steady: drift matrix is not Hurwitz (max eigenvalue " +
                              std::to_string(eig.values.back()) + ")");
    const Matrix g = matmul(eig.vectors.transposed(), sys.b);  // n x n_d
    Matrix x(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double num = 0.0;
        for (std::size_t k = 0; k < g.cols(); ++k) num += g(i, k) * g(j, k);
        x(i, j) = num / (-(eig.values[i] + eig.values[j]));
      }
    }
    w = matmul(eig.vectors, matmul(x, eig.vectors.transposed()));
  } else {
    const double abscissa = detail::spectral_abscissa_estimate(sys.a);
    if (!(abscissa < -1e-9))
      throw std::domain_error(
          "lyapunov_steady: drift matrix is not Hurwitz (estimated max Re eigenvalue " +
          std::to_string(abscissa) + ")");
    if (n > 40)
      throw std::invalid_argument(
          "lyapunov_steady: non-symmetric window larger than 40 nodes; the dense n^2 x n^2 "
          "Kronecker solve is capped there");
    Matrix m(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        // vec is column-stacking: vec(AW) = (I (x) A) vec W, vec(W A^T) = (A (x) I) vec W
        for (std::size_t k = 0; k < n; ++k) {
          m(j * n + i, j * n + k) += sys.a(i, k);
          m(j * n + i, k * n + i) += sys.a(j, k);
        }
      }
    std::vector<double> rhs(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rhs[j * n + i] = -q(i, j);
    const auto x = lu_solve(lu_factor(std::move(m)), rhs);
    w = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) = x[j * n + i];
    // symmetrize away solver roundoff
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = 0.5 * (w(i, j) + w(j, i));
        w(i, j) = v;
        w(j, i) = v;
      }
  }

  Matrix residual = matmul(sys.a, w);
  residual += matmul(w, sys.a.transposed());
  residual += q;
  if (residual.frobenius_norm() > 1e-10 * std::max(q.frobenius_norm(), 1e-300))
    throw std::runtime_error("lyapunov_steady: residual exceeds 1e-10 * ||B B^T||");
  return w;
}

namespace detail {

inline Matrix rk4_gramian(const SparseOp& a_op, const Matrix& q, double t, int steps) {
  const std::size_t n = a_op.n;
  Matrix w(n, n), t1(n, n), k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
  const double h = t / steps;

  // dW/dt = A W + (A W)^T + B B^T; W stays symmetric throughout
  auto deriv = [&](const Matrix& win, Matrix& out) {
    a_op.apply(win, t1);
    out = q;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += t1(i, j) + t1(j, i);
  };
  auto saxpy = [&](const Matrix& base, double c, const Matrix& dir, Matrix& out) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = base(i, j) + c * dir(i, j);
  };

  for (int step = 0; step < steps; ++step) {
    deriv(w, k1);
    saxpy(w, 0.5 * h, k1, tmp);
    deriv(tmp, k2);
    saxpy(w, 0.5 * h, k2, tmp);
    deriv(tmp, k3);
    saxpy(w, h, k3, tmp);
    deriv(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        w(i, j) += h / 6.0 * (k1(i, j) + 2.0 * k2(i, j) + 2.0 * k3(i, j) + k4(i, j));
  }
  return w;
}

}  // namespace detail

/// Finite-horizon Gramian W(t) from W(0) = 0 by fixed-step RK4. The step
/// count doubles until halving the step changes no entry by more than
/// 1e-8 (the convergence gate); pass steps = 0 for an automatic start.
/// converged_steps, when given, receives the accepted step count.
inline Matrix gramian_ode(const FiniteSystem& sys, double t, int steps = 0,
                          int* converged_steps = nullptr) {
  if (!(t >= 0.0)) throw std::invalid_argument("gramian_ode: time must be nonnegative");
  const std::size_t n = sys.size();
  if (t == 0.0) {
    if (converged_steps) *converged_steps = 0;
    return Matrix(n, n);
  }
  const detail::SparseOp a_op(sys.a);
  const Matrix q = matmul(sys.b, sys.b.transposed());
  if (steps <= 0) steps = std::max(200, static_cast<int>(std::ceil(100.0 * t)));

  Matrix coarse = detail::rk4_gramian(a_op, q, t, steps);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix fine = detail::rk4_gramian(a_op, q, t, steps * 2);
    if (max_abs_diff(coarse, fine) < 1e-8) {
      if (converged_steps) *converged_steps = steps * 2;
      return fine;
    }
    steps *= 2;
    coarse = std::move(fine);
  }
  throw std::runtime_error("gramian_ode: step-halving gate not met after 8 refinements");
}

/// Result of a simulated minimum-energy transfer.
struct ControlRun {
  double t_f = 0.0;
  std::vector<double> x0;
  std::vector<double> x_f;           // prescribed target values
  std::vector<NodeIndex> targets;
  double energy = 0.0;               // measured 1/2 int sum u^2
  double final_error = 0.0;          // ||x_targets(t_f) - x_f||_2
  double j_star = 0.0;               // predicted 1/2 b^T Wbar^-1 b
};

namespace detail {

/// RK4 simulation of x' = A x + B u with u sampled on the half-step grid
/// (2*steps+1 columns). Returns the final state; energy_out gets
/// 1/2 int ||u||^2 by composite Simpson on the same grid.
inline std::vector<double> simulate_input(const FiniteSystem& sys, const std::vector<double>& x0,
                                          const Matrix& u_half_grid, double t_f, int steps,
                                          double* energy_out) {
  const std::size_t n = sys.size();
  const std::size_t nd = sys.b.cols();
  const SparseOp a_op(sys.a);
  const double h = t_f / steps;
  std::vector<double> x = x0, ax(n), k1(n), k2(n), k3(n), k4(n), xt(n);

  auto deriv = [&](const std::vector<double>& xin, std::size_t ucol, std::vector<double>& out) {
    a_op.apply(xin, out);
    for (std::size_t a = 0; a < nd; ++a) {
      const double ua = u_half_grid(a, ucol);
      if (ua == 0.0) continue;
      for (std::size_t r = 0; r < n; ++r) out[r] += sys.b(r, a) * ua;
    }
  };

  for (int step = 0; step < steps; ++step) {
    const std::size_t c0 = 2 * static_cast<std::size_t>(step);
    deriv(x, c0, k1);
    for (std::size_t r = 0; r < n; ++r) xt[r] = x[r] + 0.5 * h * k1[r];
    deriv(xt, c0 + 1, k2);
    for (std::size_t r = 0; r < n; ++r) xt[r] = x[r] + 0.5 * h * k2[r];
    deriv(xt, c0 + 1, k3);
    for (std::size_t r = 0; r < n; ++r) xt[r] = x[r] + h * k3[r];
    deriv(xt, c0 + 2, k4);
    for (std::size_t r = 0; r < n; ++r)
      x[r] += h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
  }

  if (energy_out) {
    const std::size_t cols = u_half_grid.cols();
    auto usq = [&](std::size_t c) {
      double s = 0.0;
      for (std::size_t a = 0; a < nd; ++a) s += u_half_grid(a, c) * u_half_grid(a, c);
      return s;
    };
    double simpson = usq(0) + usq(cols - 1);
    for (std::size_t c = 1; c + 1 < cols; ++c) simpson += (c % 2 == 1 ? 4.0 : 2.0) * usq(c);
    *energy_out = 0.5 * simpson * (0.5 * h) / 3.0;
  }
  return x;
}

}  // namespace detail

/// Simulates the Gramian-based minimum-energy input that steers the target
/// outputs from x0 to x_f over [0, t_f]: u(t) = B^T e^{A^T (t_f - t)} C^T
/// Wbar(t_f)^-1 b. Reports the measured input energy next to the
/// predicted optimal cost and the achieved endpoint error.
inline ControlRun min_energy_control(const FiniteSystem& sys, const std::vector<double>& x0,
                                     const std::vector<NodeIndex>& targets,
                                     const std::vector<double>& x_f, double t_f, int steps = 0) {
  const std::size_t n = sys.size();
  if (x0.size() != n) throw std::invalid_argument("min_energy_control: x0 has wrong length");
  if (x_f.size() != targets.size())
    throw std::invalid_argument("min_energy_control: x_f must match the target set");
  if (!(t_f > 0.0)) throw std::invalid_argument("min_energy_control: horizon must be positive");

  std::vector<std::size_t> rows;
  rows.reserve(targets.size());
  for (const auto& tgt : targets) {
    const int r = sys.index_of(tgt);
    if (r < 0)
      throw std::invalid_argument("min_energy_control: target " + to_string(tgt) +
                                  " lies outside the window");
    rows.push_back(static_cast<std::size_t>(r));
  }

  int used_steps = 0;
  const Matrix w_full = gramian_ode(sys, t_f, steps, &used_steps);
  const std::size_t nt = rows.size();
  Matrix wbar(nt, nt);
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nt; ++j) wbar(i, j) = w_full(rows[i], rows[j]);

  Matrix l;
  if (!cholesky(wbar, l)) {
    const auto ev = jacobi_eigen(wbar, false).values;
    throw OutputUncontrollableError("min_energy_control: finite-horizon output Gramian singular",
                                    ev.front());
  }

  const detail::SparseOp a_op(sys.a);
  const double h = t_f / used_steps;
  const std::size_t half_cols = 2 * static_cast<std::size_t>(used_steps) + 1;

  // free response on the same grid (zero input)
  Matrix zero_u(sys.b.cols(), half_cols);
  double ignored = 0.0;
  const auto x_free = detail::simulate_input(sys, x0, zero_u, t_f, used_steps, &ignored);

  std::vector<double> b(nt);
  for (std::size_t k = 0; k < nt; ++k) b[k] = x_f[k] - x_free[rows[k]];
  const auto eta = cholesky_solve(l, b);
  double j_star = 0.0;
  for (std::size_t k = 0; k < nt; ++k) j_star += 0.5 * b[k] * eta[k];

  // mu(tau) = e^{A^T tau} C^T eta on the half-step grid, by RK4 in tau
  std::vector<double> mu(n, 0.0), k1(n), k2(n), k3(n), k4(n), mt(n);
  for (std::size_t k = 0; k < nt; ++k) mu[rows[k]] = eta[k];
  Matrix mu_grid(n, half_cols);
  for (std::size_t r = 0; r < n; ++r) mu_grid(r, 0) = mu[r];
  const double hh = 0.5 * h;
  for (std::size_t c = 1; c < half_cols; ++c) {
    a_op.apply_transpose(mu, k1);
    for (std::size_t r = 0; r < n; ++r) mt[r] = mu[r] + 0.5 * hh * k1[r];
    a_op.apply_transpose(mt, k2);
    for (std::size_t r = 0; r < n; ++r) mt[r] = mu[r] + 0.5 * hh * k2[r];
    a_op.apply_transpose(mt, k3);
    for (std::size_t r = 0; r < n; ++r) mt[r] = mu[r] + hh * k3[r];
    a_op.apply_transpose(mt, k4);
    for (std::size_t r = 0; r < n; ++r)
      mu[r] += hh / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
    for (std::size_t r = 0; r < n; ++r) mu_grid(r, c) = mu[r];
  }

  // u(t) = B^T mu(t_f - t); time index c maps to tau index (last - c)
  Matrix u(sys.b.cols(), half_cols);
  for (std::size_t c = 0; c < half_cols; ++c) {
    const std::size_t tau_c = half_cols - 1 - c;
    for (std::size_t a = 0; a < sys.b.cols(); ++a) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        if (sys.b(r, a) != 0.0) s += sys.b(r, a) * mu_grid(r, tau_c);
      u(a, c) = s;
    }
  }

  ControlRun run;
  run.t_f = t_f;
  run.x0 = x0;
  run.x_f = x_f;
  run.targets = targets;
  run.j_star = j_star;
  const auto x_end = detail::simulate_input(sys, x0, u, t_f, used_steps, &run.energy);
  double err2 = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const double e = x_end[rows[k]] - x_f[k];
    err2 += e * e;
  }
  run.final_error = std::sqrt(err2);
  return run;
}

}  // namespace finite
}  // namespace latgram
