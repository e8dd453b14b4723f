#pragma once

// Tensor-product quadrature building blocks: Gauss-Legendre rules at any of
// the supported precisions, the uniform (trapezoid) rule for periodic
// integrands, and a compensated accumulator.

#include <stdexcept>
#include <vector>

#include "latgram/precision.hpp"

namespace latgram {

struct QuadratureConfig {
  /// Points per axis; 0 selects the per-dimension default (64 for d = 1,
  /// 24 for d >= 2) at the call site.
  int points_per_dim = 0;
  enum class Scheme { GaussLegendre, Trapezoid } scheme = Scheme::GaussLegendre;
};

inline void validate(const QuadratureConfig& q) {
  if (q.points_per_dim != 0 && q.points_per_dim < 4)
    throw std::invalid_argument("quadrature: points_per_dim must be >= 4");
}

namespace quadrature {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// ascending nodes. Double-precision Newton seeds are polished in the
/// requested scalar type, so the rule is accurate to the type's roundoff.
template <class Real>
void gauss_legendre(int n, std::vector<Real>& nodes, std::vector<Real>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  nodes.assign(n, Real(0.0));
  weights.assign(n, Real(0.0));
  const Real one(1.0), two(2.0);
  for (int k = 0; k < n; ++k) {
    // Tricomi initial guess for the k-th root (descending), then Newton.
    double x0 = std::cos(3.14159265358979323846 * (k + 0.75) / (n + 0.5));
    Real x(x0), dp(0.0);
    for (int iter = 0; iter < 8; ++iter) {
      Real p0(1.0), p1 = x;
      for (int j = 2; j <= n; ++j) {
        Real p2 = (Real(2 * j - 1) * x * p1 - Real(j - 1) * p0) / Real(j);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(n) * (x * p1 - p0) / (x * x - one);
      Real dx = p1 / dp;
      x -= dx;
      if (num::abs(dx) <= num::epsilon<Real>() * Real(4.0)) {
        // one extra polish pass, then stop
        if (iter > 1) break;
      }
    }
    nodes[n - 1 - k] = x;
    weights[n - 1 - k] = two / ((one - x * x) * dp * dp);
  }
}

/// Affine map of a [-1, 1] rule onto [a, b].
template <class Real>
void map_interval(std::vector<Real>& nodes, std::vector<Real>& weights, Real a, Real b) {
  const Real half(0.5);
  const Real mid = (a + b) * half;
  const Real rad = (b - a) * half;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = mid + rad * nodes[i];
    weights[i] = weights[i] * rad;
  }
}

/// Uniform rule on [a, b) with equal weights; for 2*pi-periodic smooth
/// integrands over a full period this converges spectrally (the composite
/// trapezoid rule with coincident endpoints).
template <class Real>
void periodic_uniform(int n, std::vector<Real>& nodes, std::vector<Real>& weights, Real a, Real b) {
  if (n < 1) throw std::invalid_argument("periodic_uniform: n must be positive");
  nodes.assign(n, Real(0.0));
  const Real h = (b - a) / Real(n);
  weights.assign(n, h);
  for (int i = 0; i < n; ++i) nodes[i] = a + h * Real(i);
}

/// Closed composite trapezoid rule on [a, b] (n >= 2 points, endpoints
/// included with half weight). Spectrally accurate for integrands whose
/// even-periodic extension is smooth, e.g. the folded lattice integrals.
template <class Real>
void closed_trapezoid(int n, std::vector<Real>& nodes, std::vector<Real>& weights, Real a, Real b) {
  if (n < 2) throw std::invalid_argument("closed_trapezoid: need at least 2 points");
  nodes.assign(n, Real(0.0));
  weights.assign(n, Real(0.0));
  const Real h = (b - a) / Real(n - 1);
  for (int i = 0; i < n; ++i) {
    nodes[i] = a + h * Real(i);
    weights[i] = (i == 0 || i == n - 1) ? h * Real(0.5) : h;
  }
}

/// One-dimensional rule on [a, b] per the config.
template <class Real>
void make_rule(const QuadratureConfig& q, int default_points, std::vector<Real>& nodes,
               std::vector<Real>& weights, Real a, Real b) {
  validate(q);
  const int n = q.points_per_dim > 0 ? q.points_per_dim : default_points;
  if (q.scheme == QuadratureConfig::Scheme::Trapezoid) {
    periodic_uniform(n, nodes, weights, a, b);
  } else {
    gauss_legendre(n, nodes, weights);
    map_interval(nodes, weights, a, b);
  }
}

/// Kahan-compensated accumulator; keeps tensor sums at the scalar's
/// roundoff instead of growing with the node count.
template <class Real>
class KahanSum {
 public:
  void add(const Real& term) {
    Real y = term - c_;
    Real t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  const Real& value() const { return s_; }

 private:
  Real s_{0.0};
  Real c_{0.0};
};

}  // namespace quadrature
}  // namespace latgram
