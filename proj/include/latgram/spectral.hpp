#pragma once

// Controllability Gramian entries of an infinite lattice by 2d-dimensional
// quadrature of the real-form spectral integrands. Entries are evaluated
// per driver with the driver shifted to the origin (translation
// invariance) and summed; the Fourier-symbol tables over the d-dimensional
// grid are precomputed once per evaluator, so a 2d-dimensional entry costs
// one pass over N^d x N^d node pairs.
//
// d <= 2 is the supported regime; d = 3 works but the pair loop grows to
// N^6 evaluations per entry, which is expensive at any useful N.

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "latgram/lattice.hpp"
#include "latgram/metrics.hpp"
#include "latgram/quadrature.hpp"

namespace latgram {
namespace spectral {

/// The four trigonometric kernels at one quadrature point (ihat, jhat):
/// sigma = Re phi(ihat) + Re phi(jhat), omega the matching sine sum, and
/// the phase factors alpha + I beta of the shifted indices.
struct IntegrandParts {
  double sigma;
  double omega;
  double alpha;
  double beta;
};

/// Time kernel r(t) = e^(sigma t) cos(omega t), s(t) = e^(sigma t) sin(omega t).
struct TimeKernel {
  double r;
  double s;
};

inline TimeKernel time_kernel(double sigma, double omega, double t) {
  if (sigma * t > 700.0)
    throw std::overflow_error("time_kernel: exp(sigma t) overflows (unstable mode, large t)");
  const double g = std::exp(sigma * t);
  return {g * std::cos(omega * t), g * std::sin(omega * t)};
}

/// Direct evaluation of the integrand kernels; the evaluator below
/// reproduces these from cached tables.
inline IntegrandParts kernel_parts(const LatticeSpec& spec, const NodeIndex& i, const NodeIndex& j,
                                   const NodeIndex& a, const SpectralPoint& ihat,
                                   const SpectralPoint& jhat) {
  const auto d = static_cast<std::size_t>(spec.d);
  if (i.size() != d || j.size() != d || a.size() != d || ihat.size() != d || jhat.size() != d)
    throw std::invalid_argument("kernel_parts: dimension mismatch");
  double sigma = 0.0, omega = 0.0;
  for (std::size_t n = 0; n < spec.offsets.size(); ++n) {
    double di = 0.0, dj = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      di += spec.offsets[n][c] * ihat[c];
      dj += spec.offsets[n][c] * jhat[c];
    }
    sigma += spec.weights[n] * (std::cos(di) + std::cos(dj));
    omega += spec.weights[n] * (std::sin(di) + std::sin(dj));
  }
  double phase = 0.0;
  for (std::size_t c = 0; c < d; ++c)
    phase += (i[c] - a[c]) * ihat[c] + (j[c] - a[c]) * jhat[c];
  return {sigma, omega, std::cos(phase), std::sin(phase)};
}

namespace detail {

inline void validate_node_set(const LatticeSpec& spec, const std::vector<NodeIndex>& nodes,
                              const char* what) {
  if (nodes.empty()) throw std::invalid_argument(std::string(what) + " set must be non-empty");
  std::set<NodeIndex> seen;
  for (const auto& n : nodes) {
    if (static_cast<int>(n.size()) != spec.d)
      throw std::invalid_argument(std::string(what) + " index " + to_string(n) +
                                  " has wrong dimension");
    if (!seen.insert(n).second)
      throw std::invalid_argument(std::string(what) + " set has duplicate " + to_string(n));
  }
}

}  // namespace detail

/// Quadrature engine for one lattice: precomputes the tensor grid over
/// [-pi, pi]^d with per-node weight, Re phi and the sine sum, then
/// assembles steady-state or time-t entries for arbitrary node pairs and
/// driver sets.
class GramianEvaluator {
 public:
  GramianEvaluator(LatticeSpec spec, QuadratureConfig config = {})
      : spec_(std::move(spec)) {
    validate(config);
    const int n = config.points_per_dim > 0 ? config.points_per_dim : (spec_.d == 1 ? 64 : 24);
    std::vector<double> nodes, weights;
    const double pi = 3.14159265358979323846;
    if (config.scheme == QuadratureConfig::Scheme::Trapezoid)
      quadrature::periodic_uniform(n, nodes, weights, -pi, pi);
    else
      quadrature::make_rule(config, n, nodes, weights, -pi, pi);

    const auto d = static_cast<std::size_t>(spec_.d);
    std::size_t m = 1;
    for (std::size_t c = 0; c < d; ++c) m *= nodes.size();
    grid_.resize(m * d);
    weight_.resize(m);
    re_phi_.resize(m);
    sin_sum_.resize(m);

    std::vector<std::size_t> idx(d, 0);
    SpectralPoint k(d, 0.0);
    for (std::size_t g = 0; g < m; ++g) {
      double w = 1.0;
      for (std::size_t c = 0; c < d; ++c) {
        k[c] = nodes[idx[c]];
        grid_[g * d + c] = k[c];
        w *= weights[idx[c]];
      }
      weight_[g] = w;
      double re = 0.0, si = 0.0;
      for (std::size_t o = 0; o < spec_.offsets.size(); ++o) {
        double dot = 0.0;
        for (std::size_t c = 0; c < d; ++c) dot += spec_.offsets[o][c] * k[c];
        re += spec_.weights[o] * std::cos(dot);
        si += spec_.weights[o] * std::sin(dot);
      }
      re_phi_[g] = re;
      sin_sum_[g] = si;
      for (std::size_t c = 0; c < d; ++c) {
        if (++idx[c] < nodes.size()) break;
        idx[c] = 0;
      }
    }

    const auto stab = latgram::is_stable(spec_);
    stable_ = stab.stable;
    worst_re_phi_ = stab.worst_value;
  }

  const LatticeSpec& spec() const { return spec_; }
  bool stable() const { return stable_; }
  double worst_re_phi() const { return worst_re_phi_; }

  /// Steady-state entry W_{i,j}; requires a stable lattice.
  double entry_steady(const std::vector<NodeIndex>& drivers, const NodeIndex& i,
                      const NodeIndex& j) const {
    if (!stable_)
      throw std::domain_error("gramian: steady state requires a stable lattice (max Re phi = " +
                              std::to_string(worst_re_phi_) + ")");
    return accumulate(drivers, i, j, std::nullopt);
  }

  /// Finite-horizon entry W_{i,j}(t), t >= 0; defined for any lattice.
  double entry_at(const std::vector<NodeIndex>& drivers, const NodeIndex& i, const NodeIndex& j,
                  double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("gramian: time must be nonnegative");
    return accumulate(drivers, i, j, t);
  }

 private:
  double accumulate(const std::vector<NodeIndex>& drivers, const NodeIndex& i, const NodeIndex& j,
                    std::optional<double> t) const {
    detail::validate_node_set(spec_, drivers, "driver");
    const auto d = static_cast<std::size_t>(spec_.d);
    if (i.size() != d || j.size() != d)
      throw std::invalid_argument("gramian: node index dimension mismatch");

    const std::size_t m = weight_.size();
    std::vector<double> c1(m), s1(m), c2(m), s2(m);
    quadrature::KahanSum<double> total;
    for (const auto& a : drivers) {
      const NodeIndex di = sub(i, a);
      const NodeIndex dj = sub(j, a);
      for (std::size_t g = 0; g < m; ++g) {
        double p1 = 0.0, p2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          p1 += di[c] * grid_[g * d + c];
          p2 += dj[c] * grid_[g * d + c];
        }
        const double w = weight_[g];
        c1[g] = w * std::cos(p1);
        s1[g] = w * std::sin(p1);
        c2[g] = w * std::cos(p2);
        s2[g] = w * std::sin(p2);
      }
      for (std::size_t g = 0; g < m; ++g) {
        const double rp_g = re_phi_[g], ss_g = sin_sum_[g];
        const double c1g = c1[g], s1g = s1[g];
        quadrature::KahanSum<double> row;
        for (std::size_t h = 0; h < m; ++h) {
          const double sigma = rp_g + re_phi_[h];
          const double omega = ss_g + sin_sum_[h];
          const double den = sigma * sigma + omega * omega;
          if (std::fabs(sigma) + std::fabs(omega) < 1e-13)
            throw std::runtime_error(
                "gramian: integrand singular at quadrature node (ihat index " + std::to_string(g) +
                ", jhat index " + std::to_string(h) + "): |sigma|+|omega| < 1e-13");
          const double alpha = c1g * c2[h] - s1g * s2[h];
          const double beta = s1g * c2[h] + c1g * s2[h];
          if (!t) {
            row.add(-(alpha * sigma + beta * omega) / den);
          } else {
            const TimeKernel k = time_kernel(sigma, omega, *t);
            row.add(((alpha * sigma + beta * omega) * (k.r - 1.0) +
                     (alpha * omega - beta * sigma) * k.s) /
                    den);
          }
        }
        total.add(row.value());
      }
    }
    const double two_pi = 2.0 * 3.14159265358979323846;
    return total.value() / std::pow(two_pi, 2.0 * spec_.d);
  }

  LatticeSpec spec_;
  std::vector<double> grid_;     // m x d node coordinates
  std::vector<double> weight_;   // tensor weight per node
  std::vector<double> re_phi_;   // Re phi(k) per node
  std::vector<double> sin_sum_;  // sum_n psi(n) sin(n.k) per node
  bool stable_ = false;
  double worst_re_phi_ = 0.0;
};

inline double gramian_entry_ss(const LatticeSpec& spec, const std::vector<NodeIndex>& drivers,
                               const NodeIndex& i, const NodeIndex& j,
                               const QuadratureConfig& q = {}) {
  return GramianEvaluator(spec, q).entry_steady(drivers, i, j);
}

inline double gramian_entry_t(const LatticeSpec& spec, const std::vector<NodeIndex>& drivers,
                              const NodeIndex& i, const NodeIndex& j, double t,
                              const QuadratureConfig& q = {}) {
  return GramianEvaluator(spec, q).entry_at(drivers, i, j, t);
}

namespace detail {

template <class Entry>
OutputGramian assemble_output(const LatticeSpec& spec, const std::vector<NodeIndex>& targets,
                              Entry&& entry) {
  validate_node_set(spec, targets, "target");
  const std::size_t n = targets.size();
  Matrix w(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) {
      const double v = entry(targets[r], targets[c]);
      w(r, c) = v;
      w(c, r) = v;  // one evaluation per unordered pair keeps exact symmetry
    }
  }
  return make_output_gramian(std::move(w), targets);
}

}  // namespace detail

/// Steady-state output Gramian over the target set.
inline OutputGramian output_gramian(const LatticeSpec& spec, const std::vector<NodeIndex>& drivers,
                                    const std::vector<NodeIndex>& targets,
                                    const QuadratureConfig& q = {}) {
  GramianEvaluator eval(spec, q);
  return detail::assemble_output(spec, targets, [&](const NodeIndex& a, const NodeIndex& b) {
    return eval.entry_steady(drivers, a, b);
  });
}

/// Output Gramian at finite time t.
inline OutputGramian output_gramian_at(const LatticeSpec& spec,
                                       const std::vector<NodeIndex>& drivers,
                                       const std::vector<NodeIndex>& targets, double t,
                                       const QuadratureConfig& q = {}) {
  GramianEvaluator eval(spec, q);
  return detail::assemble_output(spec, targets, [&](const NodeIndex& a, const NodeIndex& b) {
    return eval.entry_at(drivers, a, b, t);
  });
}

}  // namespace spectral
}  // namespace latgram
