#pragma once

// Infinite lattice graphs: dimension d, a finite set of integer coupling
// offsets, and a real weight per offset. The lattice function
// phi(k) = sum_n psi(n) exp(-I n.k) is the Fourier symbol of the drift
// operator; max Re phi < 0 over the Brillouin zone is the stability
// condition used throughout.

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace latgram {

/// Integer lattice site (length d).
using NodeIndex = std::vector<int>;

/// Fourier wavenumber in [-pi, pi]^d.
using SpectralPoint = std::vector<double>;

inline NodeIndex node1d(int i) { return NodeIndex{i}; }

inline NodeIndex sub(const NodeIndex& a, const NodeIndex& b) {
  NodeIndex r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
  return r;
}

inline std::string to_string(const NodeIndex& i) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < i.size(); ++k) os << (k ? "," : "") << i[k];
  os << ")";
  return os.str();
}

struct LatticeSpec {
  int d = 0;
  std::vector<NodeIndex> offsets;  // the coupling set N, no duplicates
  std::vector<double> weights;     // psi(n), parallel to offsets

  std::size_t size() const { return offsets.size(); }

  /// Sum of |psi(n)|; bounds |phi| and the integrand kernels.
  double weight_l1() const {
    double s = 0.0;
    for (double w : weights) s += std::fabs(w);
    return s;
  }

  /// True when the offset set is symmetric with matching weights
  /// (psi(n) = psi(-n)); then phi is real-valued.
  bool is_symmetric() const {
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      NodeIndex neg(d);
      for (int k = 0; k < d; ++k) neg[k] = -offsets[i][k];
      bool found = false;
      for (std::size_t j = 0; j < offsets.size(); ++j) {
        if (offsets[j] == neg) {
          if (std::fabs(weights[j] - weights[i]) > 1e-15 * (1.0 + std::fabs(weights[i])))
            return false;
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }
};

/// Validated constructor for a lattice description.
/// Throws std::invalid_argument on dimension mismatch, duplicate offsets,
/// an empty neighbor set, or a weight-count mismatch.
inline LatticeSpec build_lattice_spec(int d, std::vector<NodeIndex> offsets,
                                      std::vector<double> weights) {
  if (d < 1) throw std::invalid_argument("lattice: dimension must be positive");
  if (offsets.empty()) throw std::invalid_argument("lattice: neighbor set must be non-empty");
  if (offsets.size() != weights.size())
    throw std::invalid_argument("lattice: need exactly one weight per offset");
  std::set<NodeIndex> seen;
  for (const auto& n : offsets) {
    if (static_cast<int>(n.size()) != d)
      throw std::invalid_argument("lattice: offset " + to_string(n) + " has wrong dimension");
    if (!seen.insert(n).second)
      throw std::invalid_argument("lattice: duplicate offset " + to_string(n));
  }
  LatticeSpec spec;
  spec.d = d;
  spec.offsets = std::move(offsets);
  spec.weights = std::move(weights);
  return spec;
}

/// One-dimensional nearest-neighbor lattice: self-loop p, couplings s.
inline LatticeSpec nn1d_spec(double p, double s) {
  return build_lattice_spec(1, {{0}, {1}, {-1}}, {p, s, s});
}

/// The lattice function phi(k) = sum_n psi(n) exp(-I n.k).
inline std::complex<double> lattice_function(const LatticeSpec& spec, const SpectralPoint& k) {
  if (static_cast<int>(k.size()) != spec.d)
    throw std::invalid_argument("lattice_function: wavenumber dimension mismatch");
  std::complex<double> phi(0.0, 0.0);
  for (std::size_t i = 0; i < spec.offsets.size(); ++i) {
    double dot = 0.0;
    for (int c = 0; c < spec.d; ++c) dot += spec.offsets[i][c] * k[c];
    phi += spec.weights[i] * std::complex<double>(std::cos(dot), -std::sin(dot));
  }
  return phi;
}

struct StabilityResult {
  bool stable = false;       // max Re phi over the grid strictly negative
  double worst_value = 0.0;  // that maximum
};

/// Grid stability check: max of Re phi over a uniform tensor grid that
/// includes k = 0 (the usual worst case). phi is a trigonometric
/// polynomial, so combined with the Lipschitz slack from
/// stability_certificate_slack() a fine grid certifies the sign.
inline StabilityResult is_stable(const LatticeSpec& spec, int grid_per_dim = 256) {
  if (grid_per_dim < 8) throw std::invalid_argument("is_stable: grid_per_dim must be >= 8");
  const double h = 2.0 * 3.14159265358979323846 / grid_per_dim;
  std::vector<int> idx(spec.d, 0);
  SpectralPoint k(spec.d, 0.0);
  double worst = -std::numeric_limits<double>::infinity();
  while (true) {
    for (int c = 0; c < spec.d; ++c) k[c] = -3.14159265358979323846 + idx[c] * h;
    worst = std::max(worst, lattice_function(spec, k).real());
    int c = 0;
    for (; c < spec.d; ++c) {
      if (++idx[c] < grid_per_dim) break;
      idx[c] = 0;
    }
    if (c == spec.d) break;
  }
  return {worst < 0.0, worst};
}

/// Upper bound on how far Re phi can rise between grid points:
/// (grid spacing / 2) * sum_n |psi(n)| * ||n||_1. A grid maximum below
/// -slack certifies Re phi < 0 everywhere.
inline double stability_certificate_slack(const LatticeSpec& spec, int grid_per_dim = 256) {
  double lip = 0.0;
  for (std::size_t i = 0; i < spec.offsets.size(); ++i) {
    double n1 = 0.0;
    for (int c = 0; c < spec.d; ++c) n1 += std::abs(spec.offsets[i][c]);
    lip += std::fabs(spec.weights[i]) * n1;
  }
  return lip * 3.14159265358979323846 / grid_per_dim;
}

}  // namespace latgram
