#pragma once

// Complete elliptic integrals K(m) and E(m) in the PARAMETER convention
// (m, not the modulus k; K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t)),
// computed by the arithmetic-geometric mean iteration. Quadratic
// convergence; accuracy is limited only by the scalar's roundoff.

#include <stdexcept>

#include "latgram/precision.hpp"

namespace latgram {
namespace detail {

template <class Real>
struct AgmResult {
  Real k;  // K(m)
  Real e;  // E(m)
};

template <class Real>
AgmResult<Real> agm_elliptic(Real m) {
  const Real one(1.0), half(0.5);
  Real a = one;
  Real b = num::sqrt(one - m);
  Real c2_sum = m * half;  // sum of 2^{n-1} c_n^2, starting from c_0^2 = m
  Real two_pow(1.0);
  const Real tol = num::epsilon<Real>() * Real(4.0);
  for (int iter = 0; iter < 64; ++iter) {
    Real c = (a - b) * half;
    Real an = (a + b) * half;
    b = num::sqrt(a * b);
    a = an;
    two_pow = two_pow * Real(2.0);
    c2_sum += two_pow * half * c * c;
    if (num::abs(c) <= tol * a) break;
  }
  Real k = num::pi<Real>() / (Real(2.0) * a);
  return {k, k * (one - c2_sum)};
}

}  // namespace detail

/// First complete elliptic integral, parameter convention. Diverges as
/// m -> 1; arguments beyond 1 - 1e-12 are rejected.
template <class Real>
Real elliptic_K(Real m) {
  if (m < Real(0.0) || !(m < Real(1.0) - Real(1e-12)))
    throw std::domain_error("elliptic_K: parameter must lie in [0, 1 - 1e-12]");
  return detail::agm_elliptic(m).k;
}

/// Second complete elliptic integral, parameter convention; E(1) = 1.
template <class Real>
Real elliptic_E(Real m) {
  if (m < Real(0.0) || m > Real(1.0))
    throw std::domain_error("elliptic_E: parameter must lie in [0, 1]");
  if (m == Real(1.0)) return Real(1.0);
  return detail::agm_elliptic(m).e;
}

inline double elliptic_K(double m) { return elliptic_K<double>(m); }
inline double elliptic_E(double m) { return elliptic_E<double>(m); }

}  // namespace latgram
