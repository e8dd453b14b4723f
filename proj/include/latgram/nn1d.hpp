#pragma once

// Closed-form machinery for the one-dimensional nearest-neighbor lattice
// (self-loop p < -2s, couplings s > 0): the folded double-integral entry
// formula, the three-term diagonal recursion seeded by complete elliptic
// integrals, and the asymptotic per-step decay rate.
//
// Precision notes, measured against multi-hundred-digit references:
//  * The oscillatory double integral cancels its integrand scale down to
//    the entry magnitude ~ zt^(max|index|), so the accumulator needs
//    roughly that many digits of headroom. Auto precision picks double /
//    binary128 / MPFR accordingly.
//  * The forward recursion amplifies seed roundoff by zt^(-2m): in double
//    it is unusable beyond a handful of steps for alpha >~ 2, in binary128
//    it holds ~1e-8 relative at m = 10 even for alpha = 10. It always runs
//    in binary128 here; recursion_trust_horizon() reports how far the
//    output can be trusted at a given tolerance.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "latgram/elliptic.hpp"
#include "latgram/precision.hpp"
#include "latgram/quadrature.hpp"

namespace latgram {
namespace nn1d {

struct Params {
  double p;  // self-loop weight, p < -2s
  double s;  // nearest-neighbor coupling, s > 0

  double alpha() const { return p * p / (2.0 * s * s) - 1.0; }
};

/// Validated constructor; rejects s <= 0 and the stability boundary p >= -2s.
inline Params make_params(double p, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("nn1d: coupling s must be positive");
  if (!(p + 2.0 * s < 0.0))
    throw std::invalid_argument("nn1d: need p < -2s (stable lattice)");
  return Params{p, s};
}

/// Convenience constructor from |p| (the weights enter through |p| only).
inline Params from_magnitude(double abs_p, double s) { return make_params(-std::fabs(abs_p), s); }

inline double alpha(const Params& par) { return par.alpha(); }

/// Asymptotic per-step decay ratio zt = alpha - sqrt(alpha^2 - 1) in (0, 1),
/// evaluated as 1 / (alpha + sqrt(alpha^2 - 1)) to dodge cancellation.
inline double decay_rate(double alpha_value) {
  if (!(alpha_value > 1.0)) throw std::domain_error("decay_rate: requires alpha > 1");
  return 1.0 / (alpha_value + std::sqrt(alpha_value * alpha_value - 1.0));
}

inline double decay_rate(const Params& par) { return decay_rate(par.alpha()); }

// ----------------------------------------------------------------------
// Entry quadrature (the folded [0, pi]^2 double integral)
// ----------------------------------------------------------------------

namespace detail {

inline int default_points(int i_shift, int j_shift) {
  int m = std::max(std::abs(i_shift), std::abs(j_shift));
  return std::max(64, 32 + 3 * m);
}

template <class Real>
void axis_rule(const QuadratureConfig& q, int n_default, std::vector<Real>& th,
               std::vector<Real>& w) {
  validate(q);
  const int n = q.points_per_dim > 0 ? q.points_per_dim : n_default;
  const Real pi = num::pi<Real>();
  if (q.scheme == QuadratureConfig::Scheme::Trapezoid) {
    quadrature::closed_trapezoid(n, th, w, Real(0.0), pi);
  } else {
    quadrature::gauss_legendre(n, th, w);
    quadrature::map_interval(th, w, Real(0.0), pi);
  }
}

}  // namespace detail

/// Shifted steady-state entry G_{i',j'} by tensor quadrature of the folded
/// double integral, carried out entirely in the scalar Real.
template <class Real>
Real entry_quadrature_as(const Params& par, int i_shift, int j_shift,
                         const QuadratureConfig& q = {}) {
  std::vector<Real> th, w;
  detail::axis_rule<Real>(q, detail::default_points(i_shift, j_shift), th, w);
  const std::size_t n = th.size();
  const Real p(par.p), s(par.s), two(2.0);

  std::vector<Real> c(n), wci(n), wcj(n);
  for (std::size_t k = 0; k < n; ++k) {
    c[k] = num::cos(th[k]);
    wci[k] = w[k] * num::cos(Real(i_shift) * th[k]);
    wcj[k] = (j_shift == i_shift) ? wci[k] : w[k] * num::cos(Real(j_shift) * th[k]);
  }

  quadrature::KahanSum<Real> sum;
  for (std::size_t k = 0; k < n; ++k) {
    const Real row = two * p + two * s * c[k];
    quadrature::KahanSum<Real> inner;
    for (std::size_t l = 0; l < n; ++l) inner.add(wcj[l] / (row + two * s * c[l]));
    sum.add(wci[k] * inner.value());
  }
  const Real pi = num::pi<Real>();
  return -sum.value() / (pi * pi);
}

namespace detail {

/// Decimal digits the accumulator must carry: the cancellation depth
/// (integrand scale over a conservative zt^max-index magnitude estimate)
/// plus the target relative accuracy.
inline double required_digits(const Params& par, int i_shift, int j_shift) {
  const double zt = decay_rate(par);
  const double g00_scale = 1.0 / (3.14159265358979323846 * std::fabs(par.p));
  const double est_log10 =
      std::log10(g00_scale) + std::max(std::abs(i_shift), std::abs(j_shift)) * std::log10(zt);
  const double integrand_log10 = -std::log10(2.0 * (std::fabs(par.p) - 2.0 * par.s));
  const double cancel = std::max(0.0, integrand_log10 - est_log10);
  return cancel + 14.0;  // 12 target digits + margin
}

}  // namespace detail

/// Scalar type auto-selection for a given entry.
inline Precision recommended_precision(const Params& par, int i_shift, int j_shift) {
  const double digits = detail::required_digits(par, i_shift, j_shift);
  if (digits <= 15.0) return Precision::Double;
  if (digits <= 31.0) return Precision::Quad;
  return Precision::Big;
}

/// Steady-state entry G_{i',j'} of the controllability Gramian (driver at
/// the origin) by 2-D quadrature of the folded double integral. Symmetric
/// under index swap and sign flips. Precision::Auto escalates the internal
/// scalar so deep entries keep full relative accuracy.
inline double entry_quadrature(const Params& par, int i_shift, int j_shift,
                               const QuadratureConfig& q = {},
                               Precision prec = Precision::Auto) {
  if (prec == Precision::Auto) prec = recommended_precision(par, i_shift, j_shift);
  switch (prec) {
    case Precision::Double:
      return entry_quadrature_as<double>(par, i_shift, j_shift, q);
    case Precision::Quad:
      return num::to_double(entry_quadrature_as<real128>(par, i_shift, j_shift, q));
    default: {
      const double digits = detail::required_digits(par, i_shift, j_shift);
      const auto bits = static_cast<mpfr_prec_t>(digits * 3.33) + 64;
      BigFloat::PrecisionGuard guard(bits);
      return num::to_double(entry_quadrature_as<BigFloat>(par, i_shift, j_shift, q));
    }
  }
}

/// Diagonal entries G_{0,0} .. G_{m,m} by quadrature, sharing one rule and
/// one denominator table across all indices. Precision::Auto sizes the
/// scalar for the deepest requested entry.
inline std::vector<double> diagonal_quadrature(const Params& par, int max_index,
                                               const QuadratureConfig& q = {},
                                               Precision prec = Precision::Auto) {
  if (max_index < 0) throw std::invalid_argument("diagonal_quadrature: max_index must be >= 0");
  if (prec == Precision::Auto) prec = recommended_precision(par, max_index, max_index);

  auto run = [&](auto real_tag) {
    using Real = decltype(real_tag);
    std::vector<Real> th, w;
    detail::axis_rule<Real>(q, detail::default_points(max_index, max_index), th, w);
    const std::size_t n = th.size();
    const Real p(par.p), s(par.s), two(2.0);
    std::vector<Real> inv_den(n * n);
    for (std::size_t k = 0; k < n; ++k) {
      const Real row = two * p + two * s * num::cos(th[k]);
      for (std::size_t l = 0; l < n; ++l)
        inv_den[k * n + l] = Real(1.0) / (row + two * s * num::cos(th[l]));
    }
    const Real pi = num::pi<Real>();
    std::vector<double> out(static_cast<std::size_t>(max_index) + 1);
    std::vector<Real> wc(n);
    for (int m = 0; m <= max_index; ++m) {
      for (std::size_t k = 0; k < n; ++k) wc[k] = w[k] * num::cos(Real(m) * th[k]);
      quadrature::KahanSum<Real> sum;
      for (std::size_t k = 0; k < n; ++k) {
        quadrature::KahanSum<Real> inner;
        for (std::size_t l = 0; l < n; ++l) inner.add(wc[l] * inv_den[k * n + l]);
        sum.add(wc[k] * inner.value());
      }
      out[m] = num::to_double(-sum.value() / (pi * pi));
    }
    return out;
  };

  switch (prec) {
    case Precision::Double:
      return run(double{});
    case Precision::Quad:
      return run(real128{});
    default: {
      const double digits = detail::required_digits(par, max_index, max_index);
      const auto bits = static_cast<mpfr_prec_t>(digits * 3.33) + 64;
      BigFloat::PrecisionGuard guard(bits);
      return run(BigFloat{});
    }
  }
}

// ----------------------------------------------------------------------
// Elliptic seeds and the diagonal recursion
// ----------------------------------------------------------------------

struct Seeds {
  double g00;
  double g11;
};

namespace detail {

template <class Real>
struct SeedsT {
  Real g00, g11;
};

template <class Real>
SeedsT<Real> seeds_as(const Params& par) {
  const Real ap = num::abs(Real(par.p));
  const Real s(par.s);
  const Real m = Real(4.0) * s * s / (ap * ap);
  const Real pi = num::pi<Real>();
  const auto ke = latgram::detail::agm_elliptic<Real>(m);
  const Real g00 = ke.k / (pi * ap);
  const Real g11 =
      (ap / (Real(2.0) * pi * s * s) - Real(1.0) / (pi * ap)) * ke.k -
      ap / (Real(2.0) * pi * s * s) * ke.e;
  return {g00, g11};
}

}  // namespace detail

/// Recursion seeds G_{0,0} and G_{1,1} from the complete elliptic
/// integrals with parameter 4s^2/p^2 (the parameter convention is
/// certified against entry_quadrature by the test suite).
inline Seeds diagonal_seeds(const Params& par) {
  const auto s = detail::seeds_as<real128>(par);
  return {num::to_double(s.g00), num::to_double(s.g11)};
}

struct DiagonalRun {
  std::vector<double> values;  // G_{0,0} .. G_{last,last}
  bool truncated = false;      // positivity/monotonicity lost before max_index
  int last_index() const { return static_cast<int>(values.size()) - 1; }
};

/// Forward three-term recursion for the diagonal entries, carried in
/// binary128. The recursion's growing solution amplifies roundoff by
/// zt^(-2m); if that noise ever breaks strict positivity or strict decrease
/// the sequence is truncated at the last trusted index.
inline DiagonalRun diagonal_recursion(const Params& par, int max_index) {
  if (max_index < 1) throw std::invalid_argument("diagonal_recursion: max_index must be >= 1");
  const auto seeds = detail::seeds_as<real128>(par);
  const real128 a = real128(par.p) * real128(par.p) / (real128(2.0) * real128(par.s) * real128(par.s)) -
                    real128(1.0);
  DiagonalRun run;
  run.values.reserve(static_cast<std::size_t>(max_index) + 1);
  run.values.push_back(num::to_double(seeds.g00));
  run.values.push_back(num::to_double(seeds.g11));
  real128 prev = seeds.g00, cur = seeds.g11;
  for (int m = 1; m < max_index; ++m) {
    const real128 next = (real128(4 * m) / real128(2 * m + 1)) * a * cur -
                         (real128(2 * m - 1) / real128(2 * m + 1)) * prev;
    if (!(next > real128(0.0)) || !(next < cur)) {
      run.truncated = true;
      break;
    }
    run.values.push_back(num::to_double(next));
    prev = cur;
    cur = next;
  }
  return run;
}

/// Largest index at which the forward recursion still meets rel_tol:
/// solves eps128 * zt^(-2m) = rel_tol for m.
inline int recursion_trust_horizon(const Params& par, double rel_tol = 1e-6) {
  const double zt = decay_rate(par);
  const double eps128 = 1.93e-34;  // binary128 unit roundoff
  if (rel_tol <= eps128) return 0;
  return static_cast<int>(std::floor(std::log(rel_tol / eps128) / (2.0 * std::log(1.0 / zt))));
}

/// Asymptotic diagonal estimate zt^(m - calib) * G_{calib,calib}, anchored
/// at a recursion value inside the trusted range. Clearly an estimate: the
/// true diagonal carries a slowly varying m^(-1/2) factor on top of the
/// geometric decay.
inline double asymptotic_diagonal(const Params& par, int index, int calib_index = 10) {
  if (index < 0) throw std::invalid_argument("asymptotic_diagonal: index must be >= 0");
  if (calib_index < 1) calib_index = 1;
  const auto run = diagonal_recursion(par, calib_index);
  const int anchor = std::min(calib_index, run.last_index());
  const double zt = decay_rate(par);
  return run.values[static_cast<std::size_t>(anchor)] * std::pow(zt, index - anchor);
}

}  // namespace nn1d
}  // namespace latgram
