#pragma once

// Extended-precision scalar support for the deeply decaying lattice integrals.
//
// Three working precisions are available behind a common set of overloads:
//   double     -- default everywhere
//   real128    -- binary128 via the compiler builtin, ~33 decimal digits
//   BigFloat   -- arbitrary precision (MPFR), for entries below the
//                 binary128 cancellation floor
//
// Generic numeric code (quadrature rules, AGM, integrands) is templated on
// the scalar and reaches these through unqualified calls in latgram::num.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#if defined(__SIZEOF_FLOAT128__)
extern "C" {
#include <quadmath.h>
}
#define LATGRAM_HAS_FLOAT128 1
#else
#define LATGRAM_HAS_FLOAT128 0
#endif

#include <gmp.h>
#include <mpfr.h>

namespace latgram {

#if LATGRAM_HAS_FLOAT128
using real128 = __float128;
#else
using real128 = long double;  // degraded fallback; tolerances widen accordingly
#endif

/// Arbitrary-precision real backed by MPFR. Value semantics; the precision
/// of a freshly constructed value is the thread-local default_precision().
/// Binary operators promote to the wider operand precision.
class BigFloat {
 public:
  static mpfr_prec_t& default_precision() {
    static thread_local mpfr_prec_t prec = 256;
    return prec;
  }

  /// RAII override of the thread-local default precision.
  struct PrecisionGuard {
    explicit PrecisionGuard(mpfr_prec_t p) : saved_(default_precision()) {
      default_precision() = p;
    }
    ~PrecisionGuard() { default_precision() = saved_; }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

   private:
    mpfr_prec_t saved_;
  };

  BigFloat() { mpfr_init2(v_, default_precision()); mpfr_set_zero(v_, 1); }
  BigFloat(double d) : BigFloat() { mpfr_set_d(v_, d, MPFR_RNDN); }
  BigFloat(int i) : BigFloat() { mpfr_set_si(v_, i, MPFR_RNDN); }
  BigFloat(long i) : BigFloat() { mpfr_set_si(v_, i, MPFR_RNDN); }

  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  static BigFloat pi() {
    BigFloat r;
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  BigFloat operator-() const {
    BigFloat r = *this;
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r = promoted(a, b);
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r = promoted(a, b);
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r = promoted(a, b);
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r = promoted(a, b);
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) != 0; }

  /// Applies an mpfr unary function at the operand's precision.
  template <class F>
  BigFloat apply(F f) const {
    BigFloat r = sized_like(*this);
    f(r.v_, v_, MPFR_RNDN);
    return r;
  }

 private:
  static BigFloat promoted(const BigFloat& a, const BigFloat& b) {
    BigFloat r;
    mpfr_prec_t p = std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
    mpfr_set_prec(r.v_, p);
    return r;
  }
  static BigFloat sized_like(const BigFloat& a) {
    BigFloat r;
    mpfr_set_prec(r.v_, mpfr_get_prec(a.v_));
    return r;
  }

  mpfr_t v_;
};

inline BigFloat sqrt(const BigFloat& a) { return a.apply([](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rn) { return mpfr_sqrt(r, x, rn); }); }
inline BigFloat cos(const BigFloat& a) { return a.apply([](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rn) { return mpfr_cos(r, x, rn); }); }
inline BigFloat sin(const BigFloat& a) { return a.apply([](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rn) { return mpfr_sin(r, x, rn); }); }
inline BigFloat exp(const BigFloat& a) { return a.apply([](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rn) { return mpfr_exp(r, x, rn); }); }
inline BigFloat log(const BigFloat& a) { return a.apply([](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rn) { return mpfr_log(r, x, rn); }); }
inline BigFloat abs(const BigFloat& a) { return a.apply([](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rn) { return mpfr_abs(r, x, rn); }); }

namespace num {

inline double sqrt(double x) { return std::sqrt(x); }
inline double cos(double x) { return std::cos(x); }
inline double sin(double x) { return std::sin(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double abs(double x) { return std::fabs(x); }
inline double to_double(double x) { return x; }

inline long double sqrt(long double x) { return std::sqrt(x); }
inline long double cos(long double x) { return std::cos(x); }
inline long double abs(long double x) { return std::fabs(x); }
inline double to_double(long double x) { return static_cast<double>(x); }

#if LATGRAM_HAS_FLOAT128
inline real128 sqrt(real128 x) { return sqrtq(x); }
inline real128 cos(real128 x) { return cosq(x); }
inline real128 sin(real128 x) { return sinq(x); }
inline real128 exp(real128 x) { return expq(x); }
inline real128 log(real128 x) { return logq(x); }
inline real128 abs(real128 x) { return fabsq(x); }
inline double to_double(real128 x) { return static_cast<double>(x); }
#endif

inline BigFloat sqrt(const BigFloat& x) { return latgram::sqrt(x); }
inline BigFloat cos(const BigFloat& x) { return latgram::cos(x); }
inline BigFloat sin(const BigFloat& x) { return latgram::sin(x); }
inline BigFloat exp(const BigFloat& x) { return latgram::exp(x); }
inline BigFloat log(const BigFloat& x) { return latgram::log(x); }
inline BigFloat abs(const BigFloat& x) { return latgram::abs(x); }
inline double to_double(const BigFloat& x) { return x.to_double(); }

template <class Real>
Real pi() {
  return Real(3.14159265358979323846);
}
template <>
inline double pi<double>() {
  return 3.14159265358979323846;
}
#if LATGRAM_HAS_FLOAT128
template <>
inline real128 pi<real128>() {
  return M_PIq;
}
#endif
template <>
inline BigFloat pi<BigFloat>() {
  return BigFloat::pi();
}

/// Unit roundoff of the scalar type; BigFloat reports the current
/// thread-local default precision.
template <class Real>
Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}
#if LATGRAM_HAS_FLOAT128
template <>
inline real128 epsilon<real128>() {
  return FLT128_EPSILON;
}
#endif
template <>
inline BigFloat epsilon<BigFloat>() {
  BigFloat one(1.0);
  BigFloat e(1.0);
  mpfr_prec_t p = BigFloat::default_precision();
  for (mpfr_prec_t k = 1; k < p; ++k) e /= BigFloat(2.0);
  return e;
}

}  // namespace num

/// Working precision of the nearest-neighbor entry quadrature. Auto picks
/// the cheapest scalar whose roundoff floor stays below the expected entry
/// magnitude (the oscillatory integrand cancels down to ~z^(i+j) of its
/// own scale, so deep entries need wider accumulators).
enum class Precision : std::uint8_t { Auto, Double, Quad, Big };

}  // namespace latgram
