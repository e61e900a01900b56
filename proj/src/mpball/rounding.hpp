#ifndef IDV_SRC_MPBALL_ROUNDING_HPP
#define IDV_SRC_MPBALL_ROUNDING_HPP

// Helpers for radius bookkeeping.  All radius arithmetic rounds upward so the
// stored radius is never smaller than the true error bound.

#include <string>

#include <mpfr.h>

#include "idv/errors.hpp"
#include "idv/mpball/ball.hpp"
#include "idv/mpball/float.hpp"

namespace idv::detail {

inline Float rad_zero() { return Float(kRadiusBits); }

/// Upper bound for the rounding error of a result rounded to nearest with a
/// nonzero ternary value: one unit in the last place.
inline void add_ulp(Float& rad, mpfr_srcptr value) {
  if (mpfr_zero_p(value) || !mpfr_number_p(value)) return;
  Float ulp(kRadiusBits);
  mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(value) - mpfr_get_prec(value), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), ulp.get(), MPFR_RNDU);
}

inline void add_ulp_if(Float& rad, mpfr_srcptr value, int ternary) {
  if (ternary != 0) add_ulp(rad, value);
}

/// rad += |a * b|, rounded up.
inline void add_abs_product(Float& rad, mpfr_srcptr a, mpfr_srcptr b) {
  Float t(kRadiusBits);
  mpfr_mul(t.get(), a, b, MPFR_RNDA);
  mpfr_abs(t.get(), t.get(), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), t.get(), MPFR_RNDU);
}

inline void add_to(Float& rad, mpfr_srcptr x) { mpfr_add(rad.get(), rad.get(), x, MPFR_RNDU); }

/// |x| rounded down / up to radius precision.
inline Float abs_down(mpfr_srcptr x) {
  Float t(kRadiusBits);
  mpfr_abs(t.get(), x, MPFR_RNDZ);
  return t;
}
inline Float abs_up(mpfr_srcptr x) {
  Float t(kRadiusBits);
  mpfr_abs(t.get(), x, MPFR_RNDA);
  return t;
}

inline void check_finite(const Float& mid, const Float& rad, const char* op) {
  if (!mid.is_finite() || !rad.is_finite()) {
    throw OverflowError(std::string("exponent range overflow in ") + op);
  }
}

}  // namespace idv::detail

#endif  // IDV_SRC_MPBALL_ROUNDING_HPP
