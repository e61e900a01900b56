#include <map>
#include <mutex>
#include <string>

#include "idv/mpball/ball.hpp"
#include "rounding.hpp"

namespace idv {

using detail::add_to;
using detail::add_ulp_if;

namespace {

using MpfrFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

// Image of x under a nondecreasing function, from the endpoint images.
BallReal monotone_image(const BallReal& x, MpfrFn fn) {
  const mpfr_prec_t bits = x.precision().bits();
  Float lo = x.lower(bits);
  Float hi = x.upper(bits);
  Float flo(bits), fhi(bits);
  fn(flo.get(), lo.get(), MPFR_RNDD);
  fn(fhi.get(), hi.get(), MPFR_RNDU);
  if (!flo.is_finite() || !fhi.is_finite()) throw OverflowError("exponent range overflow in elementary function");
  return BallReal::from_interval(flo, fhi, x.precision());
}

[[noreturn]] void domain_failure(const char* fn, const BallReal& x, const char* requirement) {
  throw DomainError(std::string(fn) + ": argument " + x.to_string(12) + " is not " + requirement);
}

// f(mid) plus a Lipschitz-1 perturbation bound, for sin and cos.
BallReal lipschitz_one(const BallReal& x, MpfrFn fn) {
  Float m(x.precision().bits());
  const int t = fn(m.get(), x.mid().get(), MPFR_RNDN);
  Float r(x.rad());
  add_ulp_if(r, m.get(), t);
  return BallReal(std::move(m), r, x.precision());
}

}  // namespace

BallReal exp(const BallReal& x) { return monotone_image(x, mpfr_exp); }
BallReal expm1(const BallReal& x) { return monotone_image(x, mpfr_expm1); }
BallReal sinh(const BallReal& x) { return monotone_image(x, mpfr_sinh); }

BallReal log(const BallReal& x) {
  if (!x.is_positive()) domain_failure("log", x, "strictly positive");
  return monotone_image(x, mpfr_log);
}

BallReal sqrt(const BallReal& x) {
  if (!x.is_nonnegative()) domain_failure("sqrt", x, "nonnegative");
  return monotone_image(x, mpfr_sqrt);
}

BallReal cosh(const BallReal& x) {
  const mpfr_prec_t bits = x.precision().bits();
  Float lo = x.lower(bits);
  Float hi = x.upper(bits);
  Float flo(bits), fhi(bits);
  if (x.contains_zero()) {
    mpfr_set_ui(flo.get(), 1, MPFR_RNDN);
    Float far(bits);
    mpfr_max(far.get(), lo.get(), hi.get(), MPFR_RNDU);
    mpfr_abs(lo.get(), lo.get(), MPFR_RNDU);
    mpfr_max(far.get(), far.get(), lo.get(), MPFR_RNDU);
    mpfr_cosh(fhi.get(), far.get(), MPFR_RNDU);
  } else if (x.is_positive()) {
    mpfr_cosh(flo.get(), lo.get(), MPFR_RNDD);
    mpfr_cosh(fhi.get(), hi.get(), MPFR_RNDU);
  } else {
    mpfr_cosh(flo.get(), hi.get(), MPFR_RNDD);
    mpfr_cosh(fhi.get(), lo.get(), MPFR_RNDU);
  }
  if (!fhi.is_finite()) throw OverflowError("exponent range overflow in cosh");
  return BallReal::from_interval(flo, fhi, x.precision());
}

BallReal sin(const BallReal& x) { return lipschitz_one(x, mpfr_sin); }
BallReal cos(const BallReal& x) { return lipschitz_one(x, mpfr_cos); }

BallReal atan2(const BallReal& y, const BallReal& x) {
  if (!x.is_positive() && y.contains_zero()) {
    throw DomainError("atan2: point (" + x.to_string(12) + ", " + y.to_string(12) +
                      ") meets the branch cut or the origin");
  }
  const Precision prec = max(x.precision(), y.precision());
  Float m(prec.bits());
  const int t = mpfr_atan2(m.get(), y.mid().get(), x.mid().get(), MPFR_RNDN);

  // The rectangle lies in a disk of radius rho = rx + ry about the midpoint;
  // seen from the origin that disk subtends at most asin(rho/|z|) <= (pi/2) rho/|z|.
  Float rho(kRadiusBits);
  mpfr_add(rho.get(), x.rad().get(), y.rad().get(), MPFR_RNDU);
  Float mod(kRadiusBits);
  mpfr_hypot(mod.get(), x.mid().get(), y.mid().get(), MPFR_RNDD);
  if (mpfr_cmp(rho.get(), mod.get()) >= 0) {
    throw DomainError("atan2: ball around (" + x.to_string(12) + ", " + y.to_string(12) +
                      ") may contain the origin");
  }
  Float r(kRadiusBits);
  mpfr_div(r.get(), rho.get(), mod.get(), MPFR_RNDU);
  mpfr_mul_d(r.get(), r.get(), 1.5707963267948968, MPFR_RNDU);
  add_ulp_if(r, m.get(), t);
  return BallReal(std::move(m), r, prec);
}

namespace {

// atan(1/x) = sum_k (-1)^k / ((2k+1) x^(2k+1)); alternating with decreasing
// terms, so the first omitted term bounds the tail.
BallReal atan_inverse(unsigned long x, Precision prec) {
  const mpfr_prec_t bits = prec.bits();
  const unsigned long x2 = x * x;
  BallReal power = BallReal::from_integer(1, prec).div_ui(x);
  BallReal sum = power;
  Float threshold(kRadiusBits);
  mpfr_set_ui_2exp(threshold.get(), 1, -(bits + 8), MPFR_RNDN);
  for (unsigned long k = 1;; ++k) {
    power = power.div_ui(x2);
    BallReal term = power.div_ui(2 * k + 1);
    if (k % 2 == 1) {
      sum -= term;
    } else {
      sum += term;
    }
    Float next = power.mag_upper();
    mpfr_div_ui(next.get(), next.get(), x2, MPFR_RNDU);
    if (mpfr_cmp(next.get(), threshold.get()) < 0) {
      return sum.add_error(next);
    }
  }
}

}  // namespace

BallReal const_pi(Precision prec) {
  static std::mutex mutex;
  static std::map<long, BallReal> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(prec.digits()); it != cache.end()) return it->second;
  }
  // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
  BallReal pi = atan_inverse(5, prec).mul_ui(16) - atan_inverse(239, prec).mul_ui(4);
  std::lock_guard lock(mutex);
  cache.emplace(prec.digits(), pi);
  return pi;
}

}  // namespace idv
