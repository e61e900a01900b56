// Gamma function for real and complex balls.
//
// For Re z >= 1/2 the argument is shifted to w = z + N with Re w above a
// precision-dependent threshold, and log Gamma(w) is evaluated from the
// Stirling series
//
//   log Gamma(w) = (w - 1/2) log w - w + log(2 pi)/2
//                  + sum_{k=1}^{K-1} B_{2k} / (2k (2k-1) w^{2k-1}) + R_K(w),
//
//   |R_K(w)| <= |B_{2K}| / (2K (2K-1) |w|^{2K-1}) * sec^{2K}(arg(w)/2).
//
// Then Gamma(z) = exp(log Gamma(w)) / (z (z+1) ... (z+N-1)).  Arguments with
// Re z < 1/2 go through the reflection formula Gamma(z) Gamma(1-z) = pi / sin(pi z).

#include <cmath>
#include <string>

#include "idv/exactseq.hpp"
#include "idv/mpball/ball.hpp"
#include "rounding.hpp"

namespace idv {

namespace {

// True when the real interval of `x` contains an integer <= 0.
bool meets_nonpositive_integer(const BallReal& x) {
  const mpfr_prec_t bits = x.precision().bits();
  Float lo = x.lower(bits);
  if (lo.sign() > 0) return false;
  Float hi = x.upper(bits);
  Float first(bits);
  mpfr_ceil(first.get(), lo.get());
  return mpfr_cmp(first.get(), hi.get()) <= 0;
}

// log10 of the Stirling term magnitude |B_{2k}| / (2k (2k-1) x^{2k-1}),
// estimated in double precision from |B_{2k}| ~ 2 (2k)! / (2 pi)^{2k}.
double stirling_term_log2(int k, double x) {
  const double two_k = 2.0 * k;
  const double log_b = std::log(2.0) + std::lgamma(two_k + 1.0) - two_k * std::log(2.0 * M_PI);
  return (log_b - std::log(two_k * (two_k - 1.0)) - (two_k - 1.0) * std::log(x)) / std::log(2.0);
}

struct StirlingPlan {
  long shift;  // N
  int terms;   // K: the series keeps k = 1 .. K-1
};

StirlingPlan plan_stirling(double re_mid, mpfr_prec_t bits) {
  const double threshold = 0.2 * static_cast<double>(bits) + 10.0;
  StirlingPlan plan{0, 1};
  if (re_mid < threshold) plan.shift = static_cast<long>(std::ceil(threshold - re_mid));
  const double x = re_mid + static_cast<double>(plan.shift);
  const double target = -static_cast<double>(bits) - 8.0;
  int k = 1;
  while (stirling_term_log2(k, x) > target) ++k;
  plan.terms = k;
  return plan;
}

BallComplex gamma_stirling(const BallComplex& z) {
  const Precision prec = z.precision();
  const StirlingPlan plan = plan_stirling(z.re().mid().to_double(), prec.bits());

  BallComplex w = z;
  BallComplex rising(BallReal::from_integer(1, prec));
  for (long i = 0; i < plan.shift; ++i) {
    rising = rising * w;
    w = w + 1;
  }

  const BallReal pi = const_pi(prec);
  const BallComplex log_w = log(w);
  const BallReal half = BallReal::from_integer(1, prec).mul_2exp(-1);
  BallComplex log_gamma = (w - BallComplex(half)) * log_w - w;
  log_gamma = log_gamma + BallComplex(log(pi.mul_2exp(1)).mul_2exp(-1));

  const BallComplex inv_w = BallComplex(BallReal::from_integer(1, prec)) / w;
  const BallComplex inv_w2 = inv_w * inv_w;
  BallComplex power = inv_w;  // w^{-(2k-1)}
  for (int k = 1; k < plan.terms; ++k) {
    const mpq_class coeff = exactseq::bernoulli(2 * k) / mpq_class(2L * k * (2L * k - 1));
    log_gamma = log_gamma + power * BallReal::from_rational(coeff, prec);
    power = power * inv_w2;
  }

  // Remainder bound; cos^2(arg(w)/2) = (|w| + Re w) / (2|w|).
  const int K = plan.terms;
  const BallReal modulus = sqrt(norm(w));
  const BallReal mod_lo = BallReal(modulus.lower(kRadiusBits), Float(kRadiusBits), prec);
  const BallReal mod_hi = BallReal(modulus.upper(kRadiusBits), Float(kRadiusBits), prec);
  const BallReal re_lo = BallReal(w.re().lower(kRadiusBits), Float(kRadiusBits), prec);
  if (!mod_lo.is_positive() || !re_lo.is_positive()) {
    throw DomainError("gamma: shifted argument " + w.to_string(12) + " left the Stirling region");
  }
  const mpq_class lead = abs(exactseq::bernoulli(2 * K)) / mpq_class(2L * K * (2L * K - 1));
  const BallReal sec_factor = pow(mod_hi.mul_2exp(1) / (mod_lo + re_lo), K);
  const BallReal bound = BallReal::from_rational(lead, prec) * sec_factor / pow(mod_lo, 2L * K - 1);
  const Float remainder = bound.upper(kRadiusBits);
  log_gamma = BallComplex(log_gamma.re().add_error(remainder), log_gamma.im().add_error(remainder));

  const BallComplex value = exp(log_gamma);
  return plan.shift == 0 ? value : value / rising;
}

void check_pole(const BallComplex& z) {
  if (z.im().contains_zero() && meets_nonpositive_integer(z.re())) {
    throw DomainError("Gamma pole: argument " + z.to_string(12) + " meets a nonpositive integer");
  }
}

}  // namespace

BallComplex gamma(const BallComplex& z) {
  check_pole(z);
  const Precision prec = z.precision();
  const BallReal half = BallReal::from_integer(1, prec).mul_2exp(-1);
  if (mpfr_cmp(z.re().mid().get(), half.mid().get()) >= 0) return gamma_stirling(z);

  const BallReal pi = const_pi(prec);
  const BallComplex one_minus = BallComplex(BallReal::from_integer(1, prec)) - z;
  const BallComplex s = sin(z * pi);
  if (s.contains_zero()) {
    throw DomainError("Gamma pole: argument " + z.to_string(12) + " is too close to a nonpositive integer");
  }
  return BallComplex(pi) / (s * gamma_stirling(one_minus));
}

BallReal gamma(const BallReal& x) {
  if (meets_nonpositive_integer(x)) {
    throw DomainError("Gamma pole: argument " + x.to_string(12) + " meets a nonpositive integer");
  }
  return gamma(BallComplex(x)).re();
}

}  // namespace idv
