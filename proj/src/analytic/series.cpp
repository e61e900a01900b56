#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "accumulate.hpp"
#include "idv/analytic.hpp"
#include "idv/exactseq.hpp"

namespace idv::analytic {

using detail::euler_maclaurin_tail;
using detail::EulerMaclaurinTail;
using detail::exceeds_target;
using detail::FixedSum;
using detail::target_exponent;

std::string to_string(TailTechnique t) {
  switch (t) {
    case TailTechnique::alternating_next_term: return "alternating-next-term";
    case TailTechnique::integral_comparison: return "integral-comparison";
    case TailTechnique::paired_product: return "paired-product";
    case TailTechnique::stirling_remainder: return "stirling-remainder";
  }
  return "unknown";
}

namespace {

void check_base(LinearBase base, long start, std::uint64_t terms, const char* who) {
  if (base.a <= 0) throw std::invalid_argument(std::string(who) + ": slope must be positive");
  if (base.a * start + base.b <= 0) throw std::invalid_argument(std::string(who) + ": first base must be positive");
  const double last = static_cast<double>(base.a) * (static_cast<double>(start) + static_cast<double>(terms)) +
                      static_cast<double>(base.b);
  if (last >= static_cast<double>(std::numeric_limits<unsigned long>::max() / 2)) {
    throw std::invalid_argument(std::string(who) + ": term count too large");
  }
}

BallReal inverse_power_ball(const mpz_class& n, int s, Precision prec) {
  return pow(BallReal::from_integer(n, prec), -s);
}

}  // namespace

Evaluation alternating_power_sum(LinearBase base, long start, int s, Precision prec, std::uint64_t max_terms) {
  if (s < 1) throw std::invalid_argument("alternating_power_sum: exponent must be at least 1");
  if (max_terms == 0) throw std::invalid_argument("alternating_power_sum: need at least one term");

  // Tail after N terms is bounded by the first omitted term (a (start+N) + b)^-s.
  const double needed_base = target_exponent(prec) / s;
  std::uint64_t needed = 1;
  if (needed_base <= 18.0) {
    const double first_omitted = std::ceil(std::pow(10.0, needed_base));
    const double n = std::ceil((first_omitted - static_cast<double>(base.b)) / static_cast<double>(base.a)) -
                     static_cast<double>(start);
    needed = n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
  } else {
    needed = std::uint64_t{1} << 62;
  }
  const std::uint64_t terms = std::min(needed, max_terms);
  check_base(base, start, terms, "alternating_power_sum");

  FixedSum acc(prec);
  for (std::uint64_t i = 0; i < terms; ++i) {
    const long k = start + static_cast<long>(i);
    const auto n = static_cast<unsigned long>(base.a * k + base.b);
    if (k % 2 == 0) {
      acc.add_inverse_power(n, s);
    } else {
      acc.sub_inverse_power(n, s);
    }
  }

  const long next_k = start + static_cast<long>(terms);
  const mpz_class next_base = mpz_class(base.a) * next_k + base.b;
  BallReal tail = inverse_power_ball(next_base, s, prec);
  Evaluation out{acc.result().add_error(tail.upper(kRadiusBits)),
                 TailBound{TailTechnique::alternating_next_term, tail}, terms, 0, false};
  out.budget_exhausted = exceeds_target(tail, prec);
  return out;
}

Evaluation power_sum(LinearBase base, long start, int s, Precision prec, std::uint64_t max_terms) {
  if (s < 2) throw std::invalid_argument("power_sum: exponent must be at least 2");
  if (max_terms == 0) throw std::invalid_argument("power_sum: need at least one term");

  // Tail after the term at index K = start + N - 1:
  //   sum_{k > K} (a k + b)^-s <= (a K + b)^{1-s} / (a (s - 1)).
  const double log_last_base =
      (target_exponent(prec) - std::log10(static_cast<double>(base.a) * (s - 1))) / (s - 1);
  std::uint64_t needed = std::uint64_t{1} << 62;
  if (log_last_base <= 18.0) {
    const double last_base = std::ceil(std::pow(10.0, log_last_base));
    const double n = std::ceil((last_base - static_cast<double>(base.b)) / static_cast<double>(base.a)) -
                     static_cast<double>(start) + 1.0;
    needed = n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
  }
  const std::uint64_t terms = std::min(needed, max_terms);
  check_base(base, start, terms, "power_sum");

  FixedSum acc(prec);
  for (std::uint64_t i = 0; i < terms; ++i) {
    const long k = start + static_cast<long>(i);
    acc.add_inverse_power(static_cast<unsigned long>(base.a * k + base.b), s);
  }

  const long last_k = start + static_cast<long>(terms) - 1;
  const mpz_class last_base = mpz_class(base.a) * last_k + base.b;
  const BallReal tail = inverse_power_ball(last_base, s - 1, prec) / BallReal::from_integer(base.a * (s - 1), prec);
  Evaluation out{acc.result().add_error(tail.upper(kRadiusBits)),
                 TailBound{TailTechnique::integral_comparison, tail}, terms, 0, false};
  out.budget_exhausted = exceeds_target(tail, prec);
  return out;
}

Evaluation beta_series(int s, Precision prec, std::uint64_t max_terms) {
  if (s < 1) throw std::invalid_argument("beta_series: s must be at least 1");
  return alternating_power_sum(LinearBase{2, 1}, 0, s, prec, max_terms);
}

BallReal beta_closed(int s, Precision prec) {
  if (s < 1 || s % 2 == 0) {
    throw std::invalid_argument("beta_closed: no closed form implemented for s = " + std::to_string(s));
  }
  const int n = (s - 1) / 2;
  const mpz_class euler = abs(exactseq::euler_number(2 * n));
  const BallReal half_pi = const_pi(prec).mul_2exp(-1);
  const mpq_class coeff(euler, 2 * exactseq::factorial(2 * n));
  return BallReal::from_rational(coeff, prec) * pow(half_pi, s);
}

namespace {

mpz_class rising(long s, long count) {
  mpz_class out = 1;
  for (long i = 0; i < count; ++i) out *= s + i;
  return out;
}

}  // namespace

namespace detail {

EulerMaclaurinTail euler_maclaurin_tail(const BallReal& a, int s, int order, Precision prec) {
  BallReal estimate = pow(a, 1 - s) / BallReal::from_integer(s - 1, prec) + pow(a, -s).mul_2exp(-1);
  for (int k = 1; k <= order; ++k) {
    const mpq_class coeff = exactseq::bernoulli(2 * k) * mpq_class(rising(s, 2 * k - 1), exactseq::factorial(2 * k));
    estimate += BallReal::from_rational(coeff, prec) * pow(a, -s - 2 * k + 1);
  }
  // 2 zeta(2K) <= 4.
  const BallReal two_pi = const_pi(prec).mul_2exp(1);
  const BallReal remainder = BallReal::from_integer(4, prec) * BallReal::from_integer(rising(s, 2 * order - 1), prec) /
                             pow(two_pi, 2 * order) * pow(a, -s - 2 * order + 1);
  return {estimate, remainder};
}

}  // namespace detail

Evaluation zeta_even_series(int two_m, Precision prec, std::uint64_t max_terms, int euler_maclaurin_order) {
  if (two_m < 2 || two_m % 2 != 0) {
    throw std::invalid_argument("zeta_even_series: exponent must be even and at least 2, got " + std::to_string(two_m));
  }
  if (euler_maclaurin_order <= 0) return power_sum(LinearBase{1, 0}, 1, two_m, prec, max_terms);

  // Direct terms n = 1 .. N-1; the rest from the Euler-Maclaurin tail.
  std::uint64_t n = 2;
  for (; n < max_terms; n *= 2) {
    const EulerMaclaurinTail t = euler_maclaurin_tail(BallReal::from_integer(static_cast<long>(n), prec), two_m,
                                                      euler_maclaurin_order, prec);
    if (!exceeds_target(t.remainder, prec)) break;
  }
  n = std::min<std::uint64_t>(n, std::max<std::uint64_t>(max_terms, 2));
  FixedSum acc(prec);
  for (std::uint64_t k = 1; k < n; ++k) acc.add_inverse_power(static_cast<unsigned long>(k), two_m);
  const EulerMaclaurinTail t = euler_maclaurin_tail(BallReal::from_integer(static_cast<long>(n), prec), two_m,
                                                      euler_maclaurin_order, prec);
  Evaluation out{(acc.result() + t.estimate).add_error(t.remainder.upper(kRadiusBits)),
                 TailBound{TailTechnique::integral_comparison, t.remainder}, n - 1, 0, false};
  out.budget_exhausted = exceeds_target(t.remainder, prec);
  return out;
}

BallReal zeta_closed_even(int two_m, Precision prec) {
  if (two_m < 2 || two_m % 2 != 0) {
    throw std::invalid_argument("zeta_closed_even: exponent must be even and at least 2, got " + std::to_string(two_m));
  }
  const int m = two_m / 2;
  const mpq_class coeff = exactseq::bernoulli_hist(m) / mpq_class(2 * exactseq::factorial(two_m));
  return BallReal::from_rational(coeff, prec) * pow(const_pi(prec).mul_2exp(1), two_m);
}

}  // namespace idv::analytic
