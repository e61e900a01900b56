#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "accumulate.hpp"
#include "idv/analytic.hpp"
#include "idv/exactseq.hpp"

namespace idv::analytic {

using detail::euler_maclaurin_tail;
using detail::exceeds_target;
using detail::ProductAccumulator;
using detail::target_exponent;

namespace {

constexpr std::uint64_t kMaxPrimeLimit = std::numeric_limits<std::uint32_t>::max() - 1;
constexpr std::uint64_t kMaxExactPairs = std::uint64_t{1} << 30;

// Smallest P that makes prime_tail(P, s) fall below the target, estimated in
// double precision and saturated at the sieve limit.
std::uint64_t primes_needed(int s, Precision prec) {
  const double log_p = (target_exponent(prec) - std::log10(2.0 * (s - 1))) / (s - 1);
  if (log_p >= std::log10(static_cast<double>(kMaxPrimeLimit))) return kMaxPrimeLimit;
  return std::max<std::uint64_t>(3, static_cast<std::uint64_t>(std::ceil(std::pow(10.0, log_p))) + 1);
}

// For primes p > P and |c| <= 1:
//   |log(1 - c p^-s)| <= p^-s / (1 - P^-s)
// and the odd n > P >= 2 satisfy n^-s <= (1/2) int_{n-2}^{n} x^-s dx, so
//   sum_{p > P} |log(1 - c p^-s)| <= (P-1)^{1-s} / (2 (s-1) (1 - P^-s)).
BallReal prime_tail(std::uint64_t limit, int s, Precision prec) {
  const BallReal p = BallReal::from_integer(static_cast<long>(limit), prec);
  const BallReal head = pow(p - 1, 1 - s) / BallReal::from_integer(2L * (s - 1), prec);
  return head / (1 - pow(p, -s));
}

// x * ball(1, e^T - 1) encloses x * e^L for every |L| <= T.
BallReal widen_two_sided(const BallReal& partial, const BallReal& tail) {
  const BallReal spread = expm1(BallReal(tail.upper(kRadiusBits), Float(kRadiusBits), partial.precision()));
  const BallReal factor = BallReal::from_integer(1, partial.precision()).add_error(spread.upper(kRadiusBits));
  return partial * factor;
}

// x * ball(1 + h, h) with h = (e^T - 1)/2 encloses x * e^L for 0 <= L <= T.
BallReal widen_one_sided(const BallReal& partial, const BallReal& tail) {
  const Precision prec = partial.precision();
  const BallReal spread = expm1(BallReal(tail.upper(kRadiusBits), Float(kRadiusBits), prec));
  const Float h = spread.mul_2exp(-1).upper(kRadiusBits);
  const BallReal factor = BallReal(h, h, prec) + 1;
  return partial * factor;
}

// out = x / n^s through divisions by chunks of n^s that fit in a limb.
void divide_by_power(mpfr_ptr out, mpfr_srcptr x, std::uint64_t n, int s) {
  mpfr_srcptr src = x;
  int left = s;
  while (left > 0) {
    unsigned __int128 d = n;
    --left;
    while (left > 0 && d * n <= ~std::uint64_t{0}) {
      d *= n;
      --left;
    }
    mpfr_div_ui(out, src, static_cast<unsigned long>(d), MPFR_RNDN);
    src = out;
  }
}

}  // namespace

namespace {

// Odd primes up to min(prime_limit, needed); prime_limit 2 means none.
Evaluation odd_prime_product_upto(const EulerFactor& factor, Precision prec, std::uint64_t prime_limit) {
  if (factor.s < 2) throw std::invalid_argument("odd_prime_product: exponent must be at least 2");
  if (factor.exponent != 1 && factor.exponent != -1) {
    throw std::invalid_argument("odd_prime_product: factor exponent must be +1 or -1");
  }
  const std::uint64_t limit = std::min({prime_limit, primes_needed(factor.s, prec), kMaxPrimeLimit});
  const exactseq::PrimeStream primes =
      limit >= 3 ? exactseq::odd_primes(limit)
                 : exactseq::PrimeStream(std::make_shared<std::vector<std::uint32_t>>(), 0);
  const auto s = static_cast<unsigned long>(factor.s);

  // Per prime: p^s, the subtraction, and two products or quotients; the
  // subtraction can amplify the relative error of p^s by at most 3/2.  Eight
  // counted roundings cover all of it.
  ProductAccumulator acc(prec);
  Float q(prec.bits());
  Float d(prec.bits());
  for (const std::uint32_t p : primes) {
    int c = factor.character == Character::chi4 ? (p % 4 == 1 ? 1 : -1) : 1;
    if (factor.negate) c = -c;
    mpfr_ui_pow_ui(q.get(), p, s, MPFR_RNDN);
    if (c > 0) {
      mpfr_sub_ui(d.get(), q.get(), 1, MPFR_RNDN);
    } else {
      mpfr_add_ui(d.get(), q.get(), 1, MPFR_RNDN);
    }
    if (factor.exponent > 0) {
      mpfr_mul(acc.value(), acc.value(), d.get(), MPFR_RNDN);
      mpfr_div(acc.value(), acc.value(), q.get(), MPFR_RNDN);
    } else {
      mpfr_mul(acc.value(), acc.value(), q.get(), MPFR_RNDN);
      mpfr_div(acc.value(), acc.value(), d.get(), MPFR_RNDN);
    }
    acc.count_roundings(8);
  }

  const BallReal tail = prime_tail(limit, factor.s, prec);
  Evaluation out{widen_two_sided(acc.result(), tail), TailBound{TailTechnique::integral_comparison, tail},
                 primes.size(), limit, false};
  out.budget_exhausted = exceeds_target(tail, prec);
  return out;
}

}  // namespace

Evaluation odd_prime_product(const EulerFactor& factor, Precision prec, std::uint64_t prime_limit) {
  if (prime_limit < 3) throw std::invalid_argument("odd_prime_product: prime limit must be at least 3");
  return odd_prime_product_upto(factor, prec, prime_limit);
}

Evaluation beta_euler_product(int s, Precision prec, std::uint64_t prime_limit) {
  if (s < 2) throw std::invalid_argument("beta_euler_product: s must be at least 2");
  if (prime_limit < 3) throw std::invalid_argument("beta_euler_product: prime limit must be at least 3");
  return odd_prime_product(EulerFactor{s, Character::chi4, false, -1}, prec, prime_limit);
}

Evaluation zeta_euler_product(int two_m, Precision prec, std::uint64_t prime_limit) {
  if (two_m < 2 || two_m % 2 != 0) {
    throw std::invalid_argument("zeta_euler_product: exponent must be even and at least 2, got " +
                                std::to_string(two_m));
  }
  if (prime_limit < 2) throw std::invalid_argument("zeta_euler_product: prime limit must be at least 2");
  Evaluation odd = odd_prime_product_upto(EulerFactor{two_m, Character::trivial, false, -1}, prec, prime_limit);
  mpz_class two_pow;
  mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(two_m));
  const mpq_class two_factor(two_pow, two_pow - 1);
  odd.value = odd.value * BallReal::from_rational(two_factor, prec);
  return odd;
}

namespace {

struct PairedTail {
  BallReal estimate;
  BallReal error;  // bound on |log tail - estimate|
};

// Log of the omitted pairs j > J, expanding each logarithm:
//   s = 1:   sum_r 16^-r / r * sum_{j>J} j^-2r
//   s >= 2:  sum_r ((-1)^{r+1} sum_{j>J} (4j-1)^-rs - sum_{j>J} (4j+1)^-rs) / r
// Inner sums come from Euler-Maclaurin; orders past the last r are bounded
// geometrically through x_j^r <= x_j q^{r-1}.
PairedTail paired_log_tail(int s, long big_j, int order, Precision prec) {
  const BallReal one = BallReal::from_integer(1, prec);
  BallReal estimate(prec);
  BallReal error(prec);
  BallReal rest(prec);
  if (s == 1) {
    const BallReal q = one / BallReal::from_integer(16 * big_j * big_j, prec);
    const BallReal first = one / BallReal::from_integer(16 * big_j, prec);
    const BallReal a = BallReal::from_integer(big_j + 1, prec);
    for (int r = 1;; ++r) {
      const auto em = euler_maclaurin_tail(a, 2 * r, order, prec);
      const BallReal weight = pow(BallReal::from_integer(16, prec), -r) / BallReal::from_integer(r, prec);
      estimate += em.estimate * weight;
      error += em.remainder * weight;
      rest = first * pow(q, r) / (one - q);
      if (!exceeds_target(rest, prec) || r >= 64) break;
    }
  } else {
    const BallReal q = pow(BallReal::from_integer(4 * big_j + 3, prec), -s);
    const BallReal first =
        pow(BallReal::from_integer(4 * big_j - 1, prec), 1 - s) / BallReal::from_integer(4 * (s - 1), prec);
    const BallReal below = BallReal::from_rational(mpq_class(4 * big_j + 3, 4), prec);
    const BallReal above = BallReal::from_rational(mpq_class(4 * big_j + 5, 4), prec);
    for (int r = 1;; ++r) {
      const int t = r * s;
      const auto x = euler_maclaurin_tail(below, t, order, prec);
      const auto y = euler_maclaurin_tail(above, t, order, prec);
      const BallReal weight = one.mul_2exp(-2L * t) / BallReal::from_integer(r, prec);
      estimate += ((r % 2 == 1 ? x.estimate : -x.estimate) - y.estimate) * weight;
      error += (x.remainder + y.remainder) * weight;
      rest = first.mul_2exp(1) * pow(q, r) / (one - q);
      if (!exceeds_target(rest, prec) || r >= 64) break;
    }
  }
  return {estimate, error + rest};
}

}  // namespace

Evaluation odd_product_direct(int s, Precision prec, std::uint64_t max_pairs, int euler_maclaurin_order) {
  if (s < 1) throw std::invalid_argument("odd_product_direct: s must be at least 1");
  if (max_pairs == 0) throw std::invalid_argument("odd_product_direct: need at least one pair");

  // Pair j = (1 + (4j-1)^-s)(1 - (4j+1)^-s) exceeds 1, so the log tail lies
  // in [0, T].  Since x^-s is convex,
  //   sum_{j>J} (4j-1)^-s - (4j+1)^-s <= (4J+1)^-s / 2.
  // For s = 1 the pair is 16j^2 / (16j^2 - 1) and
  //   sum_{j>J} 1/(16j^2 - 1) <= int_J^inf dx/(16x^2 - 1) <= 1/(4(4J - 1)).
  const double t = target_exponent(prec);
  std::uint64_t needed = std::uint64_t{1} << 62;
  std::optional<PairedTail> corrected;
  if (euler_maclaurin_order > 0) {
    for (needed = 8;; needed *= 2) {
      corrected = paired_log_tail(s, static_cast<long>(std::min(needed, max_pairs)), euler_maclaurin_order, prec);
      if (!exceeds_target(corrected->error, prec) || needed >= max_pairs) break;
    }
  } else if (s == 1) {
    if (t <= 17.0) needed = static_cast<std::uint64_t>(std::ceil(std::pow(10.0, t) / 16.0)) + 1;
  } else {
    const double log_base = (t - std::log10(2.0)) / s;
    if (log_base <= 17.0) needed = static_cast<std::uint64_t>(std::ceil(std::pow(10.0, log_base) / 4.0)) + 1;
  }
  std::uint64_t pairs = std::min(needed, max_pairs);
  if (pairs >= kMaxExactPairs) {
    throw std::invalid_argument("odd_product_direct: at most 2^30 pairs are supported");
  }

  ProductAccumulator acc(prec);
  if (s == 1) {
    for (std::uint64_t j = 1; j <= pairs; ++j) {
      const unsigned long n = 16UL * j * j;
      mpfr_mul_ui(acc.value(), acc.value(), n, MPFR_RNDN);
      mpfr_div_ui(acc.value(), acc.value(), n - 1, MPFR_RNDN);
    }
    acc.count_roundings(2 * pairs);
  } else {
    // P (1 + x^-s) = P + P / x^s with x^s split into single-limb divisors.
    // The quotient carries at most s roundings, but it is scaled by
    // x^-s / (1 + x^-s) <= 1/(s 3^s) relative to the result, so each update
    // costs at most 2u; the same holds for P - P / y^s.
    Float t(prec.bits());
    for (std::uint64_t j = 1; j <= pairs; ++j) {
      divide_by_power(t.get(), acc.value(), 4 * j - 1, s);
      mpfr_add(acc.value(), acc.value(), t.get(), MPFR_RNDN);
      divide_by_power(t.get(), acc.value(), 4 * j + 1, s);
      mpfr_sub(acc.value(), acc.value(), t.get(), MPFR_RNDN);
    }
    acc.count_roundings(4 * pairs);
  }

  const long big_j = static_cast<long>(pairs);
  if (corrected) {
    const BallReal log_tail = corrected->estimate.add_error(corrected->error.upper(kRadiusBits));
    Evaluation out{acc.result() * exp(log_tail), TailBound{TailTechnique::paired_product, corrected->error}, pairs,
                   0, false};
    out.budget_exhausted = exceeds_target(corrected->error, prec);
    return out;
  }
  BallReal tail(prec);
  if (s == 1) {
    tail = 1 / BallReal::from_integer(4 * (4 * big_j - 1), prec);
  } else {
    tail = pow(BallReal::from_integer(4 * big_j + 1, prec), -s).mul_2exp(-1);
  }
  Evaluation out{widen_one_sided(acc.result(), tail), TailBound{TailTechnique::paired_product, tail}, pairs, 0,
                 false};
  out.budget_exhausted = exceeds_target(tail, prec);
  return out;
}

namespace {

struct GammaArguments {
  BallComplex even;  // 1 + (1 - zeta_j)/4
  BallComplex odd;   // (3 - xi_j)/4
};

GammaArguments closed_arguments(int j, int s, Precision prec) {
  const BallComplex zeta = root_of_unity(2L * j, s, prec);
  const BallComplex xi = root_of_unity(2L * j + 1, s, prec);
  const BallComplex one(BallReal::from_integer(1, prec));
  const BallComplex three(BallReal::from_integer(3, prec));
  const BallReal quarter = BallReal::from_integer(1, prec).mul_2exp(-2);
  return {one + (one - zeta) * quarter, (three - xi) * quarter};
}

BallReal gamma_numerator(Precision prec) {
  const BallReal quarter = BallReal::from_integer(1, prec).mul_2exp(-2);
  return gamma(quarter * 5) * gamma(quarter * 3);
}

void check_balanced(int s, Precision prec) {
  // The Weierstrass products only combine into Gamma quotients when the
  // shifts on top and bottom have equal sums: sum_j (zeta_j + xi_j) = 0.
  BallComplex total{BallReal(prec)};
  for (int j = 0; j < s; ++j) total = total + root_of_unity(2L * j, s, prec) + root_of_unity(2L * j + 1, s, prec);
  if (!total.contains_zero()) {
    throw std::logic_error("odd_product_closed: unbalanced Gamma arguments for s = " + std::to_string(s));
  }
}

}  // namespace

BallComplex odd_product_closed_complex(int s, Precision prec) {
  if (s < 1) throw std::invalid_argument("odd_product_closed: s must be at least 1");
  check_balanced(s, prec);
  const BallComplex numerator(gamma_numerator(prec));
  BallComplex out(BallReal::from_integer(1, prec));
  for (int j = 0; j < s; ++j) {
    const GammaArguments args = closed_arguments(j, s, prec);
    out = out * numerator / (gamma(args.even) * gamma(args.odd));
  }
  return out;
}

BallReal odd_product_closed(int s, Precision prec) {
  if (s < 1) throw std::invalid_argument("odd_product_closed: s must be at least 1");
  check_balanced(s, prec);

  // Gamma(conj z) = conj Gamma(z): zeta_j pairs with zeta_{s-j} and xi_j
  // with xi_{s-1-j}, so each conjugate pair contributes |Gamma|^2.
  BallReal denominator = BallReal::from_integer(1, prec);
  for (int j = 1; 2 * j < s; ++j) denominator = denominator * norm(gamma(closed_arguments(j, s, prec).even));
  if (s % 2 == 0) denominator = denominator * gamma(BallReal::from_rational(mpq_class(3, 2), prec));
  for (int j = 0; 2 * j + 1 < s; ++j) denominator = denominator * norm(gamma(closed_arguments(j, s, prec).odd));
  // zeta_0 = 1 and, for odd s, xi = -1 both give Gamma(1) = 1.
  return pow(gamma_numerator(prec), s) / denominator;
}

}  // namespace idv::analytic
