#ifndef IDV_ANALYTIC_HPP
#define IDV_ANALYTIC_HPP

// Rigorous evaluators for the Dirichlet beta and zeta series, their Euler
// products, and the alternating product over odd integers, together with the
// closed forms they equal.
//
// Every truncated evaluator returns the partial sum or product with the
// rounding error and a proven bound on the omitted tail folded into the
// radius.  Term counts are the smaller of the caller's cap and the count that
// pushes the tail below 10^-(digits + 2).

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "idv/mpball/ball.hpp"

namespace idv::analytic {

enum class TailTechnique {
  alternating_next_term,  // |tail| <= first omitted term
  integral_comparison,    // sum_{n>N} f(n) <= integral_N^inf f
  paired_product,         // log of paired factors, integral comparison
  stirling_remainder,
};

std::string to_string(TailTechnique t);

struct TailBound {
  TailTechnique technique;
  /// Upper bound on the omitted tail (for products: on |log tail|).
  BallReal value;
};

struct Evaluation {
  BallReal value;
  TailBound tail;
  std::uint64_t terms_used = 0;        // terms, pairs or primes multiplied in
  std::uint64_t prime_limit_used = 0;  // largest prime bound, 0 for non-prime evaluators
  /// The cap stopped the evaluation before the tail reached the target.
  bool budget_exhausted = false;
};

/// Linear base a*k + b with a > 0.
struct LinearBase {
  long a = 1;
  long b = 0;
};

/// sum_{k >= start} (-1)^k / (a k + b)^s, s >= 1, a*start + b > 0.
Evaluation alternating_power_sum(LinearBase base, long start, int s, Precision prec,
                                 std::uint64_t max_terms);

/// sum_{k >= start} 1 / (a k + b)^s, s >= 2, a*start + b > 0.
Evaluation power_sum(LinearBase base, long start, int s, Precision prec, std::uint64_t max_terms);

enum class Character { trivial, chi4 };

/// prod_{p odd prime <= P} (1 - c(p) p^-s)^e for e = +1 or -1, with
/// c(p) = +1 (trivial) or chi4(p), optionally negated.
struct EulerFactor {
  int s = 2;
  Character character = Character::trivial;
  bool negate = false;
  int exponent = -1;
};

Evaluation odd_prime_product(const EulerFactor& factor, Precision prec, std::uint64_t prime_limit);

/// beta(s) = sum_{m >= 0} (-1)^m / (2m + 1)^s.
Evaluation beta_series(int s, Precision prec, std::uint64_t max_terms);
/// beta(2n+1) = |E_{2n}| (pi/2)^{2n+1} / (2 (2n)!).  Odd s only.
BallReal beta_closed(int s, Precision prec);
/// prod_{p odd prime} p^s / (p^s - chi4(p)), s >= 2.
Evaluation beta_euler_product(int s, Precision prec, std::uint64_t prime_limit);

/// zeta(2m) = sum_{n >= 1} n^{-2m}.  `euler_maclaurin_order` > 0 adds that
/// many Euler-Maclaurin correction terms to the integral tail estimate and
/// bounds the remainder instead of the whole tail.
Evaluation zeta_even_series(int two_m, Precision prec, std::uint64_t max_terms,
                            int euler_maclaurin_order = 0);
/// zeta(2m) = (2 pi)^{2m} B_m / (2 (2m)!) with B_m the historical Bernoulli number.
BallReal zeta_closed_even(int two_m, Precision prec);
/// prod_{p prime} (1 - p^{-2m})^{-1}, including p = 2.
Evaluation zeta_euler_product(int two_m, Precision prec, std::uint64_t prime_limit);

/// P(s) = prod_{k >= 1} (1 - (-1)^k / (2k + 1)^s), evaluated in pairs
/// (1 + (4j-1)^{-s}) (1 - (4j+1)^{-s}), j = 1 .. max_pairs.  A positive
/// `euler_maclaurin_order` replaces the integral bound on the omitted pairs by
/// an Euler-Maclaurin estimate of their logarithm with a bounded remainder.
Evaluation odd_product_direct(int s, Precision prec, std::uint64_t max_pairs, int euler_maclaurin_order = 0);

/// Closed form of P(s) through Gamma values at roots-of-unity shifts:
///   P(s) = prod_{j<s} Gamma(5/4) Gamma(3/4) / (Gamma(1 + (1 - z_j)/4) Gamma((3 - x_j)/4))
/// with z_j = exp(2 pi i j / s) and x_j = exp(i pi (2j + 1) / s).
BallReal odd_product_closed(int s, Precision prec);

/// The complex product before conjugate pairing; its imaginary part must
/// contain zero.
BallComplex odd_product_closed_complex(int s, Precision prec);

}  // namespace idv::analytic

#endif  // IDV_ANALYTIC_HPP
