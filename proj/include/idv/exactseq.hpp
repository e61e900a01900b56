#ifndef IDV_EXACTSEQ_HPP
#define IDV_EXACTSEQ_HPP

// Exact integer and rational sequences: Euler numbers, Bernoulli numbers,
// factorials and binomials, the odd primes and the character mod 4.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <gmpxx.h>

namespace idv::exactseq {

using ExactInt = mpz_class;
using ExactRational = mpq_class;  // always canonical: den > 0, gcd(num, den) = 1

/// Even-index Euler numbers [E_0, E_2, ..., E_{2 n_max}] in the modern
/// convention (sech(t) = sum E_n t^n / n!), so E_2 = -1, E_4 = 5.
std::vector<ExactInt> euler_numbers(int n_max);

/// Modern E_n for any n >= 0; zero for odd n.
ExactInt euler_number(int n);

/// The positive sequence |E_{2m}| = 1, 5, 61, 1385, ... indexed from m = 1.
ExactInt chrystal_euler(int m);

/// Modern Bernoulli number B_n (B_1 = -1/2).  Cached; safe to call concurrently.
ExactRational bernoulli(int n);

/// Historical Bernoulli number |B_{2m}|: 1/6, 1/30, 1/42, 1/30, 5/66, ...
ExactRational bernoulli_hist(int m);

ExactInt factorial(long n);
ExactInt binomial(long n, long k);

/// Deterministic primality test for 64-bit integers.
bool is_prime(std::uint64_t n);

/// +1 for p = 1 (mod 4), -1 for p = 3 (mod 4); p must be an odd prime.
int chi4(std::uint64_t p);

/// Ascending odd primes up to a limit.  Cheap to copy: views share one
/// memoized sieve, which is safe to read from several threads.
class PrimeStream {
 public:
  using const_iterator = std::vector<std::uint32_t>::const_iterator;

  PrimeStream(std::shared_ptr<const std::vector<std::uint32_t>> primes, std::size_t count)
      : primes_(std::move(primes)), count_(count) {}

  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  std::uint32_t operator[](std::size_t i) const { return (*primes_)[i]; }
  const_iterator begin() const { return primes_->begin(); }
  const_iterator end() const { return primes_->begin() + static_cast<std::ptrdiff_t>(count_); }
  std::uint32_t back() const { return (*primes_)[count_ - 1]; }

 private:
  std::shared_ptr<const std::vector<std::uint32_t>> primes_;
  std::size_t count_;
};

/// All odd primes <= limit, ascending.  Requires 3 <= limit < 2^32.
PrimeStream odd_primes(std::uint64_t limit);

/// Plain odd-only sieve of Eratosthenes, uncached.
std::vector<std::uint32_t> sieve_odd_primes(std::uint64_t limit);

}  // namespace idv::exactseq

#endif  // IDV_EXACTSEQ_HPP
