#include <algorithm>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "idv/exactseq.hpp"

namespace idv::exactseq {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (e > 0) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

// Miller-Rabin with the first twelve prime bases is exact below 3.3e24.
bool miller_rabin(std::uint64_t n) {
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (a % n == 0) continue;
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  return miller_rabin(n);
}

int chi4(std::uint64_t p) {
  if (p % 2 == 0 || !is_prime(p)) {
    throw std::invalid_argument("chi4: " + std::to_string(p) + " is not an odd prime");
  }
  return p % 4 == 1 ? 1 : -1;
}

std::vector<std::uint32_t> sieve_odd_primes(std::uint64_t limit) {
  if (limit < 3) throw std::invalid_argument("odd_primes: limit must be at least 3");
  if (limit > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("odd_primes: limit must be below 2^32");
  }
  // composite[i] describes the odd number 2i + 1.
  const std::size_t n = static_cast<std::size_t>((limit - 1) / 2) + 1;
  std::vector<bool> composite(n, false);
  composite[0] = true;
  for (std::size_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (composite[i]) continue;
    const std::size_t p = 2 * i + 1;
    for (std::size_t j = (p * p - 1) / 2; j < n; j += p) composite[j] = true;
  }
  std::vector<std::uint32_t> out;
  for (std::size_t i = 1; i < n; ++i) {
    if (!composite[i]) out.push_back(static_cast<std::uint32_t>(2 * i + 1));
  }
  return out;
}

PrimeStream odd_primes(std::uint64_t limit) {
  static std::shared_mutex mutex;
  static std::shared_ptr<const std::vector<std::uint32_t>> cache;
  static std::uint64_t cached_limit = 0;

  auto view = [limit](const std::shared_ptr<const std::vector<std::uint32_t>>& primes) {
    const auto end = std::upper_bound(primes->begin(), primes->end(), limit);
    return PrimeStream(primes, static_cast<std::size_t>(end - primes->begin()));
  };

  if (limit < 3) throw std::invalid_argument("odd_primes: limit must be at least 3");
  {
    std::shared_lock lock(mutex);
    if (cache && cached_limit >= limit) return view(cache);
  }
  std::unique_lock lock(mutex);
  if (!cache || cached_limit < limit) {
    cache = std::make_shared<const std::vector<std::uint32_t>>(sieve_odd_primes(limit));
    cached_limit = limit;
  }
  return view(cache);
}

}  // namespace idv::exactseq
