#include <mutex>
#include <stdexcept>
#include <string>

#include "idv/exactseq.hpp"

namespace idv::exactseq {

std::vector<ExactInt> euler_numbers(int n_max) {
  if (n_max < 0) throw std::invalid_argument("euler_numbers: n_max must be nonnegative");
  // Coefficients of cosh(t) * sech(t) = 1:  sum_{k=0..n} C(2n, 2k) E_{2k} = 0 for n >= 1.
  std::vector<ExactInt> e;
  e.reserve(static_cast<std::size_t>(n_max) + 1);
  e.emplace_back(1);
  ExactInt c;
  for (int n = 1; n <= n_max; ++n) {
    ExactInt acc = 0;
    for (int k = 0; k < n; ++k) {
      mpz_bin_uiui(c.get_mpz_t(), 2UL * n, 2UL * k);
      acc += c * e[k];
    }
    e.push_back(-acc);
  }
  return e;
}

ExactInt euler_number(int n) {
  if (n < 0) throw std::invalid_argument("euler_number: index must be nonnegative");
  if (n % 2 == 1) return 0;
  return euler_numbers(n / 2).back();
}

ExactInt chrystal_euler(int m) {
  if (m < 1) throw std::invalid_argument("chrystal_euler: m must be at least 1");
  return abs(euler_numbers(m).back());
}

ExactRational bernoulli(int n) {
  if (n < 0) throw std::invalid_argument("bernoulli: index must be nonnegative");
  if (n == 1) return ExactRational(-1, 2);
  if (n % 2 == 1) return 0;

  static std::mutex mutex;
  static std::vector<ExactRational> even{ExactRational(1)};  // even[i] = B_{2i}
  std::lock_guard lock(mutex);
  const std::size_t want = static_cast<std::size_t>(n / 2);
  ExactInt c;
  while (even.size() <= want) {
    // sum_{k=0}^{m} C(m+1, k) B_k = 0 with m = 2i; only B_0, B_1 and even k contribute.
    const unsigned long m = 2UL * even.size();
    ExactRational acc = 0;
    for (std::size_t i = 0; i < even.size(); ++i) {
      mpz_bin_uiui(c.get_mpz_t(), m + 1, 2UL * i);
      acc += ExactRational(c) * even[i];
    }
    acc += ExactRational(static_cast<long>(m + 1)) * ExactRational(-1, 2);
    ExactRational b = -acc / ExactRational(static_cast<long>(m + 1));
    b.canonicalize();
    even.push_back(b);
  }
  return even[want];
}

ExactRational bernoulli_hist(int m) {
  if (m < 1) throw std::invalid_argument("bernoulli_hist: m must be at least 1");
  return abs(bernoulli(2 * m));
}

ExactInt factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial: argument must be nonnegative");
  ExactInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

ExactInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::invalid_argument("binomial: need 0 <= k <= n, got n=" + std::to_string(n) +
                                ", k=" + std::to_string(k));
  }
  ExactInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

}  // namespace idv::exactseq
