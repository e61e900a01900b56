#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "idv/analytic.hpp"
#include "idv/exactseq.hpp"

using namespace idv;
using namespace idv::analytic;

namespace {

const Precision p30{30};

mpq_class ten_to_minus(int d) {
  mpz_class t;
  mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(d));
  return mpq_class(mpz_class(1), t);
}

BallReal pi(Precision p = p30) { return const_pi(p); }
BallReal n(long v, Precision p = p30) { return BallReal::from_integer(v, p); }

// |mid difference| + both radii: every point of one ball within this of every point of the other.
mpq_class spread(const BallReal& a, const BallReal& b) {
  return abs(a.mid().to_rational() - b.mid().to_rational()) + a.rad().to_rational() + b.rad().to_rational();
}

mpq_class upper(const BallReal& b) { return b.upper(64).to_rational(); }

}  // namespace

TEST_CASE("beta series") {
  const Evaluation two = beta_series(3, p30, 2);
  CHECK(two.terms_used == 2);
  CHECK(two.tail.technique == TailTechnique::alternating_next_term);
  CHECK(two.value.mid_string(6) == "0.962963");
  CHECK(two.value.rad().to_rational() >= mpq_class(1, 125));
  CHECK(two.budget_exhausted);

  const Evaluation nine = beta_series(9, p30, 10000000);
  CHECK_FALSE(nine.budget_exhausted);
  CHECK(nine.value.mid_string(9) == "0.999949684");
  CHECK(overlaps(nine.value, beta_closed(9, p30)));

  const Evaluation leibniz = beta_series(1, p30, 1000000);
  CHECK(overlaps(leibniz.value, pi() / 4));
  CHECK(leibniz.value.rad().to_rational() <= ten_to_minus(6));
}

TEST_CASE("beta closed form") {
  const BallReal oracle = n(1385) * pow(pi(), 9) / (n(1024) * n(40320));
  CHECK(overlaps(beta_closed(9, p30), oracle));
  CHECK(overlaps(beta_closed(1, p30), pi() / 4));
  const BallReal b3 = beta_closed(3, p30);
  CHECK(overlaps(b3, pow(pi(), 3) / 32));
  CHECK(b3.mid_string(10) == "0.9689461463");
  CHECK(overlaps(b3, beta_series(3, Precision{12}, 10000000).value));
  CHECK_THROWS(beta_closed(4, p30));
}

TEST_CASE("beta euler product") {
  // (27/28)(125/124)(343/344)(1331/1332)(2197/2196)(4913/4912)
  mpq_class partial = 1;
  for (long p : {3L, 5L, 7L, 11L, 13L, 17L}) {
    const mpz_class c = p * p * p;
    partial *= mpq_class(c, c - exactseq::chi4(static_cast<std::uint64_t>(p)));
  }
  const Evaluation small = beta_euler_product(3, p30, 17);
  CHECK(small.value.contains(partial));
  CHECK(small.value.mid_string(6) == "0.969147");
  CHECK(small.tail.technique == TailTechnique::integral_comparison);
  CHECK(overlaps(small.value, beta_closed(3, p30)));

  const Evaluation nine = beta_euler_product(9, p30, 1000);
  CHECK(spread(nine.value, beta_closed(9, p30)) <= ten_to_minus(20));

  const Evaluation big = beta_euler_product(3, p30, 2000000);
  CHECK(big.value.contains(beta_closed(3, p30).mid().to_rational()));
  CHECK(overlaps(big.value, pow(pi(), 3) / 32));
  CHECK(big.value.rad().to_rational() <= ten_to_minus(10));

  CHECK_THROWS(beta_euler_product(3, p30, 2));
  CHECK_THROWS(beta_euler_product(1, p30, 1000));
}

TEST_CASE("zeta evaluators") {
  const BallReal z2 = zeta_closed_even(2, p30);
  CHECK(overlaps(z2, sqr(pi()) / 6));
  CHECK(z2.mid_string(11) == "1.6449340668");

  const Evaluation two = zeta_even_series(2, p30, 2);
  CHECK(two.value.mid().to_rational() == mpq_class(5, 4));
  CHECK(two.value.rad().to_rational() >= mpq_class(1, 2));
  CHECK(two.tail.value.contains(mpq_class(1, 2)));

  const Evaluation prod = zeta_euler_product(4, p30, 1000);
  CHECK(overlaps(prod.value, pow(pi(), 4) / 90));
  CHECK(spread(prod.value, pow(pi(), 4) / 90) <= ten_to_minus(8));

  const Evaluation em = zeta_even_series(2, Precision{40}, 100000, 10);
  CHECK_FALSE(em.budget_exhausted);
  CHECK(spread(em.value, zeta_closed_even(2, Precision{40})) <= ten_to_minus(38));

  CHECK_THROWS(zeta_even_series(3, p30, 10));
  CHECK_THROWS(zeta_closed_even(5, p30));
  CHECK_THROWS(zeta_euler_product(7, p30, 100));
}

TEST_CASE("odd product, direct") {
  const Evaluation one = odd_product_direct(1, p30, 1);
  CHECK(one.terms_used == 1);
  CHECK(one.value.contains(mpq_class(16, 15)));
  CHECK(overlaps(one.value, pi() * sqrt(n(2)) / 4));

  // Pairs j = 1..5 multiply to prod 1 + 1/(16 j^2 - 1), which the enclosure must contain.
  mpq_class partial = 1;
  for (long j = 1; j <= 5; ++j) {
    partial *= mpq_class(16 * j * j, 16 * j * j - 1);
    CHECK(odd_product_direct(1, p30, static_cast<std::uint64_t>(j)).value.contains(partial));
  }

  const Evaluation three = odd_product_direct(3, p30, 10000);
  CHECK(three.value.rad().to_rational() <= ten_to_minus(10));
  CHECK(three.value.mid_string(8) == "1.0308118");
  CHECK(overlaps(three.value, odd_product_closed(3, p30)));
}

TEST_CASE("odd product, Euler-Maclaurin tail") {
  const Precision p40{40};
  const Evaluation s1 = odd_product_direct(1, p40, 1000000, 12);
  CHECK_FALSE(s1.budget_exhausted);
  CHECK(spread(s1.value, const_pi(p40) * sqrt(n(2, p40)) / 4) <= ten_to_minus(38));
  for (int s = 2; s <= 5; ++s) {
    const Evaluation em = odd_product_direct(s, p40, 1000000, 12);
    CHECK_FALSE(em.budget_exhausted);
    CHECK(spread(em.value, odd_product_closed(s, p40)) <= ten_to_minus(25));
  }
}

TEST_CASE("odd product, closed form") {
  CHECK(overlaps(odd_product_closed(1, p30), pi() * sqrt(n(2)) / 4));
  const BallReal c3 = odd_product_closed(3, p30);
  CHECK(c3.mid_string(8) == "1.0308118");
  CHECK(overlaps(c3, pi() / 12 + pi() * sqrt(n(2)) / 12 * cosh(pi() * sqrt(n(3)) / 4)));
  CHECK_FALSE(overlaps(c3, pi() / 12 + pi() * sqrt(n(2)) / 12 * cosh(pi() * sqrt(n(2)) / 4)));
  CHECK_THROWS(odd_product_closed(0, p30));
}

TEST_CASE("property: beta triple intersection") {
  for (int s : {3, 5, 7, 9}) {
    CAPTURE(s);
    const BallReal series = beta_series(s, p30, 1000000).value;
    const BallReal closed = beta_closed(s, p30);
    const BallReal product = beta_euler_product(s, p30, 100000).value;
    CHECK(overlaps(series, closed));
    CHECK(overlaps(series, product));
    CHECK(overlaps(closed, product));
  }
}

TEST_CASE("property: zeta triple intersection") {
  for (int two_m : {2, 4, 6, 8, 10}) {
    CAPTURE(two_m);
    const BallReal series = zeta_even_series(two_m, p30, 1000000).value;
    const BallReal closed = zeta_closed_even(two_m, p30);
    const BallReal product = zeta_euler_product(two_m, p30, 100000).value;
    CHECK(overlaps(series, closed));
    CHECK(overlaps(series, product));
    CHECK(overlaps(closed, product));
  }
}

TEST_CASE("property: direct and closed odd products intersect") {
  for (int s = 1; s <= 8; ++s) {
    CAPTURE(s);
    CHECK(overlaps(odd_product_direct(s, p30, 100000).value, odd_product_closed(s, p30)));
    CHECK(odd_product_closed_complex(s, p30).im().contains_zero());
  }
}

TEST_CASE("property: monotone refinement") {
  auto refine = [](auto evaluate, std::uint64_t start) {
    Evaluation prev = evaluate(start);
    for (std::uint64_t cap = 2 * start; cap <= 64 * start; cap *= 2) {
      const Evaluation next = evaluate(cap);
      CHECK(overlaps(prev.value, next.value));
      CHECK(upper(next.tail.value) < upper(prev.tail.value));
      prev = next;
    }
  };
  refine([](std::uint64_t c) { return beta_series(3, p30, c); }, 10);
  refine([](std::uint64_t c) { return beta_series(1, p30, c); }, 10);
  refine([](std::uint64_t c) { return zeta_even_series(2, p30, c); }, 10);
  refine([](std::uint64_t c) { return power_sum({3, 1}, 0, 4, p30, c); }, 10);
  refine([](std::uint64_t c) { return alternating_power_sum({4, 1}, 0, 2, p30, c); }, 10);
  refine([](std::uint64_t c) { return beta_euler_product(3, p30, c); }, 20);
  refine([](std::uint64_t c) { return zeta_euler_product(2, p30, c); }, 20);
  refine([](std::uint64_t c) { return odd_product_direct(1, p30, c); }, 10);
  refine([](std::uint64_t c) { return odd_product_direct(4, p30, c); }, 10);
}

TEST_CASE("property: sign structure of the beta Euler product") {
  // Raising the limit across one prime multiplies the midpoint by that prime's factor.
  const auto primes = exactseq::odd_primes(200);
  std::uint32_t prev = 0;
  for (std::uint32_t p : primes) {
    if (prev != 0) {
      const mpq_class before = beta_euler_product(3, p30, p - 1).value.mid().to_rational();
      const mpq_class after = beta_euler_product(3, p30, p).value.mid().to_rational();
      CAPTURE(p);
      CHECK((exactseq::chi4(p) == 1 ? after > before : after < before));
    }
    prev = p;
  }
}
