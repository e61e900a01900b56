#ifndef IDV_SRC_ANALYTIC_ACCUMULATE_HPP
#define IDV_SRC_ANALYTIC_ACCUMULATE_HPP

// Long sums and products run outside the ball layer with an a-priori error
// budget instead of per-operation bookkeeping.  Products use MPFR with
// round-to-nearest, so each call perturbs its result by a relative error of
// at most u = 2^-p.

#include <cmath>
#include <cstdint>
#include <vector>

#include <gmp.h>

#include <mpfr.h>

#include "idv/mpball/ball.hpp"

namespace idv::analytic::detail {

/// Exact fixed-point sum of terms 1 / n^s with F fractional limbs.
///
/// Each term is 2^(64F) floor-divided by n^s in single-limb chunks.  With
/// q_1 = floor(2^(64F) / d_1) and q_i = floor(q_{i-1} / d_i), every step
/// divides the earlier error by d_i >= 2 and adds less than one unit, so the
/// computed term undershoots by less than 2 units of 2^-(64F).
class FixedSum {
 public:
  explicit FixedSum(Precision prec)
      : prec_(prec),
        frac_limbs_(static_cast<std::size_t>(prec.bits()) / 64 + 2),
        one_(frac_limbs_ + 1, 0),
        term_(frac_limbs_ + 1, 0),
        pos_(frac_limbs_ + 2, 0),
        neg_(frac_limbs_ + 2, 0) {
    one_.back() = 1;
  }

  void add_inverse_power(unsigned long n, int s) { accumulate(pos_, n, s); }
  void sub_inverse_power(unsigned long n, int s) { accumulate(neg_, n, s); }

  std::uint64_t count() const noexcept { return count_; }

  BallReal result() const {
    mpz_class total = to_mpz(pos_) - to_mpz(neg_);
    const long shift = -64 * static_cast<long>(frac_limbs_);
    const BallReal value = BallReal::from_integer(total, prec_).mul_2exp(shift);
    Float err(kRadiusBits);
    mpfr_set_ui_2exp(err.get(), 2 * count_, shift, MPFR_RNDU);
    return value.add_error(err);
  }

 private:
  void accumulate(std::vector<mp_limb_t>& sum, unsigned long n, int s) {
    const mp_size_t size = static_cast<mp_size_t>(term_.size());
    const mp_limb_t* src = one_.data();
    int left = s;
    while (left > 0) {
      unsigned __int128 d = n;
      --left;
      while (left > 0 && d * n <= ~std::uint64_t{0}) {
        d *= n;
        --left;
      }
      mpn_divrem_1(term_.data(), 0, src, size, static_cast<mp_limb_t>(d));
      src = term_.data();
    }
    const mp_limb_t carry = mpn_add(sum.data(), sum.data(), static_cast<mp_size_t>(sum.size()), term_.data(), size);
    if (carry != 0) throw OverflowError("fixed-point series sum overflowed");
    ++count_;
  }

  static mpz_class to_mpz(const std::vector<mp_limb_t>& limbs) {
    mpz_class out;
    mpz_import(out.get_mpz_t(), limbs.size(), -1, sizeof(mp_limb_t), 0, 0, limbs.data());
    return out;
  }

  Precision prec_;
  std::size_t frac_limbs_;
  std::vector<mp_limb_t> one_;
  std::vector<mp_limb_t> term_;
  std::vector<mp_limb_t> pos_;
  std::vector<mp_limb_t> neg_;
  std::uint64_t count_ = 0;
};

/// Running product; every factor contributes a fixed number of relative
/// roundings.  With m roundings in total, |P~/P - 1| <= eta = exp(m u) - 1,
/// hence |P~ - P| <= |P~| eta / (1 - eta).
class ProductAccumulator {
 public:
  explicit ProductAccumulator(Precision prec) : prec_(prec), product_(prec.bits(), 1) {}

  mpfr_ptr value() noexcept { return product_.get(); }
  void count_roundings(std::uint64_t n) noexcept { roundings_ += n; }
  std::uint64_t roundings() const noexcept { return roundings_; }

  BallReal result() const {
    Float eta(kRadiusBits);
    mpfr_set_ui(eta.get(), roundings_, MPFR_RNDU);
    mpfr_mul_2si(eta.get(), eta.get(), -static_cast<long>(prec_.bits()), MPFR_RNDU);
    mpfr_expm1(eta.get(), eta.get(), MPFR_RNDU);
    Float denom(kRadiusBits);
    mpfr_ui_sub(denom.get(), 1, eta.get(), MPFR_RNDD);
    Float err(kRadiusBits);
    mpfr_abs(err.get(), product_.get(), MPFR_RNDU);
    mpfr_mul(err.get(), err.get(), eta.get(), MPFR_RNDU);
    mpfr_div(err.get(), err.get(), denom.get(), MPFR_RNDU);
    return BallReal(product_, err, prec_);
  }

 private:
  Precision prec_;
  Float product_;
  std::uint64_t roundings_ = 0;
};

/// The evaluators aim for a tail below 10^-(digits + 2); this is that exponent.
inline double target_exponent(Precision prec) { return static_cast<double>(prec.digits() + 2); }

/// ceil(10^x), saturating far beyond any usable term count.
inline std::uint64_t count_from_log10(double x) {
  if (x > 18.0) return std::uint64_t{1} << 62;
  if (x < 0.0) return 1;
  return static_cast<std::uint64_t>(std::ceil(std::pow(10.0, x)));
}

/// True when the upper end of `tail` exceeds 10^-(digits + 2).
inline bool exceeds_target(const BallReal& tail, Precision prec) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(prec.digits() + 2));
  const mpq_class target(mpz_class(1), scale);
  return tail.upper(kRadiusBits).to_rational() > target;
}

/// Euler-Maclaurin estimate of sum_{n >= 0} (a + n)^-s for a > 0, s >= 2,
/// with `order` Bernoulli terms:
///   a^{1-s} / (s-1) + a^-s / 2 + sum_{k=1}^{order} B_{2k} / (2k)! (s)_{2k-1} a^{-s-2k+1}
/// and |remainder| <= 4 (s)_{2K-1} / (2 pi)^{2K} a^{-s-2K+1}.
struct EulerMaclaurinTail {
  BallReal estimate;
  BallReal remainder;
};

EulerMaclaurinTail euler_maclaurin_tail(const BallReal& a, int s, int order, Precision prec);

}  // namespace idv::analytic::detail

#endif  // IDV_SRC_ANALYTIC_ACCUMULATE_HPP
