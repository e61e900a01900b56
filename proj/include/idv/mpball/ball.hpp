#ifndef IDV_MPBALL_BALL_HPP
#define IDV_MPBALL_BALL_HPP

#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "idv/errors.hpp"
#include "idv/mpball/float.hpp"
#include "idv/precision.hpp"

namespace idv {

/// Precision in bits of every radius.  Radii are only ever rounded upward.
inline constexpr mpfr_prec_t kRadiusBits = 64;

/// A real number enclosure: the set [mid - rad, mid + rad].
///
/// Every operation returns a ball containing all exact results for inputs
/// drawn from the operand balls.  The midpoint is rounded to nearest at the
/// working precision and the rounding error is folded into the radius.
class BallReal {
 public:
  /// Exact zero.
  explicit BallReal(Precision prec = Precision{30});
  /// Takes ownership of a midpoint; `rad` is rounded up into radius precision.
  BallReal(Float mid, const Float& rad, Precision prec);

  static BallReal from_integer(const mpz_class& value, Precision prec);
  static BallReal from_integer(long value, Precision prec);
  static BallReal from_rational(const mpq_class& value, Precision prec);
  /// Parses a decimal literal such as "1.0308121" or "-2.5e-3" exactly.
  static BallReal from_decimal(std::string_view text, Precision prec);
  /// Smallest ball (at this precision) containing the interval [lo, hi].
  static BallReal from_interval(const Float& lo, const Float& hi, Precision prec);

  const Float& mid() const noexcept { return mid_; }
  const Float& rad() const noexcept { return rad_; }
  Precision precision() const noexcept { return prec_; }

  bool is_exact() const noexcept { return rad_.is_zero(); }
  bool contains(const mpq_class& value) const;
  bool contains(const BallReal& other) const;
  bool contains_zero() const;
  /// Every point of the ball is > 0 (resp. >= 0, < 0).
  bool is_positive() const;
  bool is_nonnegative() const;
  bool is_negative() const;

  /// Lower and upper endpoints, rounded outward, at `bits` precision.
  Float lower(mpfr_prec_t bits) const;
  Float upper(mpfr_prec_t bits) const;
  /// Upper bound on |x| over the ball.
  Float mag_upper() const;
  /// Lower bound on |x| over the ball (zero when the ball contains zero).
  Float mag_lower() const;

  /// Returns a copy whose radius is enlarged by `extra` (must be >= 0).
  BallReal add_error(const Float& extra) const;
  /// Returns a copy re-rounded to another precision.
  BallReal with_precision(Precision prec) const;

  /// Midpoint with `significant` digits, e.g. "1.1107207345".
  std::string mid_string(int significant) const;
  /// Radius with three significant digits, rounded up, e.g. "3.47e-9".
  std::string rad_string() const;
  /// "[mid +/- rad]".
  std::string to_string(int significant) const;

  BallReal operator-() const;
  BallReal& operator+=(const BallReal& rhs);
  BallReal& operator-=(const BallReal& rhs);
  BallReal& operator*=(const BallReal& rhs);
  BallReal& operator/=(const BallReal& rhs);

  BallReal mul_ui(unsigned long n) const;
  BallReal div_ui(unsigned long n) const;
  /// Multiplication by 2^e is exact.
  BallReal mul_2exp(long e) const;

 private:
  Float mid_;
  Float rad_;
  Precision prec_;
};

BallReal operator+(const BallReal& a, const BallReal& b);
BallReal operator-(const BallReal& a, const BallReal& b);
BallReal operator*(const BallReal& a, const BallReal& b);
BallReal operator/(const BallReal& a, const BallReal& b);
BallReal operator+(const BallReal& a, long b);
BallReal operator-(const BallReal& a, long b);
BallReal operator*(const BallReal& a, long b);
BallReal operator/(const BallReal& a, long b);
BallReal operator-(long a, const BallReal& b);
BallReal operator/(long a, const BallReal& b);

std::ostream& operator<<(std::ostream& os, const BallReal& x);

/// True when the two balls share at least one point.
bool overlaps(const BallReal& a, const BallReal& b);

BallReal pow(const BallReal& base, long exponent);
BallReal sqr(const BallReal& x);
BallReal abs(const BallReal& x);
BallReal sqrt(const BallReal& x);
BallReal exp(const BallReal& x);
BallReal expm1(const BallReal& x);
BallReal log(const BallReal& x);
BallReal cosh(const BallReal& x);
BallReal sinh(const BallReal& x);
BallReal sin(const BallReal& x);
BallReal cos(const BallReal& x);
/// Argument of the point (x, y), requiring the ball not to meet the branch
/// cut along the negative real axis.
BallReal atan2(const BallReal& y, const BallReal& x);

/// Enclosure of pi with radius at most 10^-digits.
BallReal const_pi(Precision prec);

/// Complex ball, a rectangle re x im.
class BallComplex {
 public:
  explicit BallComplex(Precision prec = Precision{30}) : re_(prec), im_(prec) {}
  explicit BallComplex(BallReal re) : re_(std::move(re)), im_(re_.precision()) {}
  BallComplex(BallReal re, BallReal im) : re_(std::move(re)), im_(std::move(im)) {}

  const BallReal& re() const noexcept { return re_; }
  const BallReal& im() const noexcept { return im_; }
  Precision precision() const noexcept { return max(re_.precision(), im_.precision()); }

  bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
  BallComplex conj() const { return BallComplex(re_, -im_); }
  std::string to_string(int significant) const;

  BallComplex operator-() const { return BallComplex(-re_, -im_); }

 private:
  BallReal re_;
  BallReal im_;
};

BallComplex operator+(const BallComplex& a, const BallComplex& b);
BallComplex operator-(const BallComplex& a, const BallComplex& b);
BallComplex operator*(const BallComplex& a, const BallComplex& b);
BallComplex operator/(const BallComplex& a, const BallComplex& b);
BallComplex operator*(const BallComplex& a, const BallReal& b);
BallComplex operator/(const BallComplex& a, const BallReal& b);
BallComplex operator+(const BallComplex& a, long b);

bool overlaps(const BallComplex& a, const BallComplex& b);

BallComplex pow(const BallComplex& base, long exponent);
/// |z|^2 as a real ball.
BallReal norm(const BallComplex& z);
BallComplex exp(const BallComplex& z);
/// Principal logarithm; the ball must not meet the non-positive real axis.
BallComplex log(const BallComplex& z);
BallComplex sin(const BallComplex& z);
/// exp(i*pi*num/den), a point on the unit circle.
BallComplex root_of_unity(long num, long den, Precision prec);

/// Gamma function.  Throws DomainError("Gamma pole ...") when the ball meets
/// a non-positive integer.
BallReal gamma(const BallReal& x);
BallComplex gamma(const BallComplex& z);

}  // namespace idv

#endif  // IDV_MPBALL_BALL_HPP
