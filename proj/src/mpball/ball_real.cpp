#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <string>

#include "idv/mpball/ball.hpp"
#include "rounding.hpp"

namespace idv {

using detail::add_abs_product;
using detail::add_to;
using detail::add_ulp_if;
using detail::check_finite;

namespace {

std::string format_mpfr(const char* fmt, int digits, mpfr_srcptr x) {
  char* buf = nullptr;
  if (mpfr_asprintf(&buf, fmt, digits, x) < 0) throw std::bad_alloc();
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

BallReal::BallReal(Precision prec) : mid_(prec.bits()), rad_(kRadiusBits), prec_(prec) {}

BallReal::BallReal(Float mid, const Float& rad, Precision prec)
    : mid_(std::move(mid)), rad_(kRadiusBits), prec_(prec) {
  if (rad.sign() < 0) throw std::invalid_argument("ball radius must be nonnegative");
  mpfr_set(rad_.get(), rad.get(), MPFR_RNDU);
  if (mid_.bits() != prec.bits()) {
    Float m(prec.bits());
    add_ulp_if(rad_, m.get(), mpfr_set(m.get(), mid_.get(), MPFR_RNDN));
    mid_ = std::move(m);
  }
  check_finite(mid_, rad_, "ball construction");
}

BallReal BallReal::from_integer(const mpz_class& value, Precision prec) {
  BallReal out(prec);
  add_ulp_if(out.rad_, out.mid_.get(), mpfr_set_z(out.mid_.get(), value.get_mpz_t(), MPFR_RNDN));
  return out;
}

BallReal BallReal::from_integer(long value, Precision prec) {
  BallReal out(prec);
  add_ulp_if(out.rad_, out.mid_.get(), mpfr_set_si(out.mid_.get(), value, MPFR_RNDN));
  return out;
}

BallReal BallReal::from_rational(const mpq_class& value, Precision prec) {
  BallReal out(prec);
  add_ulp_if(out.rad_, out.mid_.get(), mpfr_set_q(out.mid_.get(), value.get_mpq_t(), MPFR_RNDN));
  return out;
}

BallReal BallReal::from_decimal(std::string_view text, Precision prec) {
  std::string s(text);
  const auto epos = s.find_first_of("eE");
  long exponent = 0;
  if (epos != std::string::npos) {
    exponent = std::stol(s.substr(epos + 1));
    s.erase(epos);
  }
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    exponent -= static_cast<long>(s.size() - dot - 1);
    s.erase(dot, 1);
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("malformed decimal literal: " + std::string(text));
  }
  mpq_class q{mpz_class(s)};
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0) {
    q *= scale;
  } else {
    q /= scale;
  }
  if (negative) q = -q;
  return from_rational(q, prec);
}

BallReal BallReal::from_interval(const Float& lo, const Float& hi, Precision prec) {
  if (mpfr_cmp(lo.get(), hi.get()) > 0) throw std::invalid_argument("interval endpoints out of order");
  BallReal out(prec);
  // (lo + hi) / 2 may round; the radius below is measured from the rounded midpoint.
  Float sum(std::max(lo.bits(), hi.bits()) + 1);
  mpfr_add(sum.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(out.mid_.get(), sum.get(), 1, MPFR_RNDN);
  Float up(kRadiusBits), down(kRadiusBits);
  mpfr_sub(up.get(), hi.get(), out.mid_.get(), MPFR_RNDU);
  mpfr_sub(down.get(), out.mid_.get(), lo.get(), MPFR_RNDU);
  mpfr_max(out.rad_.get(), up.get(), down.get(), MPFR_RNDU);
  if (out.rad_.sign() < 0) mpfr_set_zero(out.rad_.get(), 1);
  check_finite(out.mid_, out.rad_, "interval conversion");
  return out;
}

bool BallReal::contains(const mpq_class& value) const {
  mpq_class d = mid_.to_rational() - value;
  return abs(d) <= rad_.to_rational();
}

bool BallReal::contains(const BallReal& other) const {
  mpq_class d = abs(mid_.to_rational() - other.mid_.to_rational());
  return d + other.rad_.to_rational() <= rad_.to_rational();
}

bool BallReal::contains_zero() const { return mpfr_cmpabs(mid_.get(), rad_.get()) <= 0; }

bool BallReal::is_positive() const {
  return mid_.sign() > 0 && mpfr_cmpabs(mid_.get(), rad_.get()) > 0;
}

bool BallReal::is_nonnegative() const {
  return mid_.sign() >= 0 && mpfr_cmpabs(mid_.get(), rad_.get()) >= 0;
}

bool BallReal::is_negative() const {
  return mid_.sign() < 0 && mpfr_cmpabs(mid_.get(), rad_.get()) > 0;
}

Float BallReal::lower(mpfr_prec_t bits) const {
  Float out(bits);
  mpfr_sub(out.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return out;
}

Float BallReal::upper(mpfr_prec_t bits) const {
  Float out(bits);
  mpfr_add(out.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return out;
}

Float BallReal::mag_upper() const {
  Float out = detail::abs_up(mid_.get());
  add_to(out, rad_.get());
  return out;
}

Float BallReal::mag_lower() const {
  Float out(kRadiusBits);
  if (contains_zero()) return out;
  Float m = detail::abs_down(mid_.get());
  mpfr_sub(out.get(), m.get(), rad_.get(), MPFR_RNDD);
  return out;
}

BallReal BallReal::add_error(const Float& extra) const {
  if (extra.sign() < 0) throw std::invalid_argument("error term must be nonnegative");
  BallReal out(*this);
  add_to(out.rad_, extra.get());
  return out;
}

BallReal BallReal::with_precision(Precision prec) const {
  if (prec == prec_) return *this;
  Float m(prec.bits());
  Float r(rad_);
  add_ulp_if(r, m.get(), mpfr_set(m.get(), mid_.get(), MPFR_RNDN));
  BallReal out(std::move(m), r, prec);
  return out;
}

std::string BallReal::mid_string(int significant) const {
  return format_mpfr("%.*Rg", std::max(significant, 1), mid_.get());
}

std::string BallReal::rad_string() const {
  return format_mpfr("%.*RUe", 2, rad_.get());
}

std::string BallReal::to_string(int significant) const {
  return "[" + mid_string(significant) + " +/- " + rad_string() + "]";
}

std::ostream& operator<<(std::ostream& os, const BallReal& x) {
  return os << x.to_string(static_cast<int>(x.precision().digits()));
}

BallReal BallReal::operator-() const {
  BallReal out(*this);
  mpfr_neg(out.mid_.get(), out.mid_.get(), MPFR_RNDN);
  return out;
}

BallReal& BallReal::operator+=(const BallReal& rhs) {
  const Precision prec = max(prec_, rhs.prec_);
  Float m(prec.bits());
  const int t = mpfr_add(m.get(), mid_.get(), rhs.mid_.get(), MPFR_RNDN);
  add_to(rad_, rhs.rad_.get());
  add_ulp_if(rad_, m.get(), t);
  mid_ = std::move(m);
  prec_ = prec;
  check_finite(mid_, rad_, "addition");
  return *this;
}

BallReal& BallReal::operator-=(const BallReal& rhs) {
  const Precision prec = max(prec_, rhs.prec_);
  Float m(prec.bits());
  const int t = mpfr_sub(m.get(), mid_.get(), rhs.mid_.get(), MPFR_RNDN);
  add_to(rad_, rhs.rad_.get());
  add_ulp_if(rad_, m.get(), t);
  mid_ = std::move(m);
  prec_ = prec;
  check_finite(mid_, rad_, "subtraction");
  return *this;
}

BallReal& BallReal::operator*=(const BallReal& rhs) {
  const Precision prec = max(prec_, rhs.prec_);
  Float m(prec.bits());
  const int t = mpfr_mul(m.get(), mid_.get(), rhs.mid_.get(), MPFR_RNDN);
  Float r(kRadiusBits);
  add_abs_product(r, mid_.get(), rhs.rad_.get());
  add_abs_product(r, rhs.mid_.get(), rad_.get());
  add_abs_product(r, rad_.get(), rhs.rad_.get());
  add_ulp_if(r, m.get(), t);
  mid_ = std::move(m);
  rad_ = std::move(r);
  prec_ = prec;
  check_finite(mid_, rad_, "multiplication");
  return *this;
}

BallReal& BallReal::operator/=(const BallReal& rhs) {
  if (rhs.contains_zero()) {
    throw DomainError("possible division by zero: divisor " + rhs.to_string(12));
  }
  const Precision prec = max(prec_, rhs.prec_);
  Float m(prec.bits());
  const int t = mpfr_div(m.get(), mid_.get(), rhs.mid_.get(), MPFR_RNDN);

  // |a/b - ma/mb| <= (|ma| rb + |mb| ra) / (|mb| (|mb| - rb))
  Float num(kRadiusBits);
  add_abs_product(num, mid_.get(), rhs.rad_.get());
  add_abs_product(num, rhs.mid_.get(), rad_.get());
  Float b_abs = detail::abs_down(rhs.mid_.get());
  Float b_low(kRadiusBits);
  mpfr_sub(b_low.get(), b_abs.get(), rhs.rad_.get(), MPFR_RNDD);
  Float den(kRadiusBits);
  mpfr_mul(den.get(), b_abs.get(), b_low.get(), MPFR_RNDD);
  Float r(kRadiusBits);
  if (!num.is_zero()) {
    if (den.sign() <= 0) throw DomainError("possible division by zero: divisor " + rhs.to_string(12));
    mpfr_div(r.get(), num.get(), den.get(), MPFR_RNDU);
  }
  add_ulp_if(r, m.get(), t);
  mid_ = std::move(m);
  rad_ = std::move(r);
  prec_ = prec;
  check_finite(mid_, rad_, "division");
  return *this;
}

BallReal BallReal::mul_ui(unsigned long n) const {
  BallReal out(prec_);
  add_ulp_if(out.rad_, out.mid_.get(), mpfr_mul_ui(out.mid_.get(), mid_.get(), n, MPFR_RNDN));
  Float r(kRadiusBits);
  mpfr_mul_ui(r.get(), rad_.get(), n, MPFR_RNDU);
  add_to(out.rad_, r.get());
  check_finite(out.mid_, out.rad_, "multiplication");
  return out;
}

BallReal BallReal::div_ui(unsigned long n) const {
  if (n == 0) throw DomainError("possible division by zero: divisor 0");
  BallReal out(prec_);
  add_ulp_if(out.rad_, out.mid_.get(), mpfr_div_ui(out.mid_.get(), mid_.get(), n, MPFR_RNDN));
  Float r(kRadiusBits);
  mpfr_div_ui(r.get(), rad_.get(), n, MPFR_RNDU);
  add_to(out.rad_, r.get());
  return out;
}

BallReal BallReal::mul_2exp(long e) const {
  BallReal out(*this);
  mpfr_mul_2si(out.mid_.get(), mid_.get(), e, MPFR_RNDN);
  mpfr_mul_2si(out.rad_.get(), rad_.get(), e, MPFR_RNDU);
  check_finite(out.mid_, out.rad_, "scaling");
  return out;
}

BallReal operator+(const BallReal& a, const BallReal& b) { BallReal r(a); r += b; return r; }
BallReal operator-(const BallReal& a, const BallReal& b) { BallReal r(a); r -= b; return r; }
BallReal operator*(const BallReal& a, const BallReal& b) { BallReal r(a); r *= b; return r; }
BallReal operator/(const BallReal& a, const BallReal& b) { BallReal r(a); r /= b; return r; }
BallReal operator+(const BallReal& a, long b) { return a + BallReal::from_integer(b, a.precision()); }
BallReal operator-(const BallReal& a, long b) { return a - BallReal::from_integer(b, a.precision()); }
BallReal operator*(const BallReal& a, long b) { return a * BallReal::from_integer(b, a.precision()); }
BallReal operator/(const BallReal& a, long b) { return a / BallReal::from_integer(b, a.precision()); }
BallReal operator-(long a, const BallReal& b) { return BallReal::from_integer(a, b.precision()) - b; }
BallReal operator/(long a, const BallReal& b) { return BallReal::from_integer(a, b.precision()) / b; }

bool overlaps(const BallReal& a, const BallReal& b) {
  mpq_class d = abs(a.mid().to_rational() - b.mid().to_rational());
  return d <= a.rad().to_rational() + b.rad().to_rational();
}

BallReal sqr(const BallReal& x) {
  if (mpfr_cmpabs(x.mid().get(), x.rad().get()) >= 0) return x * x;
  Float hi = x.mag_upper();
  Float hi2(kRadiusBits);
  mpfr_sqr(hi2.get(), hi.get(), MPFR_RNDU);
  return BallReal::from_interval(Float(kRadiusBits), hi2, x.precision());
}

BallReal pow(const BallReal& base, long exponent) {
  if (exponent == 0) return BallReal::from_integer(1, base.precision());
  if (exponent < 0) {
    if (exponent == std::numeric_limits<long>::min()) throw OverflowError("exponent out of range");
    return 1L / pow(base, -exponent);
  }
  BallReal result = BallReal::from_integer(1, base.precision());
  BallReal square = base;
  bool first = true;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (true) {
    if (e & 1UL) {
      result = first ? square : result * square;
      first = false;
    }
    e >>= 1;
    if (e == 0) break;
    square = sqr(square);
  }
  return result;
}

BallReal abs(const BallReal& x) {
  if (x.is_nonnegative()) return x;
  if (mpfr_sgn(x.mid().get()) <= 0 && mpfr_cmpabs(x.mid().get(), x.rad().get()) >= 0) return -x;
  return BallReal::from_interval(Float(kRadiusBits), x.mag_upper(), x.precision());
}

}  // namespace idv
