#include <string>

#include "idv/mpball/ball.hpp"
#include "rounding.hpp"

namespace idv {

std::string BallComplex::to_string(int significant) const {
  return re_.to_string(significant) + " + " + im_.to_string(significant) + "i";
}

BallComplex operator+(const BallComplex& a, const BallComplex& b) {
  return BallComplex(a.re() + b.re(), a.im() + b.im());
}

BallComplex operator-(const BallComplex& a, const BallComplex& b) {
  return BallComplex(a.re() - b.re(), a.im() - b.im());
}

BallComplex operator*(const BallComplex& a, const BallComplex& b) {
  return BallComplex(a.re() * b.re() - a.im() * b.im(), a.re() * b.im() + a.im() * b.re());
}

BallComplex operator*(const BallComplex& a, const BallReal& b) {
  return BallComplex(a.re() * b, a.im() * b);
}

BallComplex operator/(const BallComplex& a, const BallReal& b) {
  return BallComplex(a.re() / b, a.im() / b);
}

BallComplex operator/(const BallComplex& a, const BallComplex& b) {
  const BallReal n = norm(b);
  if (!n.is_positive()) throw DomainError("possible division by zero: divisor " + b.to_string(12));
  return (a * b.conj()) / n;
}

BallComplex operator+(const BallComplex& a, long b) { return BallComplex(a.re() + b, a.im()); }

bool overlaps(const BallComplex& a, const BallComplex& b) {
  return overlaps(a.re(), b.re()) && overlaps(a.im(), b.im());
}

BallComplex pow(const BallComplex& base, long exponent) {
  if (exponent < 0) return BallComplex(BallReal::from_integer(1, base.precision())) / pow(base, -exponent);
  BallComplex result(BallReal::from_integer(1, base.precision()));
  BallComplex square = base;
  for (unsigned long e = static_cast<unsigned long>(exponent); e > 0; e >>= 1) {
    if (e & 1UL) result = result * square;
    if (e > 1) square = square * square;
  }
  return result;
}

BallReal norm(const BallComplex& z) { return sqr(z.re()) + sqr(z.im()); }

BallComplex exp(const BallComplex& z) {
  const BallReal scale = exp(z.re());
  if (z.im().is_exact() && z.im().mid().is_zero()) return BallComplex(scale, BallReal(z.precision()));
  return BallComplex(scale * cos(z.im()), scale * sin(z.im()));
}

BallComplex log(const BallComplex& z) {
  const BallReal n = norm(z);
  if (!n.is_positive()) throw DomainError("log: argument " + z.to_string(12) + " may contain zero");
  return BallComplex(log(n).mul_2exp(-1), atan2(z.im(), z.re()));
}

BallComplex sin(const BallComplex& z) {
  // sin(x + iy) = sin x cosh y + i cos x sinh y
  return BallComplex(sin(z.re()) * cosh(z.im()), cos(z.re()) * sinh(z.im()));
}

BallComplex root_of_unity(long num, long den, Precision prec) {
  if (den <= 0) throw std::invalid_argument("root_of_unity: denominator must be positive");
  // Reduce num/den modulo 2 and return exact values on the axes.
  const long period = 2 * den;
  long r = num % period;
  if (r < 0) r += period;
  const auto exact = [prec](long re, long im) {
    return BallComplex(BallReal::from_integer(re, prec), BallReal::from_integer(im, prec));
  };
  if (r == 0) return exact(1, 0);
  if (2 * r == period) return exact(-1, 0);
  if (4 * r == period) return exact(0, 1);
  if (4 * r == 3 * period) return exact(0, -1);
  const BallReal angle = const_pi(prec) * BallReal::from_integer(r, prec) / BallReal::from_integer(den, prec);
  return BallComplex(cos(angle), sin(angle));
}

}  // namespace idv
