#ifndef IDV_PRECISION_HPP
#define IDV_PRECISION_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include <mpfr.h>

namespace idv {

/// Working precision expressed in decimal digits.  Internally every value is
/// carried with 10 + digits/10 guard digits on top of the request.
class Precision {
 public:
  static constexpr long kMinDigits = 8;

  explicit Precision(long digits) : digits_(digits) {
    if (digits < kMinDigits) {
      throw std::invalid_argument("precision must be at least " + std::to_string(kMinDigits) +
                                  " digits, got " + std::to_string(digits));
    }
  }

  long digits() const noexcept { return digits_; }

  mpfr_prec_t bits() const noexcept {
    const double guarded = static_cast<double>(digits_ + 10 + digits_ / 10);
    return static_cast<mpfr_prec_t>(std::ceil(guarded * 3.321928094887362));
  }

  friend bool operator==(Precision a, Precision b) noexcept { return a.digits_ == b.digits_; }
  friend auto operator<=>(Precision a, Precision b) noexcept { return a.digits_ <=> b.digits_; }

 private:
  long digits_;
};

inline Precision max(Precision a, Precision b) noexcept { return a.digits() >= b.digits() ? a : b; }

}  // namespace idv

#endif  // IDV_PRECISION_HPP
