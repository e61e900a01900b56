#ifndef IDV_ERRORS_HPP
#define IDV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace idv {

/// Raised when an argument lies outside the domain of a function, including
/// balls that straddle a singularity (division by a ball containing zero,
/// logarithm of a ball reaching zero, Gamma near a pole).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a result leaves the exponent range of the floating format.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace idv

#endif  // IDV_ERRORS_HPP
