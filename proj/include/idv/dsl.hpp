#ifndef IDV_DSL_HPP
#define IDV_DSL_HPP

// Text format for identity corpora (.idn): parsing, validation, canonical
// printing and exact evaluation of rational-valued subexpressions.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idv/dsl/ast.hpp"

namespace idv::dsl {

/// Lexical, syntax or validation error with a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, std::string token, const std::string& message);

  SourcePos pos() const noexcept { return pos_; }
  const std::string& token() const noexcept { return token_; }

 private:
  SourcePos pos_;
  std::string token_;
};

Corpus parse(std::string_view text);

/// A bare expression; every free variable must be one of `params`.  Integer
/// positions are checked over `ranges`, or 0..3 for a parameter without one.
ExprPtr parse_expression(std::string_view text, const std::vector<std::string>& params = {},
                         const std::vector<Param>& ranges = {});

/// Checks scoping, integer-typed arguments, chi4 placement and unique ids.
/// `parse` already calls this.
void validate(const Corpus& corpus);
void validate_expression(const Expr& e, const std::vector<std::string>& params,
                         const std::vector<Param>& ranges = {});

std::string print(const Corpus& corpus);
std::string print(const Expr& e);

/// The shipped identity corpus.
const std::string& builtin_corpus_text();
Corpus builtin_corpus();

/// Raised by exact evaluation on division by zero, factorial of a negative
/// number, non-integer exponents and similar.
class EvalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact value of a rational-valued expression; nullopt when the value
/// involves pi, sqrt, cosh or a bigop over an infinite domain.
std::optional<mpq_class> exact_value(const Expr& e, const Bindings& env);

}  // namespace idv::dsl

#endif  // IDV_DSL_HPP
