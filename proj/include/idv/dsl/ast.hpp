#ifndef IDV_DSL_AST_HPP
#define IDV_DSL_AST_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace idv::dsl {

struct SourcePos {
  int line = 0;
  int column = 0;
};

enum class DomainKind { infinite_integers, finite_range, odd_primes };

struct Domain {
  DomainKind kind = DomainKind::infinite_integers;
  long lo = 1;  // start for both integer kinds
  long hi = 0;  // finite_range only

  static Domain infinite(long start) { return {DomainKind::infinite_integers, start, 0}; }
  static Domain range(long lo, long hi) { return {DomainKind::finite_range, lo, hi}; }
  static Domain primes() { return {DomainKind::odd_primes, 3, 0}; }
  bool is_infinite() const { return kind != DomainKind::finite_range; }
};

bool operator==(const Domain& a, const Domain& b);

enum class ExprKind {
  int_lit,
  rat_lit,
  pi,
  var,
  neg,
  add,
  sub,
  mul,
  div,
  pow,
  factorial,
  abs,
  sqrt,
  cosh,
  euler_num,
  bernoulli_hist,
  chi4,
  big_sum,
  big_prod,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node.  `value` holds IntLit/RatLit payloads, `name`
/// the variable or bound index, `children` the operands (one body for bigops).
struct Expr {
  ExprKind kind;
  SourcePos pos;
  mpq_class value;
  std::string name;
  Domain domain;
  std::vector<ExprPtr> children;

  const Expr& child(std::size_t i = 0) const { return *children.at(i); }
};

ExprPtr make_int(const mpz_class& v, SourcePos pos = {});
ExprPtr make_rat(const mpq_class& v, SourcePos pos = {});
ExprPtr make_pi(SourcePos pos = {});
ExprPtr make_var(std::string name, SourcePos pos = {});
ExprPtr make_unary(ExprKind kind, ExprPtr arg, SourcePos pos = {});
ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
ExprPtr make_bigop(ExprKind kind, std::string index, Domain domain, ExprPtr body, SourcePos pos = {});

/// Structural equality; source positions are ignored.
bool equal(const Expr& a, const Expr& b);

/// True when `name` occurs free in `e`.
bool mentions(const Expr& e, const std::string& name);

struct Param {
  std::string name;
  long lo = 0;
  long hi = 0;
};

struct Expectation {
  bool confirmed = true;
  int min_digits = 8;
};

inline constexpr int kDefaultMinDigits = 8;

struct Identity {
  std::string id;
  ExprPtr lhs;
  ExprPtr rhs;
  std::optional<Param> param;
  Expectation expect;
  SourcePos pos;
};

struct Corpus {
  std::vector<Identity> identities;
};

bool equal(const Identity& a, const Identity& b);
bool equal(const Corpus& a, const Corpus& b);

/// Integer values bound to names while evaluating.
using Bindings = std::map<std::string, mpz_class>;

}  // namespace idv::dsl

#endif  // IDV_DSL_AST_HPP
