#include "idv/dsl/ast.hpp"

namespace idv::dsl {

bool operator==(const Domain& a, const Domain& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case DomainKind::infinite_integers: return a.lo == b.lo;
    case DomainKind::finite_range: return a.lo == b.lo && a.hi == b.hi;
    case DomainKind::odd_primes: return true;
  }
  return false;
}

namespace {

ExprPtr make(ExprKind kind, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->pos = pos;
  return e;
}

}  // namespace

ExprPtr make_int(const mpz_class& v, SourcePos pos) {
  auto e = std::const_pointer_cast<Expr>(make(ExprKind::int_lit, pos));
  e->value = v;
  return e;
}

ExprPtr make_rat(const mpq_class& v, SourcePos pos) {
  auto e = std::const_pointer_cast<Expr>(make(ExprKind::rat_lit, pos));
  e->value = v;
  e->value.canonicalize();
  return e;
}

ExprPtr make_pi(SourcePos pos) { return make(ExprKind::pi, pos); }

ExprPtr make_var(std::string name, SourcePos pos) {
  auto e = std::const_pointer_cast<Expr>(make(ExprKind::var, pos));
  e->name = std::move(name);
  return e;
}

ExprPtr make_unary(ExprKind kind, ExprPtr arg, SourcePos pos) {
  auto e = std::const_pointer_cast<Expr>(make(kind, pos));
  e->children.push_back(std::move(arg));
  return e;
}

ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  auto e = std::const_pointer_cast<Expr>(make(kind, pos));
  e->children.push_back(std::move(lhs));
  e->children.push_back(std::move(rhs));
  return e;
}

ExprPtr make_bigop(ExprKind kind, std::string index, Domain domain, ExprPtr body, SourcePos pos) {
  auto e = std::const_pointer_cast<Expr>(make(kind, pos));
  e->name = std::move(index);
  e->domain = domain;
  e->children.push_back(std::move(body));
  return e;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case ExprKind::int_lit:
    case ExprKind::rat_lit:
      if (a.value != b.value) return false;
      break;
    case ExprKind::var:
      if (a.name != b.name) return false;
      break;
    case ExprKind::big_sum:
    case ExprKind::big_prod:
      if (a.name != b.name || !(a.domain == b.domain)) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

bool mentions(const Expr& e, const std::string& name) {
  if (e.kind == ExprKind::var) return e.name == name;
  if ((e.kind == ExprKind::big_sum || e.kind == ExprKind::big_prod) && e.name == name) return false;
  for (const auto& c : e.children) {
    if (mentions(*c, name)) return true;
  }
  return false;
}

bool equal(const Identity& a, const Identity& b) {
  if (a.id != b.id || !equal(*a.lhs, *b.lhs) || !equal(*a.rhs, *b.rhs)) return false;
  if (a.param.has_value() != b.param.has_value()) return false;
  if (a.param && (a.param->name != b.param->name || a.param->lo != b.param->lo || a.param->hi != b.param->hi)) {
    return false;
  }
  return a.expect.confirmed == b.expect.confirmed && a.expect.min_digits == b.expect.min_digits;
}

bool equal(const Corpus& a, const Corpus& b) {
  if (a.identities.size() != b.identities.size()) return false;
  for (std::size_t i = 0; i < a.identities.size(); ++i) {
    if (!equal(a.identities[i], b.identities[i])) return false;
  }
  return true;
}

}  // namespace idv::dsl
