// Canonical printing with the fewest parentheses that reparse to the same tree.

#include <string>

#include "idv/dsl.hpp"

namespace idv::dsl {

namespace {

// Grammar levels: additive < mult < unary < postfix < atom.
enum Level { additive = 1, multiplicative = 2, unary = 3, postfix = 4, atom = 5 };

Level level_of(const Expr& e) {
  switch (e.kind) {
    case ExprKind::add:
    case ExprKind::sub:
      return additive;
    case ExprKind::mul:
    case ExprKind::div:
      return multiplicative;
    case ExprKind::neg:
      return unary;
    case ExprKind::pow:
    case ExprKind::factorial:
      return postfix;
    case ExprKind::int_lit:
      return e.value < 0 ? unary : atom;
    default:
      return atom;
  }
}

void emit(const Expr& e, std::string& out);

void emit_at(const Expr& e, Level needed, std::string& out) {
  if (level_of(e) >= needed) {
    emit(e, out);
  } else {
    out += '(';
    emit(e, out);
    out += ')';
  }
}

// The operand of '^' (base) or '!' continues a postfix chain, which only an
// atom or a factorial can start without parentheses: `a^b!` parses as a^(b!).
void emit_chain_operand(const Expr& e, std::string& out) {
  if (level_of(e) == atom || e.kind == ExprKind::factorial) {
    emit(e, out);
  } else {
    out += '(';
    emit(e, out);
    out += ')';
  }
}

const char* function_name(ExprKind k) {
  switch (k) {
    case ExprKind::abs: return "abs";
    case ExprKind::sqrt: return "sqrt";
    case ExprKind::cosh: return "cosh";
    case ExprKind::euler_num: return "euler";
    case ExprKind::bernoulli_hist: return "bernoulli_hist";
    case ExprKind::chi4: return "chi4";
    default: return "";
  }
}

std::string domain_text(const Domain& d) {
  switch (d.kind) {
    case DomainKind::infinite_integers: return std::to_string(d.lo) + "..inf";
    case DomainKind::finite_range: return std::to_string(d.lo) + ".." + std::to_string(d.hi);
    case DomainKind::odd_primes: return "odd_primes";
  }
  return "";
}

void emit(const Expr& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::int_lit:
      out += e.value.get_num().get_str();
      return;
    case ExprKind::rat_lit:
      // Never produced by the parser; prints as a quotient.
      out += '(' + e.value.get_num().get_str() + '/' + e.value.get_den().get_str() + ')';
      return;
    case ExprKind::pi:
      out += "pi";
      return;
    case ExprKind::var:
      out += e.name;
      return;
    case ExprKind::neg:
      out += '-';
      emit_at(e.child(), postfix, out);
      return;
    case ExprKind::add:
    case ExprKind::sub:
      emit_at(e.child(0), additive, out);
      out += e.kind == ExprKind::add ? " + " : " - ";
      emit_at(e.child(1), multiplicative, out);
      return;
    case ExprKind::mul:
    case ExprKind::div:
      emit_at(e.child(0), multiplicative, out);
      out += e.kind == ExprKind::mul ? "*" : "/";
      emit_at(e.child(1), unary, out);
      return;
    case ExprKind::pow:
      emit_chain_operand(e.child(0), out);
      out += '^';
      emit_at(e.child(1), unary, out);
      return;
    case ExprKind::factorial:
      emit_chain_operand(e.child(), out);
      out += '!';
      return;
    case ExprKind::big_sum:
    case ExprKind::big_prod:
      out += e.kind == ExprKind::big_sum ? "sum(" : "prod(";
      out += e.name + ", " + domain_text(e.domain) + ", ";
      emit(e.child(), out);
      out += ')';
      return;
    default:
      out += function_name(e.kind);
      out += '(';
      emit(e.child(), out);
      out += ')';
      return;
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  emit(e, out);
  return out;
}

std::string print(const Corpus& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.identities.size(); ++i) {
    const Identity& ident = corpus.identities[i];
    if (i > 0) out += '\n';
    out += "identity " + quote(ident.id) + " {\n";
    out += "  lhs = " + print(*ident.lhs) + ";\n";
    out += "  rhs = " + print(*ident.rhs) + ";\n";
    if (ident.param) {
      out += "  param " + ident.param->name + " in " + std::to_string(ident.param->lo) + ".." +
             std::to_string(ident.param->hi) + ";\n";
    }
    if (ident.expect.confirmed) {
      out += "  expect = true >= " + std::to_string(ident.expect.min_digits) + " digits;\n";
    } else {
      out += "  expect = false;\n";
    }
    out += "}\n";
  }
  return out;
}

}  // namespace idv::dsl
