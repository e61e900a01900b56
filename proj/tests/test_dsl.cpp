#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "idv/dsl.hpp"

using namespace idv::dsl;

namespace {

const Identity& find(const Corpus& c, const std::string& id) {
  for (const Identity& i : c.identities) {
    if (i.id == id) return i;
  }
  throw std::out_of_range(id);
}

SourcePos error_pos(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.pos();
  }
  FAIL("no parse error for: " << text);
  return {};
}

std::string error_text(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

std::string wrap(const std::string& lhs, const std::string& extra = "") {
  return "identity \"x\" {\n  lhs = " + lhs + ";\n  rhs = 1;\n" + extra + "  expect = true;\n}\n";
}

// Random well-formed corpora.  Integer positions (factorial and sequence
// arguments, exponents) get nonnegative sums of literals and variables whose
// values are nonnegative, so every generated corpus validates.
class CorpusGen {
 public:
  explicit CorpusGen(std::uint64_t seed) : rng_(seed) {}

  Corpus corpus() {
    Corpus c;
    const int count = pick(0, 4);
    for (int i = 0; i < count; ++i) c.identities.push_back(identity(i));
    return c;
  }

 private:
  struct Scope {
    std::string name;
    bool prime;
  };

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return pick(0, 1) == 1; }
  const std::string& random_scope() {
    return scopes_[static_cast<std::size_t>(pick(0, static_cast<int>(scopes_.size()) - 1))].name;
  }

  Identity identity(int i) {
    Identity id;
    id.id = "id" + std::to_string(i) + (coin() ? "_\\\"q\"" : "");
    scopes_.clear();
    if (coin()) {
      const int lo = pick(0, 4);
      id.param = Param{"n", lo, lo + pick(0, 3)};
      scopes_.push_back({"n", false});
    }
    id.lhs = expr(3);
    id.rhs = expr(3);
    id.expect.confirmed = coin();
    id.expect.min_digits = id.expect.confirmed ? pick(1, 40) : kDefaultMinDigits;
    return id;
  }

  ExprPtr leaf() {
    switch (pick(0, 3)) {
      case 0: return make_pi();
      case 1:
        if (!scopes_.empty()) return make_var(random_scope());
        [[fallthrough]];
      default: return make_int(pick(0, 20));
    }
  }

  ExprPtr integer(int depth) {
    if (depth <= 0 || pick(0, 2) == 0) {
      if (!scopes_.empty() && coin()) return make_var(random_scope());
      return make_int(pick(0, 6));
    }
    return make_binary(coin() ? ExprKind::add : ExprKind::mul, integer(depth - 1), integer(depth - 1));
  }

  ExprPtr expr(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(0, 13)) {
      case 0: return leaf();
      case 1: return make_unary(ExprKind::neg, expr(depth - 1));
      case 2: return make_binary(ExprKind::add, expr(depth - 1), expr(depth - 1));
      case 3: return make_binary(ExprKind::sub, expr(depth - 1), expr(depth - 1));
      case 4: return make_binary(ExprKind::mul, expr(depth - 1), expr(depth - 1));
      case 5: return make_binary(ExprKind::div, expr(depth - 1), expr(depth - 1));
      case 6: {
        ExprPtr ex = integer(1);
        if (coin()) ex = make_unary(ExprKind::neg, ex);
        return make_binary(ExprKind::pow, expr(depth - 1), ex);
      }
      case 7: return make_unary(ExprKind::factorial, integer(1));
      case 8: return make_unary(ExprKind::euler_num, integer(1));
      case 9: return make_unary(ExprKind::bernoulli_hist, make_binary(ExprKind::add, integer(1), make_int(1)));
      case 10: return make_unary(coin() ? ExprKind::sqrt : ExprKind::cosh, expr(depth - 1));
      case 11: return make_unary(ExprKind::abs, expr(depth - 1));
      default: {
        const std::string name = "k" + std::to_string(scopes_.size());
        Domain d;
        bool prime = false;
        switch (pick(0, 2)) {
          case 0: {
            const long lo = pick(0, 3);
            d = Domain::range(lo, lo + pick(0, 4));
            break;
          }
          case 1: d = Domain::infinite(pick(0, 2)); break;
          default: d = Domain::primes(); prime = true;
        }
        scopes_.push_back({name, prime});
        ExprPtr body = expr(depth - 1);
        if (prime && coin()) body = make_binary(ExprKind::mul, body, make_unary(ExprKind::chi4, make_var(name)));
        scopes_.pop_back();
        return make_bigop(coin() ? ExprKind::big_sum : ExprKind::big_prod, name, d, body);
      }
    }
  }

  std::mt19937_64 rng_;
  std::vector<Scope> scopes_;
};

}  // namespace

TEST_CASE("parse a single identity") {
  const Corpus c = parse(
      "identity \"eq10\" { lhs = prod(k, 1..inf, 1 - (-1)^k / (2*k+1)); rhs = pi * sqrt(2) / 4; "
      "expect = true >= 8 digits; }");
  REQUIRE(c.identities.size() == 1);
  const Identity& id = c.identities[0];
  CHECK(id.id == "eq10");
  CHECK(id.lhs->kind == ExprKind::big_prod);
  CHECK(id.lhs->domain == Domain::infinite(1));
  CHECK(id.expect.confirmed);
  CHECK(id.expect.min_digits == 8);
  CHECK_FALSE(id.param);
}

TEST_CASE("unbound variable points at the variable") {
  const SourcePos pos = error_pos("identity \"x\" {\n  lhs = 1 + k;\n  rhs = 1;\n  expect = true;\n}\n");
  CHECK(pos.line == 2);
  CHECK(pos.column == 13);
  CHECK(error_text("identity \"x\" { lhs = k; rhs = 1; expect = true; }") ==
        "1:22: unbound variable 'k' (at 'k')");
}

TEST_CASE("odd prime products and chi4") {
  const ExprPtr e = parse_expression("prod(p, odd_primes, p^3 / (p^3 - chi4(p)))");
  CHECK(e->kind == ExprKind::big_prod);
  CHECK(e->domain == Domain::primes());
  CHECK_THROWS_AS(parse_expression("prod(p, 1..inf, 1 - chi4(p)/p^2)"), ParseError);
  CHECK_THROWS_AS(parse_expression("chi4(3)"), ParseError);
}

TEST_CASE("printing") {
  CHECK(print(Corpus{}).empty());
  const ExprPtr e = parse_expression("1 - (-1)^k / (2*k+1)^3", {"k"});
  CHECK(print(*e) == "1 - (-1)^k/(2*k + 1)^3");
  CHECK(equal(*parse_expression(print(*e), {"k"}), *e));
  for (const char* text : {"-2^2", "(-2)^2", "2^-3", "2^3^2", "(2^3)^2", "(n!)!", "n!^2", "(-n)^2", "-(a - b)",
                           "a - (b - c)", "a/(b*c)", "a*b/c", "(a + b)*c", "-(-a)", "2^(n!)"}) {
    const ExprPtr a = parse_expression(text, {"a", "b", "c", "n"});
    CAPTURE(text);
    CHECK(equal(*parse_expression(print(*a), {"a", "b", "c", "n"}), *a));
  }
}

TEST_CASE("builtin corpus") {
  const Corpus c = builtin_corpus();
  CHECK(equal(parse(print(c)), c));
  CHECK(print(parse(print(c))) == print(c));

  CHECK(find(c, "eq2").lhs->domain == Domain::infinite(1));
  CHECK(find(c, "eq2").param->lo == 0);
  CHECK(find(c, "eq2").param->hi == 3);
  CHECK_FALSE(find(c, "eq2").expect.confirmed);
  CHECK_FALSE(find(c, "eq3").expect.confirmed);

  const Identity& eq4 = find(c, "eq4_primes");
  CHECK(eq4.expect.min_digits == 10);
  REQUIRE(eq4.rhs->kind == ExprKind::div);
  CHECK(eq4.rhs->child(1).domain == Domain::primes());

  // eq3 is eq4 with the division by the product replaced by multiplication.
  const Identity& eq3 = find(c, "eq3");
  REQUIRE(eq3.lhs->kind == ExprKind::mul);
  CHECK(equal(eq3.lhs->child(0), eq4.rhs->child(0)));
  CHECK(equal(eq3.lhs->child(1), eq4.rhs->child(1)));

  CHECK(find(c, "eq6").param->hi - find(c, "eq6").param->lo == 3);
  CHECK(find(c, "eq7").expect.min_digits == 30);
  CHECK(find(c, "eq8").expect.min_digits == 6);
  CHECK(find(c, "eq9").param->hi == 5);
  CHECK(find(c, "eq10").expect.min_digits == 8);
  CHECK_FALSE(find(c, "eq11_as_printed").expect.confirmed);
  CHECK(find(c, "eq11_sqrt3_variant").expect.min_digits == 10);
}

TEST_CASE("lexical and syntax errors") {
  CHECK(error_text(wrap("1.5")).find("decimal") != std::string::npos);
  CHECK(error_pos(wrap("- -x")).line == 2);
  CHECK(error_pos(wrap("2 +")).line == 2);
  CHECK(error_pos(wrap("pi(2)")).line == 2);
  CHECK(error_pos(wrap("foo(2)")).line == 2);
  CHECK(error_pos(wrap("sum(k, 3..1, k)")).line == 2);
  CHECK(error_pos("identity \"x\" { lhs = 1; rhs = 1; }").line == 1);
  CHECK(error_pos("identity \"x\" { lhs = 1; rhs = 1; expect = true; } $").column == 51);
  CHECK(error_pos("identity \"unterminated { lhs = 1; }").line == 1);
}

TEST_CASE("validation errors") {
  CHECK(error_text(wrap("(n - 2)!", "  param n in 0..3;\n")).find("factorial argument is -2 at n = 0") !=
        std::string::npos);
  CHECK(error_pos(wrap("2^(1/2)")).line == 2);
  CHECK(error_pos(wrap("euler(k/2)", "  param k in 0..3;\n")).line == 2);
  CHECK(error_pos(wrap("bernoulli_hist(0)")).line == 2);
  CHECK(error_pos(wrap("sum(n, 1..inf, 1/n^2)", "  param n in 0..3;\n")).line == 2);
  CHECK(error_pos(wrap("sum(pi, 1..inf, 1)")).line == 2);
  CHECK(error_pos(wrap("1", "  param n in 3..1;\n")).line == 1);
  CHECK(error_text("identity \"a\" { lhs = 1; rhs = 1; expect = true; }\nidentity \"a\" { lhs = 1; rhs = 1; expect "
                   "= true; }")
            .find("duplicate identity id") != std::string::npos);
  CHECK_NOTHROW(parse(wrap("sum(k, 1..inf, 1/k^2) + (n + 1)!", "  param n in 0..3;\n")));
}

TEST_CASE("whitespace, comments and line endings") {
  const std::string lf = "# header\nidentity \"x\" { # trailing\n  lhs = 1; rhs = 1;\n  expect = false;\n}\n";
  std::string crlf;
  for (char ch : lf) {
    if (ch == '\n') crlf += '\r';
    crlf += ch;
  }
  CHECK(equal(parse(lf), parse(crlf)));
  CHECK(parse("").identities.empty());
  CHECK(parse("  # only a comment\n").identities.empty());
}

TEST_CASE("exact evaluation") {
  Bindings env{{"n", 3}};
  CHECK(exact_value(*parse_expression("(2*n)!/2^n", {"n"}), env) == 90);
  const ExprPtr e = parse_expression("euler(2*n) + bernoulli_hist(n + 1)", {"n"});
  CHECK(exact_value(*e, env) == mpq_class(-61 * 30 + 1, 30));
  CHECK(exact_value(*parse_expression("(-1)^(n + 1) * 3^-2", {"n"}), env) == mpq_class(1, 9));
  CHECK_FALSE(exact_value(*parse_expression("pi/4"), {}));
  CHECK_FALSE(exact_value(*parse_expression("sqrt(4)"), {}));
  CHECK_THROWS_AS(exact_value(*parse_expression("1/(n - 3)", {"n"}), env), EvalError);
}

TEST_CASE("property: every parse error points inside the input") {
  const std::string base = builtin_corpus_text();
  std::mt19937_64 rng(99);
  const std::string junk = "(){};,.=^!-+*/#\"$@ abc 12 inf";
  int errors = 0;
  for (int i = 0; i < 300; ++i) {
    std::string text = base;
    const std::size_t at = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
    if (i % 2 == 0) {
      text.erase(at, 1 + at % 3);
    } else {
      text.insert(at, 1, junk[static_cast<std::size_t>(i) % junk.size()]);
    }
    int lines = 1;
    for (char ch : text) lines += ch == '\n';
    try {
      parse(text);
    } catch (const ParseError& e) {
      ++errors;
      CHECK(e.pos().line >= 1);
      CHECK(e.pos().line <= lines);
      CHECK(e.pos().column >= 1);
    }
  }
  CHECK(errors > 100);
}

TEST_CASE("property: round trip on generated corpora") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    CorpusGen gen(seed);
    const Corpus c = gen.corpus();
    CAPTURE(seed);
    const std::string text = print(c);
    Corpus back;
    REQUIRE_NOTHROW(back = parse(text));
    CHECK(equal(back, c));
    CHECK(print(back) == text);
  }
}
