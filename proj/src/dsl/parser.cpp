#include <cctype>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "idv/dsl.hpp"

namespace idv::dsl {

ParseError::ParseError(SourcePos pos, std::string token, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message +
                         (token.empty() ? std::string() : " (at '" + token + "')")),
      pos_(pos),
      token_(std::move(token)) {}

namespace {

enum class Tok { ident, integer, string, symbol, end };

struct Token {
  Tok type;
  std::string text;  // symbol text, identifier, digits, or decoded string
  std::string raw;   // as written, for error messages
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const SourcePos pos{line_, column_};
      if (at_end()) {
        out.push_back({Tok::end, "", "end of input", pos});
        return out;
      }
      const char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) word += advance();
        out.push_back({Tok::ident, word, word, pos});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string digits;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
        if (!at_end() && (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
          throw ParseError({line_, column_}, std::string(1, peek()), "unexpected character after number");
        }
        if (!at_end() && peek() == '.' && (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '.')) {
          throw ParseError({line_, column_}, ".", "decimal literals are not supported");
        }
        out.push_back({Tok::integer, digits, digits, pos});
      } else if (c == '"') {
        out.push_back(string_literal(pos));
      } else {
        out.push_back(symbol(pos));
      }
    }
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token string_literal(SourcePos pos) {
    std::string raw(1, advance());
    std::string value;
    for (;;) {
      if (at_end() || peek() == '\n') throw ParseError(pos, raw, "unterminated string");
      const char c = advance();
      raw += c;
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) throw ParseError(pos, raw, "unterminated string");
        const char e = advance();
        raw += e;
        if (e != '"' && e != '\\') throw ParseError(pos, raw, "unknown escape in string");
        value += e;
      } else {
        value += c;
      }
    }
    return {Tok::string, value, raw, pos};
  }

  Token symbol(SourcePos pos) {
    static const char* const two[] = {"..", ">="};
    for (const char* s : two) {
      if (text_.substr(pos_, 2) == s) {
        advance();
        advance();
        return {Tok::symbol, s, s, pos};
      }
    }
    static const std::string one = "{}(),;=+-*/^!";
    const char c = peek();
    if (one.find(c) == std::string::npos) {
      std::string bad(1, c);
      // Show a whole UTF-8 sequence rather than a lone lead byte.
      std::size_t i = pos_ + 1;
      while (i < text_.size() && (static_cast<unsigned char>(text_[i]) & 0xC0) == 0x80) bad += text_[i++];
      throw ParseError(pos, bad, "unexpected character");
    }
    advance();
    return {Tok::symbol, std::string(1, c), std::string(1, c), pos};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

const std::set<std::string>& function_names() {
  static const std::set<std::string> names = {"sqrt", "cosh", "abs", "euler", "bernoulli_hist", "chi4"};
  return names;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Corpus corpus() {
    Corpus out;
    while (cur().type != Tok::end) out.identities.push_back(identity());
    return out;
  }

  ExprPtr lone_expression() {
    ExprPtr e = expr();
    if (cur().type != Tok::end) fail("expected end of expression");
    return e;
  }

 private:
  const Token& cur() const { return tokens_[i_]; }
  const Token& next() const { return tokens_[std::min(i_ + 1, tokens_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(cur().pos, cur().raw, message); }

  bool is_symbol(const char* s) const { return cur().type == Tok::symbol && cur().text == s; }
  bool is_word(const char* s) const { return cur().type == Tok::ident && cur().text == s; }

  Token take() { return tokens_[i_ < tokens_.size() - 1 ? i_++ : i_]; }

  void expect_symbol(const char* s) {
    if (!is_symbol(s)) fail(std::string("expected '") + s + "'");
    take();
  }

  void expect_word(const char* s) {
    if (!is_word(s)) fail(std::string("expected '") + s + "'");
    take();
  }

  long integer(const char* what) {
    if (cur().type != Tok::integer) fail(std::string("expected ") + what);
    const mpz_class v(cur().text);
    if (!v.fits_slong_p()) fail("integer out of range");
    take();
    return v.get_si();
  }

  Identity identity() {
    Identity out;
    out.pos = cur().pos;
    expect_word("identity");
    if (cur().type != Tok::string) fail("expected identity name string");
    out.id = take().text;
    expect_symbol("{");
    expect_word("lhs");
    expect_symbol("=");
    out.lhs = expr();
    expect_symbol(";");
    expect_word("rhs");
    expect_symbol("=");
    out.rhs = expr();
    expect_symbol(";");
    if (is_word("param")) {
      take();
      Param p;
      if (cur().type != Tok::ident) fail("expected parameter name");
      p.name = take().text;
      expect_word("in");
      p.lo = integer("range start");
      expect_symbol("..");
      p.hi = integer("range end");
      expect_symbol(";");
      out.param = p;
    }
    expect_word("expect");
    expect_symbol("=");
    if (is_word("true")) {
      take();
      out.expect.confirmed = true;
      if (is_symbol(">=")) {
        take();
        const long d = integer("digit count");
        if (d < 1 || d > 100000) fail("digit count out of range");
        out.expect.min_digits = static_cast<int>(d);
        expect_word("digits");
      }
    } else if (is_word("false")) {
      take();
      out.expect.confirmed = false;
    } else {
      fail("expected 'true' or 'false'");
    }
    expect_symbol(";");
    expect_symbol("}");
    return out;
  }

  ExprPtr expr() { return additive(); }

  ExprPtr additive() {
    ExprPtr lhs = mult();
    while (is_symbol("+") || is_symbol("-")) {
      const Token op = take();
      lhs = make_binary(op.text == "+" ? ExprKind::add : ExprKind::sub, lhs, mult(), op.pos);
    }
    return lhs;
  }

  ExprPtr mult() {
    ExprPtr lhs = unary();
    while (is_symbol("*") || is_symbol("/")) {
      const Token op = take();
      lhs = make_binary(op.text == "*" ? ExprKind::mul : ExprKind::div, lhs, unary(), op.pos);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (is_symbol("-")) {
      const Token op = take();
      return make_unary(ExprKind::neg, postfix(), op.pos);
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = atom();
    for (;;) {
      if (is_symbol("^")) {
        const Token op = take();
        e = make_binary(ExprKind::pow, e, unary(), op.pos);
      } else if (is_symbol("!")) {
        const Token op = take();
        e = make_unary(ExprKind::factorial, e, op.pos);
      } else {
        return e;
      }
    }
  }

  ExprPtr atom() {
    const Token t = cur();
    if (t.type == Tok::integer) {
      take();
      return make_int(mpz_class(t.text), t.pos);
    }
    if (is_symbol("(")) {
      take();
      ExprPtr e = expr();
      expect_symbol(")");
      return e;
    }
    if (t.type != Tok::ident) fail("expected an expression");
    take();
    const bool call = is_symbol("(");
    if (t.text == "pi") {
      if (call) fail("pi takes no arguments");
      return make_pi(t.pos);
    }
    if (t.text == "sum" || t.text == "prod") {
      if (!call) throw ParseError(t.pos, t.raw, "expected '(' after " + t.text);
      return bigop(t);
    }
    if (function_names().count(t.text) != 0) {
      if (!call) throw ParseError(t.pos, t.raw, "expected '(' after " + t.text);
      take();
      ExprPtr arg = expr();
      if (is_symbol(",")) fail(t.text + " takes exactly one argument");
      expect_symbol(")");
      static const std::map<std::string, ExprKind> kinds = {
          {"sqrt", ExprKind::sqrt},          {"cosh", ExprKind::cosh},
          {"abs", ExprKind::abs},            {"euler", ExprKind::euler_num},
          {"bernoulli_hist", ExprKind::bernoulli_hist}, {"chi4", ExprKind::chi4}};
      return make_unary(kinds.at(t.text), arg, t.pos);
    }
    if (call) throw ParseError(t.pos, t.raw, "unknown function '" + t.text + "'");
    if (t.text == "inf" || t.text == "odd_primes") {
      throw ParseError(t.pos, t.raw, "'" + t.text + "' is only valid as a bigop domain");
    }
    return make_var(t.text, t.pos);
  }

  ExprPtr bigop(const Token& head) {
    expect_symbol("(");
    if (cur().type != Tok::ident) fail("expected index variable");
    const Token index = take();
    expect_symbol(",");
    Domain domain;
    if (is_word("odd_primes")) {
      take();
      domain = Domain::primes();
    } else {
      const long lo = integer("domain start");
      expect_symbol("..");
      if (is_word("inf")) {
        take();
        domain = Domain::infinite(lo);
      } else {
        const SourcePos hi_pos = cur().pos;
        const long hi = integer("domain end or 'inf'");
        if (hi < lo) throw ParseError(hi_pos, std::to_string(hi), "empty range");
        domain = Domain::range(lo, hi);
      }
    }
    expect_symbol(",");
    ExprPtr body = expr();
    expect_symbol(")");
    return make_bigop(head.text == "sum" ? ExprKind::big_sum : ExprKind::big_prod, index.text, domain, body, head.pos);
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
};

}  // namespace

Corpus parse(std::string_view text) {
  Corpus out = Parser(text).corpus();
  validate(out);
  return out;
}

ExprPtr parse_expression(std::string_view text, const std::vector<std::string>& params,
                         const std::vector<Param>& ranges) {
  ExprPtr e = Parser(text).lone_expression();
  validate_expression(*e, params, ranges);
  return e;
}

}  // namespace idv::dsl
