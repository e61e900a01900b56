// Tree-walking enclosure evaluator.  Rational-valued subtrees stay exact;
// everything else becomes a ball at the working precision.  Infinite bigops
// are matched against the shapes the analytic module can bound:
//
//   sum(k, lo..inf, C (-1)^(k+c) (a k + b)^-s)        alternating or plain power sums
//   prod(k, 1..inf, 1 - (-1)^k / (2k + 1)^s)           paired odd product
//   prod(p, odd_primes, (1 - c X / p^s)^(+-1))          Euler products, X = 1 or chi4(p)
//
// Products are matched by exact probing: the body restricted to one residue
// class is a rational function whose degree is bounded from the tree, so
// agreeing with the candidate at more points than that degree proves the
// two are identical.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "idv/analytic.hpp"
#include "idv/engine.hpp"
#include "idv/exactseq.hpp"

namespace idv::engine {

using dsl::Expr;
using dsl::ExprKind;

std::string to_string(Mode m) { return m == Mode::rigorous ? "rigorous" : "heuristic"; }

void check_budget(const EvalBudget& budget) {
  if (budget.digits < 4) throw std::invalid_argument("digits must be at least 4");
  if (budget.max_terms == 0) throw std::invalid_argument("max_terms must be positive");
  if (budget.prime_limit == 0) throw std::invalid_argument("prime_limit must be positive");
}

Precision working_precision(long digits) { return Precision(std::max(digits, 8L)); }

namespace {

constexpr long kMaxExactExponent = 100000;
constexpr long kMaxProbeDegree = 400;
constexpr std::uint64_t kHeuristicStart = 1024;

struct Value {
  std::optional<mpq_class> exact;
  BallReal ball;
};

struct Affine {
  mpq_class a;
  mpq_class b;
};

struct Degree {
  long num = 0;
  long den = 0;
};

std::string cap_text(const char* name, std::uint64_t value) { return std::string(name) + " " + std::to_string(value); }

class Evaluator {
 public:
  explicit Evaluator(const EvalBudget& budget)
      : budget_(budget),
        prec_(working_precision(budget.digits)),
        meta_{BallReal(prec_), 0, 0, true, {}, std::nullopt} {}

  Enclosure run(const Expr& e, const dsl::Bindings& env) {
    Value v = eval(e, env);
    meta_.value = ball_of(v);
    meta_.exact = v.exact;
    return meta_;
  }

 private:
  BallReal ball_of(const Value& v) const { return v.exact ? BallReal::from_rational(*v.exact, prec_) : v.ball; }

  Value exact(mpq_class q) const { return Value{std::move(q), BallReal(prec_)}; }
  Value inexact(BallReal b) const { return Value{std::nullopt, std::move(b)}; }

  static mpz_class integer_of(const Value& v, const char* what) {
    if (!v.exact) throw DomainError(std::string(what) + " must be an exact integer");
    if (v.exact->get_den() != 1) {
      throw DomainError(std::string(what) + " must be an integer, got " + v.exact->get_str());
    }
    return v.exact->get_num();
  }

  // Applies an integer-valued builtin to an exact argument through the DSL's
  // exact evaluator, which owns the domain checks.
  Value exact_builtin(ExprKind kind, const Value& arg, const char* what) const {
    if (!arg.exact) throw DomainError(std::string(what) + " must be an exact integer");
    try {
      return exact(*dsl::exact_value(*dsl::make_unary(kind, dsl::make_rat(*arg.exact)), {}));
    } catch (const dsl::EvalError& err) {
      throw DomainError(err.what());
    }
  }

  Value eval(const Expr& e, const dsl::Bindings& env) {
    switch (e.kind) {
      case ExprKind::int_lit:
      case ExprKind::rat_lit:
        return exact(e.value);
      case ExprKind::pi:
        return inexact(const_pi(prec_));
      case ExprKind::var: {
        const auto it = env.find(e.name);
        if (it == env.end()) throw DomainError("unbound variable '" + e.name + "'");
        return exact(mpq_class(it->second));
      }
      case ExprKind::neg: {
        Value a = eval(e.child(), env);
        if (a.exact) return exact(-*a.exact);
        return inexact(-a.ball);
      }
      case ExprKind::add:
      case ExprKind::sub:
      case ExprKind::mul:
      case ExprKind::div:
        return arithmetic(e.kind, eval(e.child(0), env), eval(e.child(1), env));
      case ExprKind::pow:
        return power(eval(e.child(0), env), eval(e.child(1), env));
      case ExprKind::factorial:
        return exact_builtin(ExprKind::factorial, eval(e.child(), env), "factorial argument");
      case ExprKind::euler_num:
        return exact_builtin(ExprKind::euler_num, eval(e.child(), env), "euler index");
      case ExprKind::bernoulli_hist:
        return exact_builtin(ExprKind::bernoulli_hist, eval(e.child(), env), "bernoulli_hist index");
      case ExprKind::chi4:
        return exact_builtin(ExprKind::chi4, eval(e.child(), env), "chi4 argument");
      case ExprKind::abs: {
        Value a = eval(e.child(), env);
        if (a.exact) return exact(abs(*a.exact));
        return inexact(abs(a.ball));
      }
      case ExprKind::sqrt:
        return inexact(sqrt(ball_of(eval(e.child(), env))));
      case ExprKind::cosh:
        return inexact(cosh(ball_of(eval(e.child(), env))));
      case ExprKind::big_sum:
      case ExprKind::big_prod:
        return e.domain.is_infinite() ? infinite(e, env) : finite(e, env);
    }
    throw std::logic_error("unhandled expression kind");
  }

  Value arithmetic(ExprKind kind, const Value& a, const Value& b) const {
    if (a.exact && b.exact) {
      switch (kind) {
        case ExprKind::add: return exact(*a.exact + *b.exact);
        case ExprKind::sub: return exact(*a.exact - *b.exact);
        case ExprKind::mul: return exact(*a.exact * *b.exact);
        default:
          if (*b.exact == 0) throw DomainError("division by zero");
          return exact(*a.exact / *b.exact);
      }
    }
    const BallReal x = ball_of(a);
    const BallReal y = ball_of(b);
    switch (kind) {
      case ExprKind::add: return inexact(x + y);
      case ExprKind::sub: return inexact(x - y);
      case ExprKind::mul: return inexact(x * y);
      default: return inexact(x / y);
    }
  }

  Value power(const Value& base, const Value& ex) const {
    const mpz_class n = integer_of(ex, "exponent");
    if (base.exact) {
      const mpq_class& q = *base.exact;
      if (q == 1) return exact(1);
      if (q == -1) return exact(mpz_odd_p(n.get_mpz_t()) ? -1 : 1);
      if (n < 0 && q == 0) throw DomainError("division by zero: 0 raised to a negative power");
      if (n.fits_slong_p() && abs(n) <= kMaxExactExponent) {
        const unsigned long m = mpz_class(abs(n)).get_ui();
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), m);
        mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), m);
        mpq_class out = n < 0 ? mpq_class(den, num) : mpq_class(num, den);
        out.canonicalize();
        return exact(out);
      }
    }
    if (!n.fits_slong_p()) throw OverflowError("exponent " + n.get_str() + " out of range");
    const long m = n.get_si();
    const BallReal b = ball_of(base);
    if (m >= 0) return inexact(pow(b, m));
    return inexact(BallReal::from_integer(1, prec_) / pow(b, -m));
  }

  Value finite(const Expr& e, const dsl::Bindings& env) {
    const bool is_sum = e.kind == ExprKind::big_sum;
    if (static_cast<std::uint64_t>(e.domain.hi - e.domain.lo) >= budget_.max_terms) {
      throw DomainError("finite range " + std::to_string(e.domain.lo) + ".." + std::to_string(e.domain.hi) +
                        " exceeds max_terms");
    }
    Value acc = exact(is_sum ? 0 : 1);
    dsl::Bindings inner = env;
    for (long k = e.domain.lo; k <= e.domain.hi; ++k) {
      inner[e.name] = k;
      acc = arithmetic(is_sum ? ExprKind::add : ExprKind::mul, acc, eval(e.child(), inner));
    }
    return acc;
  }

  // ---- shape analysis -------------------------------------------------

  std::optional<mpq_class> constant_value(const Expr& e, const dsl::Bindings& env) {
    Value v = eval(e, env);
    return v.exact;
  }

  std::optional<Affine> affine(const Expr& e, const std::string& k, const dsl::Bindings& env) {
    if (!dsl::mentions(e, k)) {
      auto v = constant_value(e, env);
      if (!v) return std::nullopt;
      return Affine{0, *v};
    }
    switch (e.kind) {
      case ExprKind::var:
        return Affine{1, 0};
      case ExprKind::neg: {
        auto a = affine(e.child(), k, env);
        if (!a) return std::nullopt;
        return Affine{-a->a, -a->b};
      }
      case ExprKind::add:
      case ExprKind::sub: {
        auto a = affine(e.child(0), k, env);
        auto b = affine(e.child(1), k, env);
        if (!a || !b) return std::nullopt;
        if (e.kind == ExprKind::add) return Affine{a->a + b->a, a->b + b->b};
        return Affine{a->a - b->a, a->b - b->b};
      }
      case ExprKind::mul: {
        auto a = affine(e.child(0), k, env);
        auto b = affine(e.child(1), k, env);
        if (!a || !b) return std::nullopt;
        if (a->a == 0) return Affine{a->b * b->a, a->b * b->b};
        if (b->a == 0) return Affine{b->b * a->a, b->b * a->b};
        return std::nullopt;
      }
      case ExprKind::div: {
        auto a = affine(e.child(0), k, env);
        auto b = affine(e.child(1), k, env);
        if (!a || !b || b->a != 0 || b->b == 0) return std::nullopt;
        return Affine{a->a / b->b, a->b / b->b};
      }
      default:
        return std::nullopt;
    }
  }

  static bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

  struct PowerTerm {
    Value coeff;
    bool negative = false;
    bool alternating = false;
    bool has_base = false;
    mpz_class a, b;
    long exponent = 0;
  };

  bool add_base(PowerTerm& t, mpz_class a, mpz_class b, long exponent) {
    if (a == 0) return false;
    if (a < 0) {
      a = -a;
      b = -b;
      if (exponent % 2 != 0) t.negative = !t.negative;
    }
    if (t.has_base && (t.a != a || t.b != b)) return false;
    t.has_base = true;
    t.a = a;
    t.b = b;
    t.exponent += exponent;
    return true;
  }

  bool collect(const Expr& e, const std::string& k, const dsl::Bindings& env, bool invert, PowerTerm& t) {
    if (!dsl::mentions(e, k)) {
      Value v = eval(e, env);
      t.coeff = arithmetic(invert ? ExprKind::div : ExprKind::mul, t.coeff, v);
      return true;
    }
    switch (e.kind) {
      case ExprKind::mul:
        return collect(e.child(0), k, env, invert, t) && collect(e.child(1), k, env, invert, t);
      case ExprKind::div:
        return collect(e.child(0), k, env, invert, t) && collect(e.child(1), k, env, !invert, t);
      case ExprKind::neg:
        t.negative = !t.negative;
        return collect(e.child(), k, env, invert, t);
      case ExprKind::pow: {
        const Expr& base = e.child(0);
        const Expr& ex = e.child(1);
        if (dsl::mentions(ex, k)) {
          if (dsl::mentions(base, k)) return false;
          auto bv = constant_value(base, env);
          if (!bv || *bv != -1) return false;
          auto aff = affine(ex, k, env);
          if (!aff || !is_integer(aff->a) || !is_integer(aff->b)) return false;
          if (mpz_odd_p(aff->a.get_num_mpz_t())) t.alternating = !t.alternating;
          if (mpz_odd_p(aff->b.get_num_mpz_t())) t.negative = !t.negative;
          return true;
        }
        auto ev = constant_value(ex, env);
        if (!ev || !is_integer(*ev) || !ev->get_num().fits_slong_p()) return false;
        auto aff = affine(base, k, env);
        if (!aff || !is_integer(aff->a) || !is_integer(aff->b)) return false;
        const long n = ev->get_num().get_si();
        return add_base(t, aff->a.get_num(), aff->b.get_num(), invert ? -n : n);
      }
      default: {
        auto aff = affine(e, k, env);
        if (!aff || !is_integer(aff->a) || !is_integer(aff->b)) return false;
        return add_base(t, aff->a.get_num(), aff->b.get_num(), invert ? -1 : 1);
      }
    }
  }

  // Degree bounds of the body as a rational function of the index, valid
  // within one residue class where (-1)^(affine) and chi4 are constant.
  std::optional<Degree> degree(const Expr& e, const std::string& k, const dsl::Bindings& env) {
    if (!dsl::mentions(e, k)) return Degree{};
    auto cap = [](Degree d) -> std::optional<Degree> {
      if (d.num > kMaxProbeDegree || d.den > kMaxProbeDegree) return std::nullopt;
      return d;
    };
    switch (e.kind) {
      case ExprKind::var:
        return Degree{1, 0};
      case ExprKind::chi4:
        return Degree{};
      case ExprKind::neg:
        return degree(e.child(), k, env);
      case ExprKind::add:
      case ExprKind::sub:
      case ExprKind::mul:
      case ExprKind::div: {
        auto a = degree(e.child(0), k, env);
        auto b = degree(e.child(1), k, env);
        if (!a || !b) return std::nullopt;
        if (e.kind == ExprKind::mul) return cap({a->num + b->num, a->den + b->den});
        if (e.kind == ExprKind::div) return cap({a->num + b->den, a->den + b->num});
        return cap({std::max(a->num + b->den, b->num + a->den), a->den + b->den});
      }
      case ExprKind::pow: {
        const Expr& ex = e.child(1);
        if (dsl::mentions(ex, k)) {
          if (dsl::mentions(e.child(0), k)) return std::nullopt;
          auto bv = constant_value(e.child(0), env);
          if (!bv || (*bv != 1 && *bv != -1)) return std::nullopt;
          auto aff = affine(ex, k, env);
          if (!aff || !is_integer(aff->a) || !is_integer(aff->b)) return std::nullopt;
          return Degree{};
        }
        auto ev = constant_value(ex, env);
        if (!ev || !is_integer(*ev) || !ev->get_num().fits_slong_p()) return std::nullopt;
        const long n = ev->get_num().get_si();
        if (n > kMaxProbeDegree || n < -kMaxProbeDegree) return std::nullopt;
        auto d = degree(e.child(0), k, env);
        if (!d) return std::nullopt;
        if (n >= 0) return cap({n * d->num, n * d->den});
        return cap({-n * d->den, -n * d->num});
      }
      default:
        return std::nullopt;
    }
  }

  // Candidate exponents: |n| for every power of an index-dependent base, and 1.
  void exponents(const Expr& e, const std::string& k, const dsl::Bindings& env, std::vector<long>& out) {
    if (e.kind == ExprKind::pow && dsl::mentions(e.child(0), k) && !dsl::mentions(e.child(1), k)) {
      auto ev = constant_value(e.child(1), env);
      if (ev && is_integer(*ev) && ev->get_num().fits_slong_p()) {
        const long n = std::labs(ev->get_num().get_si());
        if (n > 0 && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
      }
    }
    for (const auto& c : e.children) exponents(*c, k, env, out);
  }

  template <class Candidate>
  bool probe(const Expr& body, const std::string& k, const dsl::Bindings& env, const std::vector<long>& points,
             Candidate candidate) {
    dsl::Bindings inner = env;
    for (long x : points) {
      inner[k] = x;
      std::optional<mpq_class> v;
      try {
        v = dsl::exact_value(body, inner);
      } catch (const dsl::EvalError&) {
        return false;
      }
      if (!v || *v != candidate(x)) return false;
    }
    return true;
  }

  static mpq_class inverse_power(long base, long s) {
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(s));
    return mpq_class(mpz_class(1), d);
  }

  // ---- infinite bigops -----------------------------------------------

  std::string describe(const Expr& e) const { return dsl::print(e); }

  void note_limit(const analytic::Evaluation& ev, const char* technique, const std::string& cap) {
    meta_.terms_used = std::max(meta_.terms_used, ev.terms_used);
    meta_.prime_limit_used = std::max(meta_.prime_limit_used, ev.prime_limit_used);
    if (ev.budget_exhausted) meta_.limits.push_back({technique, cap, ev.tail.value});
  }

  Value infinite(const Expr& e, const dsl::Bindings& env) {
    if (auto v = e.kind == ExprKind::big_sum ? recognized_sum(e, env) : recognized_product(e, env)) return *v;
    if (budget_.mode == Mode::rigorous) {
      throw UnsupportedShape("no rigorous tail bound for " + describe(e) + "; use heuristic mode");
    }
    return heuristic(e, env);
  }

  std::optional<Value> recognized_sum(const Expr& e, const dsl::Bindings& env) {
    if (e.domain.kind != dsl::DomainKind::infinite_integers) return std::nullopt;
    PowerTerm t{exact(1), false, false, false, 0, 0, 0};
    if (!collect(e.child(), e.name, env, false, t) || !t.has_base || t.exponent >= 0) return std::nullopt;
    if (t.exponent < -static_cast<long>(std::numeric_limits<int>::max() / 2)) return std::nullopt;
    const int s = static_cast<int>(-t.exponent);
    const long lo = e.domain.lo;
    if (!t.a.fits_slong_p() || !t.b.fits_slong_p()) return std::nullopt;
    const analytic::LinearBase base{t.a.get_si(), t.b.get_si()};
    if (base.a * lo + base.b <= 0) {
      throw DomainError("term base " + std::to_string(base.a) + "*k + " + std::to_string(base.b) +
                        " is not positive at k = " + std::to_string(lo) + " in " + describe(e));
    }
    if (!t.alternating && s < 2) throw DomainError("divergent series " + describe(e));
    const analytic::Evaluation ev = t.alternating
                                        ? analytic::alternating_power_sum(base, lo, s, prec_, budget_.max_terms)
                                        : analytic::power_sum(base, lo, s, prec_, budget_.max_terms);
    note_limit(ev, t.alternating ? "alternating series tail bound" : "series tail bound",
               cap_text("max_terms", budget_.max_terms));
    BallReal value = ev.value * ball_of(t.coeff);
    if (t.negative) value = -value;
    return inexact(value);
  }

  std::optional<Value> recognized_product(const Expr& e, const dsl::Bindings& env) {
    const std::string& k = e.name;
    const Expr& body = e.child();
    auto deg = degree(body, k, env);
    if (!deg) return std::nullopt;
    std::vector<long> candidates;
    exponents(body, k, env, candidates);
    if (candidates.empty()) candidates.push_back(1);

    if (e.domain.kind == dsl::DomainKind::infinite_integers) {
      if (e.domain.lo != 1) return std::nullopt;
      for (long s : candidates) {
        const long needed = deg->num + deg->den + s + 1;
        std::vector<long> points;
        for (long x = 1; x <= 2 * needed; ++x) points.push_back(x);
        auto g = [s](long x) {
          const mpq_class t = inverse_power(2 * x + 1, s);
          return x % 2 == 0 ? mpq_class(1 - t) : mpq_class(1 + t);
        };
        if (!probe(body, k, env, points, g)) continue;
        if (s > std::numeric_limits<int>::max()) return std::nullopt;
        const analytic::Evaluation ev = analytic::odd_product_direct(static_cast<int>(s), prec_, budget_.max_terms);
        note_limit(ev, "paired product tail bound", cap_text("max_terms", budget_.max_terms));
        return inexact(ev.value);
      }
      return std::nullopt;
    }

    // Odd primes: split by p mod 4.
    for (long s : candidates) {
      const long needed = deg->num + deg->den + s + 1;
      std::vector<long> points;
      int ones = 0;
      int threes = 0;
      for (std::uint32_t p : exactseq::odd_primes(100000)) {
        if (ones >= needed && threes >= needed) break;
        int& count = p % 4 == 1 ? ones : threes;
        if (count >= needed) continue;
        ++count;
        points.push_back(static_cast<long>(p));
      }
      if (ones < needed || threes < needed) return std::nullopt;
      for (analytic::Character ch : {analytic::Character::chi4, analytic::Character::trivial}) {
        for (bool negate : {false, true}) {
          for (int power : {1, -1}) {
            auto g = [&](long p) {
              int c = ch == analytic::Character::chi4 ? (p % 4 == 1 ? 1 : -1) : 1;
              if (negate) c = -c;
              const mpq_class f = 1 - c * inverse_power(p, s);
              return power > 0 ? f : mpq_class(1 / f);
            };
            if (!probe(body, k, env, points, g)) continue;
            if (s < 2) {
              throw UnsupportedShape("Euler product with exponent 1 has no rigorous tail bound: " + describe(e));
            }
            const analytic::EulerFactor factor{static_cast<int>(s), ch, negate, power};
            const analytic::Evaluation ev =
                analytic::odd_prime_product(factor, prec_, std::max<std::uint64_t>(budget_.prime_limit, 3));
            note_limit(ev, "prime tail bound", cap_text("prime_limit", budget_.prime_limit));
            return inexact(ev.value);
          }
        }
      }
    }
    return std::nullopt;
  }

  // Truncation doubling until the printed digits stop changing; the result
  // is flagged non-rigorous and its radius is the last change.
  Value heuristic(const Expr& e, const dsl::Bindings& env) {
    meta_.rigorous = false;
    const bool is_sum = e.kind == ExprKind::big_sum;
    const bool primes = e.domain.kind == dsl::DomainKind::odd_primes;
    const std::uint64_t cap = primes ? budget_.prime_limit : budget_.max_terms;
    const int shown = static_cast<int>(std::max(budget_.digits, 8L));

    BallReal acc = BallReal::from_integer(is_sum ? 0 : 1, prec_);
    BallReal previous = acc;
    dsl::Bindings inner = env;
    std::uint64_t done = 0;  // terms consumed, or prime bound reached
    std::uint64_t target = std::min(kHeuristicStart, cap);
    std::vector<std::uint32_t> prime_list;
    bool have_previous = false;
    for (;;) {
      if (primes) {
        if (target >= 3) {
          const exactseq::PrimeStream ps = exactseq::odd_primes(target);
          for (std::uint32_t p : ps) {
            if (p <= done) continue;
            inner[e.name] = static_cast<unsigned long>(p);
            const BallReal term = ball_of(eval(e.child(), inner));
            acc = is_sum ? acc + term : acc * term;
          }
        }
      } else {
        for (std::uint64_t i = done; i < target; ++i) {
          inner[e.name] = static_cast<long>(e.domain.lo + static_cast<long>(i));
          const BallReal term = ball_of(eval(e.child(), inner));
          acc = is_sum ? acc + term : acc * term;
        }
      }
      done = target;
      if (primes) {
        meta_.prime_limit_used = std::max(meta_.prime_limit_used, done);
      } else {
        meta_.terms_used = std::max(meta_.terms_used, done);
      }
      if (have_previous && acc.mid_string(shown) == previous.mid_string(shown)) break;
      if (target >= cap) {
        meta_.limits.push_back({"heuristic truncation", cap_text(primes ? "prime_limit" : "max_terms", cap),
                                abs(acc - previous)});
        break;
      }
      previous = acc;
      have_previous = true;
      target = std::min(target * 2, cap);
    }
    const BallReal change = abs(acc - previous);
    return inexact(acc.add_error(change.upper(kRadiusBits)));
  }

  const EvalBudget& budget_;
  Precision prec_;
  Enclosure meta_;
};

}  // namespace

Enclosure evaluate(const dsl::Expr& expr, const dsl::Bindings& env, const EvalBudget& budget) {
  check_budget(budget);
  return Evaluator(budget).run(expr, env);
}

}  // namespace idv::engine
