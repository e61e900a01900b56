#include <string>

#include "idv/dsl.hpp"
#include "idv/exactseq.hpp"

namespace idv::dsl {

namespace {

constexpr long kMaxFactorial = 100000;
constexpr long kMaxExponent = 100000;
constexpr long kMaxSequenceIndex = 5000;
constexpr long kMaxFiniteTerms = 1000000;

mpz_class require_integer(const mpq_class& v, const char* what) {
  if (v.get_den() != 1) throw EvalError(std::string(what) + " must be an integer, got " + v.get_str());
  return v.get_num();
}

long require_small(const mpz_class& v, long limit, const char* what) {
  if (!v.fits_slong_p() || v > limit || v < -limit) {
    throw EvalError(std::string(what) + " " + v.get_str() + " is too large");
  }
  return v.get_si();
}

mpq_class power(const mpq_class& base, long e) {
  if (e < 0 && base == 0) throw EvalError("division by zero: 0 raised to a negative power");
  const unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), n);
  mpq_class out = e < 0 ? mpq_class(den, num) : mpq_class(num, den);
  out.canonicalize();
  return out;
}

}  // namespace

std::optional<mpq_class> exact_value(const Expr& e, const Bindings& env) {
  auto sub = [&env](const Expr& x) { return exact_value(x, env); };
  switch (e.kind) {
    case ExprKind::int_lit:
    case ExprKind::rat_lit:
      return e.value;
    case ExprKind::pi:
    case ExprKind::sqrt:
    case ExprKind::cosh:
      return std::nullopt;
    case ExprKind::var: {
      const auto it = env.find(e.name);
      if (it == env.end()) throw EvalError("unbound variable '" + e.name + "'");
      return mpq_class(it->second);
    }
    case ExprKind::neg: {
      auto a = sub(e.child());
      if (!a) return std::nullopt;
      return mpq_class(-*a);
    }
    case ExprKind::abs: {
      auto a = sub(e.child());
      if (!a) return std::nullopt;
      return mpq_class(abs(*a));
    }
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
    case ExprKind::div: {
      auto a = sub(e.child(0));
      if (!a) return std::nullopt;
      auto b = sub(e.child(1));
      if (!b) return std::nullopt;
      switch (e.kind) {
        case ExprKind::add: return mpq_class(*a + *b);
        case ExprKind::sub: return mpq_class(*a - *b);
        case ExprKind::mul: return mpq_class(*a * *b);
        default:
          if (*b == 0) throw EvalError("division by zero");
          return mpq_class(*a / *b);
      }
    }
    case ExprKind::pow: {
      auto base = sub(e.child(0));
      if (!base) return std::nullopt;
      auto ex = sub(e.child(1));
      if (!ex) throw EvalError("exponent must be an integer, not an irrational value");
      const mpz_class n = require_integer(*ex, "exponent");
      if (*base == 1) return mpq_class(1);
      if (*base == -1) return mpq_class(mpz_odd_p(n.get_mpz_t()) ? -1 : 1);
      return power(*base, require_small(n, kMaxExponent, "exponent"));
    }
    case ExprKind::factorial: {
      auto a = sub(e.child());
      if (!a) throw EvalError("factorial argument must be an integer, not an irrational value");
      const mpz_class n = require_integer(*a, "factorial argument");
      if (n < 0) throw EvalError("factorial of negative number " + n.get_str());
      return mpq_class(exactseq::factorial(require_small(n, kMaxFactorial, "factorial argument")));
    }
    case ExprKind::euler_num: {
      auto a = sub(e.child());
      if (!a) throw EvalError("euler index must be an integer, not an irrational value");
      const mpz_class n = require_integer(*a, "euler index");
      if (n < 0) throw EvalError("euler index must be nonnegative, got " + n.get_str());
      return mpq_class(exactseq::euler_number(static_cast<int>(require_small(n, kMaxSequenceIndex, "euler index"))));
    }
    case ExprKind::bernoulli_hist: {
      auto a = sub(e.child());
      if (!a) throw EvalError("bernoulli_hist index must be an integer, not an irrational value");
      const mpz_class m = require_integer(*a, "bernoulli_hist index");
      if (m < 1) throw EvalError("bernoulli_hist index must be at least 1, got " + m.get_str());
      return exactseq::bernoulli_hist(static_cast<int>(require_small(m, kMaxSequenceIndex, "bernoulli_hist index")));
    }
    case ExprKind::chi4: {
      auto a = sub(e.child());
      if (!a) throw EvalError("chi4 argument must be an integer");
      const mpz_class p = require_integer(*a, "chi4 argument");
      if (p < 3 || !p.fits_ulong_p()) throw EvalError("chi4: " + p.get_str() + " is not an odd prime");
      try {
        return mpq_class(exactseq::chi4(p.get_ui()));
      } catch (const std::invalid_argument& err) {
        throw EvalError(err.what());
      }
    }
    case ExprKind::big_sum:
    case ExprKind::big_prod: {
      if (e.domain.is_infinite()) return std::nullopt;
      if (e.domain.hi - e.domain.lo >= kMaxFiniteTerms) throw EvalError("finite range too long for exact evaluation");
      const bool is_sum = e.kind == ExprKind::big_sum;
      mpq_class acc = is_sum ? 0 : 1;
      Bindings inner = env;
      for (long k = e.domain.lo; k <= e.domain.hi; ++k) {
        inner[e.name] = k;
        auto t = exact_value(e.child(), inner);
        if (!t) return std::nullopt;
        if (is_sum) {
          acc += *t;
        } else {
          acc *= *t;
        }
      }
      return acc;
    }
  }
  return std::nullopt;
}

}  // namespace idv::dsl
