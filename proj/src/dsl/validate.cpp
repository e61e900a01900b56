// Static checks on parsed corpora.  Integer-typed positions (factorial,
// euler and bernoulli_hist arguments, exponents) are checked by exact
// evaluation over the declared parameter range crossed with sample values of
// every enclosing bigop index.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "idv/dsl.hpp"

namespace idv::dsl {

namespace {

constexpr std::size_t kMaxSamples = 2048;

const std::set<std::string>& reserved_names() {
  static const std::set<std::string> names = {"pi",   "sum",   "prod",           "sqrt", "cosh",      "abs",
                                              "euler", "chi4", "bernoulli_hist", "inf",  "odd_primes"};
  return names;
}

SourcePos start_pos(const Expr& e) {
  switch (e.kind) {
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
    case ExprKind::div:
    case ExprKind::pow:
    case ExprKind::factorial:
      return start_pos(e.child(0));
    default:
      return e.pos;
  }
}

std::vector<long> range_samples(long lo, long hi, long edge) {
  std::vector<long> out;
  if (hi - lo + 1 <= 2 * edge) {
    for (long v = lo; v <= hi; ++v) out.push_back(v);
  } else {
    for (long v = lo; v < lo + edge; ++v) out.push_back(v);
    for (long v = hi - edge + 1; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

std::vector<long> index_samples(const Domain& d) {
  switch (d.kind) {
    case DomainKind::finite_range: return range_samples(d.lo, d.hi, 6);
    case DomainKind::infinite_integers: return range_samples(d.lo, d.lo + 7, 8);
    case DomainKind::odd_primes: return {3, 5, 7, 11, 13, 17, 19, 23};
  }
  return {};
}

std::string describe(const Bindings& b) {
  std::string out;
  for (const auto& [name, value] : b) {
    out += (out.empty() ? " at " : ", ") + name + " = " + value.get_str();
  }
  return out;
}

struct Scope {
  std::string name;
  DomainKind kind;
};

class Validator {
 public:
  Validator(std::vector<Scope> scopes, std::vector<Bindings> samples)
      : scopes_(std::move(scopes)), samples_(std::move(samples)) {}

  void walk(const Expr& e) {
    switch (e.kind) {
      case ExprKind::var:
        if (!bound(e.name)) throw ParseError(e.pos, e.name, "unbound variable '" + e.name + "'");
        break;
      case ExprKind::chi4: {
        const Expr& arg = e.child();
        const Scope* s = arg.kind == ExprKind::var ? find(arg.name) : nullptr;
        if (s == nullptr || s->kind != DomainKind::odd_primes) {
          throw ParseError(e.pos, "chi4", "chi4 is only valid on the index of a bigop over odd_primes");
        }
        break;
      }
      case ExprKind::factorial:
        check_integer(e.child(), 0, "factorial argument");
        break;
      case ExprKind::euler_num:
        check_integer(e.child(), 0, "euler index");
        break;
      case ExprKind::bernoulli_hist:
        check_integer(e.child(), 1, "bernoulli_hist index");
        break;
      case ExprKind::pow:
        check_integer(e.child(1), std::nullopt, "exponent");
        break;
      case ExprKind::big_sum:
      case ExprKind::big_prod:
        enter_bigop(e);
        return;
      default:
        break;
    }
    for (const auto& c : e.children) walk(*c);
  }

 private:
  const Scope* find(const std::string& name) const {
    for (const Scope& s : scopes_) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  bool bound(const std::string& name) const { return find(name) != nullptr; }

  void enter_bigop(const Expr& e) {
    if (reserved_names().count(e.name) != 0) {
      throw ParseError(e.pos, e.name, "'" + e.name + "' cannot be used as an index variable");
    }
    if (bound(e.name)) throw ParseError(e.pos, e.name, "index variable '" + e.name + "' shadows an outer variable");
    const std::vector<Bindings> saved = samples_;
    std::vector<Bindings> extended;
    for (const Bindings& b : samples_) {
      for (long v : index_samples(e.domain)) {
        if (extended.size() >= kMaxSamples) break;
        Bindings nb = b;
        nb[e.name] = v;
        extended.push_back(std::move(nb));
      }
    }
    samples_ = std::move(extended);
    scopes_.push_back({e.name, e.domain.kind});
    walk(e.child());
    scopes_.pop_back();
    samples_ = saved;
  }

  void check_integer(const Expr& arg, std::optional<long> minimum, const std::string& what) {
    for (const Bindings& b : samples_) {
      std::optional<mpq_class> v;
      try {
        v = exact_value(arg, b);
      } catch (const EvalError&) {
        continue;  // undefined at this sample; evaluation reports it if reached
      }
      if (!v) throw ParseError(start_pos(arg), print(arg), what + " must be integer-valued");
      if (v->get_den() != 1) {
        throw ParseError(start_pos(arg), print(arg), what + " is " + v->get_str() + describe(b) + ", not an integer");
      }
      if (minimum && *v < *minimum) {
        throw ParseError(start_pos(arg), print(arg),
                         what + " is " + v->get_str() + describe(b) + ", below " + std::to_string(*minimum));
      }
    }
  }

  std::vector<Scope> scopes_;
  std::vector<Bindings> samples_;
};

void check_name(const std::string& name, SourcePos pos) {
  if (reserved_names().count(name) != 0) {
    throw ParseError(pos, name, "'" + name + "' cannot be used as a parameter name");
  }
}

}  // namespace

void validate_expression(const Expr& e, const std::vector<std::string>& params, const std::vector<Param>& ranges) {
  std::vector<Scope> scopes;
  std::vector<Bindings> samples{Bindings{}};
  for (const std::string& name : params) {
    check_name(name, e.pos);
    scopes.push_back({name, DomainKind::finite_range});
    std::vector<long> values{0, 1, 2, 3};
    for (const Param& r : ranges) {
      if (r.name == name) values = range_samples(r.lo, r.hi, 32);
    }
    std::vector<Bindings> extended;
    for (const Bindings& b : samples) {
      for (long v : values) {
        Bindings nb = b;
        nb[name] = v;
        extended.push_back(std::move(nb));
      }
    }
    samples = std::move(extended);
  }
  Validator(std::move(scopes), std::move(samples)).walk(e);
}

void validate(const Corpus& corpus) {
  std::set<std::string> ids;
  for (const Identity& ident : corpus.identities) {
    if (!ids.insert(ident.id).second) {
      throw ParseError(ident.pos, "\"" + ident.id + "\"", "duplicate identity id '" + ident.id + "'");
    }
    std::vector<std::string> params;
    std::vector<Param> ranges;
    if (ident.param) {
      check_name(ident.param->name, ident.pos);
      if (ident.param->hi < ident.param->lo) {
        throw ParseError(ident.pos, ident.param->name, "empty parameter range for '" + ident.param->name + "'");
      }
      params.push_back(ident.param->name);
      ranges.push_back(*ident.param);
    }
    validate_expression(*ident.lhs, params, ranges);
    validate_expression(*ident.rhs, params, ranges);
  }
}

}  // namespace idv::dsl
