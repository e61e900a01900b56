// Verdicts from pairs of enclosures, and the corpus runner.
//
// Each (identity, parameter) first runs a cheap pass with both caps clipped
// to 4096: disjoint enclosures already refute.  Otherwise the digit request
// climbs D, 2D, 4D until the sides agree to the required digits, separate, or
// a capped tail makes further precision pointless.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <future>
#include <map>
#include <mutex>
#include <thread>

#include "idv/engine.hpp"

namespace idv::engine {

namespace {

constexpr std::uint64_t kPrepassCap = 4096;

std::string cache_key(const dsl::Expr& expr, const dsl::Bindings& env, const EvalBudget& b) {
  std::string key = dsl::print(expr);
  for (const auto& [name, value] : env) key += "|" + name + "=" + value.get_str();
  key += "|" + std::to_string(b.digits) + "|" + std::to_string(b.max_terms) + "|" + std::to_string(b.prime_limit) +
         "|" + to_string(b.mode);
  return key;
}

// Shared evaluations of identical sides; concurrent requests for the same key
// wait on the first one.
class SideCache {
 public:
  Enclosure get(const dsl::Expr& expr, const dsl::Bindings& env, const EvalBudget& budget) {
    const std::string key = cache_key(expr, env, budget);
    std::promise<Enclosure> promise;
    std::shared_future<Enclosure> future;
    {
      std::lock_guard lock(mu_);
      auto it = entries_.find(key);
      if (it != entries_.end()) {
        future = it->second;
      } else {
        entries_.emplace(key, promise.get_future().share());
      }
    }
    if (future.valid()) return future.get();
    try {
      Enclosure e = evaluate(expr, env, budget);
      promise.set_value(e);
      return e;
    } catch (...) {
      promise.set_exception(std::current_exception());
      throw;
    }
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::shared_future<Enclosure>> entries_;
};

Enclosure side(const dsl::Expr& expr, const dsl::Bindings& env, const EvalBudget& budget, SideCache* cache) {
  return cache != nullptr ? cache->get(expr, env, budget) : evaluate(expr, env, budget);
}

mpq_class exact_of(const Float& f) { return f.to_rational(); }

// Six significant digits, rounded toward zero from the exact value, in printf %g layout.
std::string lower_decimal(const mpq_class& q) {
  if (q <= 0) return "0";
  long e = 0;
  mpq_class scaled = q;
  while (scaled >= 10) scaled /= 10, ++e;
  while (scaled < 1) scaled *= 10, --e;
  const mpz_class m = mpz_class(scaled * 100000);  // truncates
  std::string digits = m.get_str();
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  const std::string frac = digits.substr(1);
  if (e < -4 || e >= 6) {
    char exp[32];
    std::snprintf(exp, sizeof exp, "e%c%02d", e < 0 ? '-' : '+', static_cast<int>(e < 0 ? -e : e));
    return digits.substr(0, 1) + (frac.empty() ? "" : "." + frac) + exp;
  }
  if (e < 0) return "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
  const std::size_t int_len = static_cast<std::size_t>(e) + 1;
  if (digits.size() <= int_len) return digits + std::string(int_len - digits.size(), '0');
  return digits.substr(0, int_len) + "." + digits.substr(int_len);
}

struct Comparison {
  bool disjoint = false;
  mpq_class gap;  // dist - rl - rr
  int digits = 0;
};

Comparison compare(const Enclosure& l, const Enclosure& r, int cap) {
  Comparison c;
  const bool exact = l.exact && r.exact;
  const mpq_class dist =
      exact ? mpq_class(abs(*l.exact - *r.exact)) : abs(exact_of(l.value.mid()) - exact_of(r.value.mid()));
  const mpq_class rl = exact ? mpq_class(0) : exact_of(l.value.rad());
  const mpq_class rr = exact ? mpq_class(0) : exact_of(r.value.rad());
  c.gap = dist - rl - rr;
  c.disjoint = c.gap > 0;
  c.digits = digits_below(std::max({dist, rl, rr}), cap);
  return c;
}

std::string limit_notes(const Enclosure& e, const char* name, int cap) {
  std::string out;
  const int reached = digits_below(exact_of(e.value.rad()), cap);
  if (reached >= cap) return out;
  for (const TailLimit& t : e.limits) {
    if (!out.empty()) out += "; ";
    out += t.technique + " limits " + name + " to " + std::to_string(reached) + " digits at " + t.cap;
  }
  return out;
}

std::string join(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "; " + b;
}

Record check_impl(const dsl::Identity& identity, std::optional<long> param, const EvalBudget& budget,
                  SideCache* cache) {
  check_budget(budget);
  Record rec;
  rec.id = identity.id;
  dsl::Bindings env;
  if (identity.param) {
    if (!param) throw std::invalid_argument("identity '" + identity.id + "' needs a parameter value");
    rec.param = param;
    env[identity.param->name] = *param;
  }
  const int min_digits = identity.expect.confirmed ? identity.expect.min_digits : dsl::kDefaultMinDigits;
  const auto started = std::chrono::steady_clock::now();

  auto record = [&](const Enclosure& l, const Enclosure& r) {
    rec.has_values = true;
    rec.lhs = l.value;
    rec.rhs = r.value;
    rec.terms_used = std::max(l.terms_used, r.terms_used);
    rec.prime_limit_used = std::max(l.prime_limit_used, r.prime_limit_used);
  };
  auto heuristic_note = [](const Enclosure& l, const Enclosure& r) {
    return l.rigorous && r.rigorous ? std::string() : std::string("heuristic truncation, not rigorous");
  };

  try {
    EvalBudget pre = budget;
    pre.max_terms = std::min(budget.max_terms, kPrepassCap);
    pre.prime_limit = std::min(budget.prime_limit, kPrepassCap);
    std::optional<std::pair<Enclosure, Enclosure>> reuse;
    {
      Enclosure l = side(*identity.lhs, env, pre, cache);
      Enclosure r = side(*identity.rhs, env, pre, cache);
      const Comparison c = compare(l, r, static_cast<int>(working_precision(budget.digits).digits()));
      if (c.disjoint && l.rigorous && r.rigorous) {
        record(l, r);
        rec.verdict.kind = Verdict::Kind::refuted;
        rec.verdict.gap = lower_decimal(c.gap);
      } else if (l.limits.empty() && r.limits.empty() && budget.mode == Mode::rigorous) {
        reuse.emplace(std::move(l), std::move(r));
      }
    }

    for (int rung = 0; rung < 3 && rec.verdict.kind != Verdict::Kind::refuted; ++rung) {
      EvalBudget b = budget;
      b.digits = budget.digits << rung;
      const int cap = static_cast<int>(working_precision(b.digits).digits());
      Enclosure l = rung == 0 && reuse ? reuse->first : side(*identity.lhs, env, b, cache);
      Enclosure r = rung == 0 && reuse ? reuse->second : side(*identity.rhs, env, b, cache);
      record(l, r);
      const Comparison c = compare(l, r, cap);
      const std::string notes = join(limit_notes(l, "lhs", cap), limit_notes(r, "rhs", cap));
      if (c.disjoint) {
        rec.verdict.kind = Verdict::Kind::refuted;
        rec.verdict.gap = lower_decimal(c.gap);
        rec.verdict.reason = heuristic_note(l, r);
        break;
      }
      if (c.digits >= min_digits) {
        rec.verdict.kind = Verdict::Kind::confirmed;
        rec.verdict.digits_matched = c.digits;
        rec.verdict.reason = join(heuristic_note(l, r), notes);
        break;
      }
      if (!notes.empty()) {
        rec.verdict.reason = join(heuristic_note(l, r), notes + "; " + std::to_string(min_digits) + " needed");
        break;
      }
      if (rung == 2) {
        rec.verdict.reason = join(heuristic_note(l, r), "sides agree to " + std::to_string(c.digits) +
                                                            " digits at " + std::to_string(b.digits) +
                                                            " digits of precision; " + std::to_string(min_digits) +
                                                            " needed");
      }
    }
  } catch (const std::exception& err) {
    rec.verdict = Verdict{};
    rec.verdict.reason = err.what();
  }

  rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  rec.matched = identity.expect.confirmed ? rec.verdict.kind == Verdict::Kind::confirmed
                                          : rec.verdict.kind == Verdict::Kind::refuted;
  return rec;
}

}  // namespace

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::confirmed: return "confirmed";
    case Verdict::Kind::refuted: return "refuted";
    case Verdict::Kind::inconclusive: return "inconclusive";
  }
  return "";
}

int digits_below(const mpq_class& x, int cap) {
  if (x == 0) return cap;
  Float f(64);
  mpfr_set_q(f.get(), x.get_mpq_t(), MPFR_RNDN);
  mpfr_log10(f.get(), f.get(), MPFR_RNDN);
  long d = static_cast<long>(-std::floor(f.to_double()));
  auto power = [](long e) {  // 10^-e
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(e)));
    return e >= 0 ? mpq_class(mpz_class(1), t) : mpq_class(t);
  };
  while (x > power(d)) --d;
  while (x <= power(d + 1)) ++d;
  return static_cast<int>(std::min<long>(d, cap));
}

Record check(const dsl::Identity& identity, std::optional<long> param, const EvalBudget& budget) {
  return check_impl(identity, param, budget, nullptr);
}

Report run(const dsl::Corpus& corpus, const EvalBudget& budget, const RunOptions& options) {
  check_budget(budget);
  struct Task {
    const dsl::Identity* identity;
    std::optional<long> param;
  };
  std::vector<Task> tasks;
  for (const dsl::Identity& ident : corpus.identities) {
    if (ident.param) {
      for (long v = ident.param->lo; v <= ident.param->hi; ++v) tasks.push_back({&ident, v});
    } else {
      tasks.push_back({&ident, std::nullopt});
    }
  }

  Report report;
  report.corpus = options.corpus_name;
  report.budget = budget;
  report.records.resize(tasks.size());
  SideCache cache;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      report.records[i] = check_impl(*tasks[i].identity, tasks[i].param, budget, &cache);
    }
  };
  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(tasks.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (const Record& r : report.records) {
    if (r.verdict.kind == Verdict::Kind::inconclusive) {
      ++report.summary.inconclusive;
    } else if (r.matched) {
      ++report.summary.matched;
    } else {
      ++report.summary.mismatched;
    }
  }
  return report;
}

}  // namespace idv::engine
