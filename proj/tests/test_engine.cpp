#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "json.hpp"

#include "idv/analytic.hpp"
#include "idv/engine.hpp"

using namespace idv;
using namespace idv::engine;

namespace {

const Precision p30{30};

const dsl::Identity& find(const dsl::Corpus& c, const std::string& id) {
  for (const dsl::Identity& i : c.identities) {
    if (i.id == id) return i;
  }
  throw std::out_of_range(id);
}

Enclosure eval(const std::string& text, const EvalBudget& budget = {}, dsl::Bindings env = {}) {
  std::vector<std::string> names;
  for (const auto& [name, value] : env) names.push_back(name);
  return evaluate(*dsl::parse_expression(text, names), env, budget);
}

EvalBudget small_budget() {
  EvalBudget b;
  b.max_terms = 100000;
  b.prime_limit = 100000;
  return b;
}

double gap_of(const Record& r) { return std::stod(r.verdict.gap); }

}  // namespace

TEST_CASE("evaluate: corpus sides and constants") {
  const dsl::Corpus c = dsl::builtin_corpus();
  const Enclosure eq10 = evaluate(*find(c, "eq10").lhs, {}, {});
  CHECK(eq10.value.mid_string(8) == "1.1107207");
  CHECK(overlaps(eq10.value, const_pi(p30) * sqrt(BallReal::from_integer(2, p30)) / 4));
  CHECK(eq10.terms_used == 10000000);
  REQUIRE(eq10.limits.size() == 1);
  CHECK(eq10.limits[0].technique == "paired product tail bound");

  const Enclosure quarter = eval("pi/4");
  CHECK(quarter.value.rad().to_rational() <= mpq_class(1, mpz_class("1000000000000000000000000000000")));
  CHECK(overlaps(quarter.value, const_pi(p30) / 4));

  const Enclosure eq2 = evaluate(*find(c, "eq2").rhs, {{"n", 0}}, {});
  CHECK(overlaps(eq2.value, const_pi(p30) / 4));
}

TEST_CASE("evaluate: exact subtrees stay exact") {
  const Enclosure e = eval("euler(2*n)/(2*n)! + bernoulli_hist(n + 1) + (-1)^n*2^-n", {}, {{"n", 3}});
  REQUIRE(e.exact);
  CHECK(*e.exact == mpq_class(-61, 720) + mpq_class(1, 30) - mpq_class(1, 8));
  CHECK(e.value.contains(mpq_class(-61, 720) + mpq_class(1, 30) - mpq_class(1, 8)));
  CHECK(eval("sum(k, 1..10, 1/k)").value.contains(mpq_class(7381, 2520)));
  CHECK(eval("prod(k, 2..5, 1 - 1/k^2)").value.contains(mpq_class(3, 5)));
}

TEST_CASE("evaluate: recognized sums") {
  const BallReal pi = const_pi(p30);
  CHECK(overlaps(eval("sum(k, 1..inf, (-1)^(k + 1)/k)").value, log(BallReal::from_integer(2, p30))));
  CHECK(overlaps(eval("sum(k, 1..inf, 1/(2*k - 1)^2)").value, sqr(pi) / 8));
  CHECK(overlaps(eval("sum(k, 0..inf, 3*(-1)^k/(4*k + 2)^3)").value, analytic::beta_closed(3, p30) * 3 / 8));
  CHECK(overlaps(eval("sum(k, 1..inf, k^-4)*90").value, pow(pi, 4)));
  CHECK(overlaps(eval("-sum(j, 0..inf, (-1)^j*(-2*j - 1)^-3)").value, analytic::beta_closed(3, p30)));
  CHECK(overlaps(eval("sum(k, 0..inf, (-1)^k/(2*k + 1)^(2*n + 1))", {}, {{"n", 1}}).value, pow(pi, 3) / 32));
  CHECK_THROWS_AS(eval("sum(k, 1..inf, 1/k)"), DomainError);
  CHECK_THROWS_AS(eval("sum(k, 0..inf, 1/k^2)"), DomainError);
}

TEST_CASE("evaluate: recognized products") {
  const BallReal pi = const_pi(p30);
  CHECK(overlaps(eval("prod(p, odd_primes, p^2/(p^2 - 1))").value, sqr(pi) / 8));
  CHECK(overlaps(eval("prod(p, odd_primes, 1/(1 - 1/p^2))").value, sqr(pi) / 8));
  CHECK(overlaps(eval("1/prod(p, odd_primes, 1 - chi4(p)/p^3)").value, analytic::beta_closed(3, p30)));
  CHECK(overlaps(eval("prod(k, 1..inf, (2*k + 1 - (-1)^k)/(2*k + 1))").value,
                 pi * sqrt(BallReal::from_integer(2, p30)) / 4));
  CHECK(overlaps(eval("prod(k, 1..inf, 1 + (-1)^(k + 1)*(2*k + 1)^-3)").value, analytic::odd_product_closed(3, p30)));
  CHECK_THROWS_AS(eval("prod(p, odd_primes, 1 - chi4(p)/p)"), UnsupportedShape);
}

TEST_CASE("evaluate: unrecognized shapes") {
  CHECK_THROWS_AS(eval("prod(k, 1..inf, 1 + 1/k^2)"), UnsupportedShape);
  CHECK_THROWS_AS(eval("sum(k, 0..inf, 1/k!)"), UnsupportedShape);
  EvalBudget h;
  h.mode = Mode::heuristic;
  const Enclosure e = eval("sum(k, 0..inf, 1/k!)", h);
  CHECK_FALSE(e.rigorous);
  CHECK(overlaps(e.value, exp(BallReal::from_integer(1, p30))));
  h.digits = 8;
  const Enclosure s = eval("prod(k, 1..inf, 1 + 1/k^4)", h);
  CHECK_FALSE(s.rigorous);
  CHECK(s.value.mid_string(8) == "2.1673606");
}

TEST_CASE("property: heuristic mode lies inside the rigorous enclosure") {
  EvalBudget h = small_budget();
  h.mode = Mode::heuristic;
  const dsl::Corpus c = dsl::builtin_corpus();
  for (const dsl::Identity& id : c.identities) {
    const long v = id.param ? id.param->lo : 0;
    dsl::Bindings env;
    if (id.param) env[id.param->name] = v;
    for (const dsl::ExprPtr& side : {id.lhs, id.rhs}) {
      const Enclosure rigorous = evaluate(*side, env, small_budget());
      const Enclosure heuristic = evaluate(*side, env, h);
      CAPTURE(id.id);
      CHECK(rigorous.value.contains(heuristic.value));
    }
  }
}

TEST_CASE("budget checks") {
  EvalBudget b;
  b.digits = 3;
  CHECK_THROWS_AS(check_budget(b), std::invalid_argument);
  b.digits = 4;
  CHECK_NOTHROW(check_budget(b));
  CHECK(working_precision(4).digits() == 8);
  b.max_terms = 0;
  CHECK_THROWS_AS(check_budget(b), std::invalid_argument);
}

TEST_CASE("digits_below") {
  CHECK(digits_below(0, 17) == 17);
  CHECK(digits_below(mpq_class(1, 100000), 30) == 5);
  CHECK(digits_below(mpq_class(100001, 10000000000), 30) == 4);
  CHECK(digits_below(mpq_class(1, 2), 30) == 0);
  CHECK(digits_below(2, 30) == -1);
  CHECK(digits_below(mpq_class(1, mpz_class("1" + std::string(60, '0'))), 40) == 40);
}

TEST_CASE("verdicts: eq2, eq3 and eq7") {
  const dsl::Corpus c = dsl::builtin_corpus();
  const Record eq2 = check(find(c, "eq2"), 0, {});
  CHECK(eq2.verdict.kind == Verdict::Kind::refuted);
  CHECK(gap_of(eq2) >= 0.3);
  CHECK(eq2.matched);

  const Record eq7 = check(find(c, "eq7"), std::nullopt, {});
  CHECK(eq7.verdict.kind == Verdict::Kind::confirmed);
  CHECK(eq7.verdict.digits_matched >= 30);

  const Record eq3 = check(find(c, "eq3"), 1, {});
  CHECK(eq3.verdict.kind == Verdict::Kind::refuted);
  CHECK(gap_of(eq3) >= 0.05);
  CHECK(gap_of(eq3) <= 0.066);
}

TEST_CASE("verdicts: capped tails are named") {
  const dsl::Corpus c = dsl::builtin_corpus();
  EvalBudget b;
  b.prime_limit = 10000;
  const Record r = check(find(c, "eq4_primes"), 1, b);
  CHECK(r.verdict.kind == Verdict::Kind::inconclusive);
  CHECK(r.verdict.reason == "prime tail bound limits rhs to 8 digits at prime_limit 10000; 10 needed");
  CHECK(r.prime_limit_used == 10000);
}

TEST_CASE("verdicts: unsupported shapes and evaluation errors are inconclusive") {
  const dsl::Corpus c = dsl::parse(
      "identity \"a\" { lhs = prod(k, 1..inf, 1 + 1/k^2); rhs = 1; expect = true; }\n"
      "identity \"b\" { lhs = sum(k, 1..inf, 1/k); rhs = 1; expect = false; }\n"
      "identity \"c\" { lhs = sqrt(1 - 2); rhs = 1; expect = false; }\n");
  for (const dsl::Identity& id : c.identities) {
    const Record r = check(id, std::nullopt, small_budget());
    CAPTURE(id.id);
    CHECK(r.verdict.kind == Verdict::Kind::inconclusive);
    CHECK_FALSE(r.verdict.reason.empty());
    CHECK_FALSE(r.matched);
  }
  EvalBudget h = small_budget();
  h.mode = Mode::heuristic;
  const Record r = check(c.identities[0], std::nullopt, h);
  CHECK(r.verdict.kind == Verdict::Kind::refuted);
  CHECK(r.verdict.reason == "heuristic truncation, not rigorous");
}

TEST_CASE("property: refutations survive doubled precision") {
  const dsl::Corpus c = dsl::builtin_corpus();
  const EvalBudget b = small_budget();
  for (const dsl::Identity& id : c.identities) {
    std::vector<std::optional<long>> params{std::nullopt};
    if (id.param) {
      params.clear();
      for (long v = id.param->lo; v <= id.param->hi; ++v) params.push_back(v);
    }
    for (const auto& p : params) {
      const Record r = check(id, p, b);
      if (r.verdict.kind != Verdict::Kind::refuted) continue;
      dsl::Bindings env;
      if (p) env[id.param->name] = *p;
      EvalBudget twice = b;
      twice.digits *= 2;
      CAPTURE(id.id);
      CHECK_FALSE(overlaps(evaluate(*id.lhs, env, twice).value, evaluate(*id.rhs, env, twice).value));
    }
  }
}

TEST_CASE("property: confirmed digits are monotone in the budget") {
  const dsl::Corpus c = dsl::builtin_corpus();
  for (const char* id : {"eq8", "eq4_primes", "eq6"}) {
    int prev = -1;
    for (std::uint64_t limit : {1000u, 10000u, 100000u}) {
      EvalBudget b = small_budget();
      b.prime_limit = limit;
      const Record r = check(find(c, id), 1, b);
      CAPTURE(id);
      CAPTURE(limit);
      CHECK(r.verdict.kind != Verdict::Kind::refuted);
      if (r.verdict.kind == Verdict::Kind::confirmed) {
        CHECK(r.verdict.digits_matched >= prev);
        prev = r.verdict.digits_matched;
      }
    }
  }
}

TEST_CASE("run: builtin corpus matches every expectation") {
  const Report r = run(dsl::builtin_corpus(), {}, {"builtin", 0});
  CHECK(r.records.size() == 28);
  CHECK(r.summary.matched == 28);
  CHECK(r.summary.mismatched == 0);
  CHECK(r.summary.inconclusive == 0);
  for (const Record& rec : r.records) {
    CAPTURE(rec.id);
    CHECK(rec.matched);
  }
}

TEST_CASE("run: empty corpus") {
  const Report r = run(dsl::Corpus{}, {}, {"empty", 0});
  CHECK(r.records.empty());
  CHECK(r.summary.matched == 0);
  CHECK(r.summary.mismatched == 0);
  CHECK(r.summary.inconclusive == 0);
  const auto j = nlohmann::json::parse(to_json(r, false));
  CHECK(j["results"].empty());
}

TEST_CASE("property: determinism, schedule and order invariance") {
  const dsl::Corpus c = dsl::builtin_corpus();
  const EvalBudget b = small_budget();
  const std::string serial = to_json(run(c, b, {"c", 1}), false);
  CHECK(to_json(run(c, b, {"c", 1}), false) == serial);
  CHECK(to_json(run(c, b, {"c", 4}), false) == serial);

  dsl::Corpus reversed = c;
  std::reverse(reversed.identities.begin(), reversed.identities.end());
  const Report forward = run(c, b, {"c", 2});
  const Report backward = run(reversed, b, {"c", 3});
  for (const Record& rec : forward.records) {
    const auto it = std::find_if(backward.records.begin(), backward.records.end(),
                                 [&](const Record& o) { return o.id == rec.id && o.param == rec.param; });
    REQUIRE(it != backward.records.end());
    CHECK(it->verdict.kind == rec.verdict.kind);
    CHECK(it->verdict.digits_matched == rec.verdict.digits_matched);
    CHECK(it->verdict.gap == rec.verdict.gap);
  }
}

TEST_CASE("reports") {
  const dsl::Corpus c = dsl::parse(
      "identity \"a\" { lhs = sum(k, 0..inf, (-1)^k/(2*k + 1)^3); rhs = pi^3/32; expect = true >= 20 digits; }\n"
      "identity \"b\" { lhs = n; rhs = n + 1/10; param n in 1..2; expect = false; }\n");
  const Report r = run(c, {}, {"two.idn", 0});
  const auto j = nlohmann::ordered_json::parse(to_json(r, false));
  CHECK(j["corpus"] == "two.idn");
  CHECK(j["digits_requested"] == 30);
  CHECK(j["mode"] == "rigorous");
  REQUIRE(j["results"].size() == 3);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j["results"][0].items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"id", "param", "verdict", "digits_matched", "gap", "lhs", "rhs",
                                         "terms_used", "prime_limit", "reason"});
  CHECK(j["results"][0]["param"].is_null());
  CHECK(j["results"][0]["gap"].is_null());
  CHECK(j["results"][0]["lhs"]["mid"].get<std::string>().rfind("0.968946146259369380483", 0) == 0);
  CHECK(j["results"][1]["param"] == 1);
  CHECK(j["results"][1]["verdict"] == "refuted");
  CHECK(j["results"][1]["digits_matched"].is_null());
  CHECK(j["results"][1]["gap"] == "0.1");
  CHECK(j["summary"]["matched"] == 3);
  CHECK_FALSE(j["results"][0].contains("ms"));
  CHECK(nlohmann::json::parse(to_json(r, true))["results"][0].contains("ms"));

  const std::string text = to_text(r, false);
  CAPTURE(text);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  CHECK(text.find("    note: alternating series tail bound limits lhs to 21 digits") != std::string::npos);
  CHECK(text.find("summary: 3 matched, 0 mismatched, 0 inconclusive") != std::string::npos);
}
