#include "idv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "idv/engine.hpp"
#include "idv/exactseq.hpp"

namespace idv::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts plain integers and integer-valued scientific notation ("1e7").
std::uint64_t parse_count(const std::string& flag, const std::string& text) {
  try {
    std::size_t used = 0;
    if (text.find_first_of("eE.") != std::string::npos) {
      const double v = std::stod(text, &used);
      if (used == text.size() && v >= 1 && v <= 9.0e15 && v == std::floor(v)) return static_cast<std::uint64_t>(v);
    } else if (!text.empty() && text[0] != '-') {
      const unsigned long long v = std::stoull(text, &used);
      if (used == text.size() && v >= 1) return v;
    }
  } catch (const std::exception&) {
  }
  throw UsageError(flag + ": expected a positive integer, got '" + text + "'");
}

struct Options {
  long digits = 30;
  std::string max_terms = "1e7";
  std::string prime_limit = "1e6";
  std::string mode = "rigorous";
  std::string format = "text";
  std::string only;
  bool timings = false;
  std::string target;  // corpus path or expression
  std::vector<std::string> params;
  int euler = -1;
  int bernoulli = -1;
};

void add_budget_flags(CLI::App* sub, Options& o) {
  sub->add_option("--digits", o.digits, "Decimal digits requested")->capture_default_str();
  sub->add_option("--max-terms", o.max_terms, "Cap on terms or pairs of each infinite sum or product")
      ->capture_default_str();
  sub->add_option("--prime-limit", o.prime_limit, "Cap on the primes of each Euler product")->capture_default_str();
  sub->add_option("--mode", o.mode, "rigorous or heuristic")
      ->check(CLI::IsMember({"rigorous", "heuristic"}))
      ->capture_default_str();
  sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

engine::EvalBudget budget_of(const Options& o) {
  engine::EvalBudget b;
  b.digits = o.digits;
  b.max_terms = parse_count("--max-terms", o.max_terms);
  b.prime_limit = parse_count("--prime-limit", o.prime_limit);
  b.mode = o.mode == "heuristic" ? engine::Mode::heuristic : engine::Mode::rigorous;
  try {
    engine::check_budget(b);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return b;
}

int run_check(const Options& o, std::ostream& out, std::ostream& err) {
  std::ifstream in(o.target, std::ios::binary);
  if (!in) {
    err << "idv: cannot read '" << o.target << "'\n";
    return usage_error;
  }
  std::ostringstream text;
  text << in.rdbuf();
  dsl::Corpus corpus;
  try {
    corpus = dsl::parse(text.str());
  } catch (const dsl::ParseError& e) {
    err << o.target << ":" << e.what() << "\n";
    return usage_error;
  }
  if (!o.only.empty()) {
    std::erase_if(corpus.identities, [&](const dsl::Identity& i) { return i.id != o.only; });
    if (corpus.identities.empty()) {
      err << "idv: no identity '" << o.only << "' in '" << o.target << "'\n";
      return usage_error;
    }
  }
  const engine::Report report = engine::run(corpus, budget_of(o), {o.target, 0});
  out << (o.format == "json" ? engine::to_json(report, o.timings) : engine::to_text(report, o.timings));
  if (report.summary.mismatched > 0) return mismatch;
  if (report.summary.inconclusive > 0) return inconclusive;
  return all_matched;
}

int run_eval(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names;
  std::vector<dsl::Param> ranges;
  dsl::Bindings env;
  for (const std::string& p : o.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param: expected NAME=VALUE, got '" + p + "'");
    const std::string name = p.substr(0, eq);
    long value = 0;
    try {
      std::size_t used = 0;
      value = std::stol(p.substr(eq + 1), &used);
      if (used != p.size() - eq - 1) throw std::invalid_argument(p);
    } catch (const std::exception&) {
      throw UsageError("--param: '" + p.substr(eq + 1) + "' is not an integer");
    }
    if (env.count(name) != 0) throw UsageError("--param: '" + name + "' given twice");
    names.push_back(name);
    ranges.push_back({name, value, value});
    env[name] = value;
  }
  const engine::EvalBudget budget = budget_of(o);
  dsl::ExprPtr expr;
  try {
    expr = dsl::parse_expression(o.target, names, ranges);
  } catch (const dsl::ParseError& e) {
    err << e.what() << "\n";
    return usage_error;
  }
  engine::Enclosure enc;
  try {
    enc = engine::evaluate(*expr, env, budget);
  } catch (const std::exception& e) {
    err << "idv: evaluation failed: " << e.what() << "\n";
    return inconclusive;
  }
  const int shown = static_cast<int>(std::max(budget.digits, 8L));
  if (o.format == "json") {
    nlohmann::ordered_json j{{"expr", dsl::print(*expr)},
                     {"mid", enc.value.mid_string(shown)},
                     {"rad", enc.value.rad_string()},
                     {"terms_used", enc.terms_used},
                     {"prime_limit", enc.prime_limit_used},
                     {"rigorous", enc.rigorous}};
    out << j.dump(2) << "\n";
  } else {
    out << enc.value.mid_string(shown) << " +/- " << enc.value.rad_string() << "\n";
  }
  if (!enc.rigorous) err << "idv: heuristic truncation, not rigorous\n";
  for (const engine::TailLimit& t : enc.limits) err << "idv: " << t.technique << " capped at " << t.cap << "\n";
  return all_matched;
}

int run_constants(const Options& o, std::ostream& out) {
  if (o.euler < 0 && o.bernoulli < 0) throw UsageError("constants: give --euler N and/or --bernoulli M");
  if (o.euler >= 0) {
    const auto values = exactseq::euler_numbers(o.euler / 2);
    for (std::size_t i = 0; i < values.size(); ++i) out << "E_" << 2 * i << " = " << values[i].get_str() << "\n";
  }
  for (int m = 1; m <= o.bernoulli; ++m) out << "B_" << m << " = " << exactseq::bernoulli_hist(m).get_str() << "\n";
  return all_matched;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rigorous numerical checking of identities between series, products and constants", "idv"};
  app.require_subcommand(1);
  Options o;

  CLI::App* check = app.add_subcommand("check", "Check every identity of a corpus file");
  check->add_option("corpus", o.target, "Corpus file")->required();
  add_budget_flags(check, o);
  check->add_option("--only", o.only, "Check only the identity with this id");
  check->add_flag("--timings", o.timings, "Include per-record wall times");

  CLI::App* eval = app.add_subcommand("eval", "Print an enclosure of one expression");
  eval->add_option("expr", o.target, "Expression")->required();
  add_budget_flags(eval, o);
  eval->add_option("--param", o.params, "Bind a variable, NAME=VALUE (repeatable)");

  CLI::App* constants = app.add_subcommand("constants", "Print exact Euler or historical Bernoulli numbers");
  constants->add_option("--euler", o.euler, "Euler numbers E_0, E_2, ..., E_N")->check(CLI::Range(0, 20000));
  constants->add_option("--bernoulli", o.bernoulli, "Historical Bernoulli numbers B_1 .. B_M")
      ->check(CLI::Range(1, 10000));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? all_matched : usage_error;
  }

  try {
    if (check->parsed()) return run_check(o, out, err);
    if (eval->parsed()) return run_eval(o, out, err);
    return run_constants(o, out);
  } catch (const UsageError& e) {
    err << "idv: " << e.what() << "\n";
    return usage_error;
  } catch (const std::exception& e) {
    err << "idv: " << e.what() << "\n";
    return usage_error;
  }
}

}  // namespace idv::cli
