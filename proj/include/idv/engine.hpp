#ifndef IDV_ENGINE_HPP
#define IDV_ENGINE_HPP

// Evaluates identity sides as rigorous enclosures and turns pairs of
// enclosures into verdicts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idv/dsl.hpp"
#include "idv/mpball/ball.hpp"

namespace idv::engine {

enum class Mode { rigorous, heuristic };

std::string to_string(Mode m);

struct EvalBudget {
  long digits = 30;
  std::uint64_t max_terms = 10'000'000;
  std::uint64_t prime_limit = 1'000'000;
  Mode mode = Mode::rigorous;
};

/// Throws std::invalid_argument unless digits >= 4 and both caps are positive.
void check_budget(const EvalBudget& budget);

/// Working precision for a digit request; at least 8 digits.
Precision working_precision(long digits);

/// An infinite bigop whose cap stopped it short of the requested accuracy.
struct TailLimit {
  std::string technique;  // e.g. "prime tail bound"
  std::string cap;        // e.g. "prime_limit 1000000"
  BallReal tail;
};

struct Enclosure {
  BallReal value;
  std::uint64_t terms_used = 0;        // largest term/pair/prime count of any infinite node
  std::uint64_t prime_limit_used = 0;  // largest prime bound of any odd-prime node
  bool rigorous = true;                // false once a heuristic truncation was used
  std::vector<TailLimit> limits;
  std::optional<mpq_class> exact;      // set when the whole expression reduced to a rational
};

/// Raised in rigorous mode for an infinite bigop of unrecognized shape.
class UnsupportedShape : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enclosure of `expr` with the variables in `env` bound, at the precision
/// `budget.digits` (raised to 8 if lower).
Enclosure evaluate(const dsl::Expr& expr, const dsl::Bindings& env, const EvalBudget& budget);

struct Verdict {
  enum class Kind { confirmed, refuted, inconclusive };
  Kind kind = Kind::inconclusive;
  int digits_matched = 0;   // confirmed
  std::string gap;          // refuted: certified lower bound on the separation
  std::string reason;       // inconclusive cause, or a note on a capped side
};

std::string to_string(Verdict::Kind k);

struct Record {
  std::string id;
  std::optional<long> param;
  Verdict verdict;
  bool has_values = false;
  BallReal lhs;
  BallReal rhs;
  std::uint64_t terms_used = 0;
  std::uint64_t prime_limit_used = 0;
  double ms = 0.0;
  bool matched = false;
};

/// Verdict for one identity at one parameter value (ignored when the
/// identity has no parameter).  Evaluation errors become Inconclusive.
Record check(const dsl::Identity& identity, std::optional<long> param, const EvalBudget& budget);

struct Summary {
  int matched = 0;
  int mismatched = 0;
  int inconclusive = 0;
};

struct Report {
  std::string corpus;
  EvalBudget budget;
  std::vector<Record> records;
  Summary summary;
};

struct RunOptions {
  std::string corpus_name;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Verdicts for every identity and parameter value, in corpus order with
/// ascending parameters regardless of scheduling.
Report run(const dsl::Corpus& corpus, const EvalBudget& budget, const RunOptions& options = {});

std::string to_json(const Report& report, bool timings);
std::string to_text(const Report& report, bool timings);

/// Largest d with x <= 10^-d, or `cap` if x is zero.
int digits_below(const mpq_class& x, int cap);

}  // namespace idv::engine

#endif  // IDV_ENGINE_HPP
