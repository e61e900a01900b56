#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "idv/engine.hpp"

namespace idv::engine {

namespace {

int shown_digits(const Report& report) { return static_cast<int>(std::max(report.budget.digits, 8L)); }

nlohmann::ordered_json ball_json(const BallReal& b, int digits) {
  return {{"mid", b.mid_string(digits)}, {"rad", b.rad_string()}};
}

}  // namespace

std::string to_json(const Report& report, bool timings) {
  using json = nlohmann::ordered_json;
  const int digits = shown_digits(report);
  json results = json::array();
  for (const Record& r : report.records) {
    json j;
    j["id"] = r.id;
    j["param"] = r.param ? json(*r.param) : json(nullptr);
    j["verdict"] = to_string(r.verdict.kind);
    j["digits_matched"] =
        r.verdict.kind == Verdict::Kind::confirmed ? json(r.verdict.digits_matched) : json(nullptr);
    j["gap"] = r.verdict.kind == Verdict::Kind::refuted ? json(r.verdict.gap) : json(nullptr);
    j["lhs"] = r.has_values ? ball_json(r.lhs, digits) : json(nullptr);
    j["rhs"] = r.has_values ? ball_json(r.rhs, digits) : json(nullptr);
    j["terms_used"] = r.terms_used;
    j["prime_limit"] = r.prime_limit_used;
    if (timings) j["ms"] = r.ms;
    if (!r.verdict.reason.empty()) j["reason"] = r.verdict.reason;
    results.push_back(std::move(j));
  }
  json out;
  out["corpus"] = report.corpus;
  out["digits_requested"] = report.budget.digits;
  out["mode"] = to_string(report.budget.mode);
  out["results"] = std::move(results);
  out["summary"] = {{"matched", report.summary.matched},
                    {"mismatched", report.summary.mismatched},
                    {"inconclusive", report.summary.inconclusive}};
  return out.dump(2) + "\n";
}

std::string to_text(const Report& report, bool timings) {
  std::ostringstream os;
  // Pads to the column width, keeping at least two spaces before the next column.
  auto cell = [&os](const std::string& text, std::size_t width) {
    os << text << std::string(text.size() + 2 > width ? 2 : width - text.size(), ' ');
  };
  cell("id", 20), cell("param", 7), cell("verdict", 14), cell("digits/gap", 16), cell("lhs", 24), cell("rhs", 24),
      cell("terms", 10);
  os << "primes";
  if (timings) os << "  ms";
  os << "\n";
  for (const Record& r : report.records) {
    std::string detail = "-";
    if (r.verdict.kind == Verdict::Kind::confirmed) detail = std::to_string(r.verdict.digits_matched) + " digits";
    if (r.verdict.kind == Verdict::Kind::refuted) detail = "gap>=" + r.verdict.gap;
    cell(r.id, 20);
    cell(r.param ? std::to_string(*r.param) : "-", 7);
    cell(to_string(r.verdict.kind), 14);
    cell(detail, 16);
    cell(r.has_values ? r.lhs.mid_string(16) : "-", 24);
    cell(r.has_values ? r.rhs.mid_string(16) : "-", 24);
    cell(std::to_string(r.terms_used), 10);
    os << r.prime_limit_used;
    if (timings) os << "  " << std::fixed << std::setprecision(1) << r.ms << std::defaultfloat;
    os << "\n";
    if (!r.verdict.reason.empty()) os << "    note: " << r.verdict.reason << "\n";
  }
  os << "summary: " << report.summary.matched << " matched, " << report.summary.mismatched << " mismatched, "
     << report.summary.inconclusive << " inconclusive\n";
  return os.str();
}

}  // namespace idv::engine
