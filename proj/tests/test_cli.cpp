#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "idv/cli.hpp"

namespace {

const std::string source_dir = IDV_SOURCE_DIR;
const std::string corpus = source_dir + "/corpus/dilcher_vignat.idn";

std::string data(const std::string& name) { return source_dir + "/tests/data/" + name; }

struct Run {
  int code;
  std::string out, err;
};

Run idv_main(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = idv::cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("constants") {
  const Run e = idv_main({"constants", "--euler", "8"});
  CHECK(e.code == 0);
  CHECK(e.out == "E_0 = 1\nE_2 = -1\nE_4 = 5\nE_6 = -61\nE_8 = 1385\n");
  const Run b = idv_main({"constants", "--bernoulli", "5"});
  CHECK(b.code == 0);
  CHECK(b.out == "B_1 = 1/6\nB_2 = 1/30\nB_3 = 1/42\nB_4 = 1/30\nB_5 = 5/66\n");
  CHECK(idv_main({"constants"}).code == 3);
  CHECK(idv_main({"constants", "--euler", "-1"}).code == 3);
}

TEST_CASE("eval") {
  const Run r = idv_main({"eval", "pi*sqrt(2)/4", "--digits", "50"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("1.1107207345", 0) == 0);
  const auto j = nlohmann::json::parse(idv_main({"eval", "pi*sqrt(2)/4", "--digits", "50", "--format", "json"}).out);
  CHECK(j["mid"].get<std::string>().rfind("1.11072073453959156175397024751517342465365542234", 0) == 0);
  CHECK(std::stod(j["rad"].get<std::string>()) <= 1e-50);
  CHECK(j["rigorous"] == true);

  CHECK(idv_main({"eval", "euler(2*n)", "--param", "n=2"}).out == "5 +/- 0.00e+00\n");
  CHECK(idv_main({"eval", "n + 1"}).code == 3);
  CHECK(idv_main({"eval", "n", "--param", "n"}).code == 3);
  CHECK(idv_main({"eval", "1 +"}).code == 3);

  const Run unsupported = idv_main({"eval", "prod(k, 1..inf, 1 + 1/k^2)"});
  CHECK(unsupported.code == 2);
  CHECK(unsupported.err.find("no rigorous tail bound") != std::string::npos);
  const Run heuristic = idv_main({"eval", "prod(k, 1..inf, 1 + 1/k^4)", "--mode", "heuristic", "--digits", "8"});
  CHECK(heuristic.code == 0);
  CHECK(heuristic.out.rfind("2.1673606", 0) == 0);
  CHECK(heuristic.err.find("not rigorous") != std::string::npos);
}

TEST_CASE("check: exit codes") {
  const Run only = idv_main({"check", corpus, "--only", "eq7", "--format", "json"});
  CHECK(only.code == 0);
  const auto j = nlohmann::json::parse(only.out);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["verdict"] == "confirmed");
  CHECK(j["results"][0]["digits_matched"].get<int>() >= 30);

  const Run mismatch = idv_main({"check", data("mismatch.idn")});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.out.find("summary: 1 matched, 1 mismatched, 0 inconclusive") != std::string::npos);

  const Run inconclusive = idv_main({"check", data("inconclusive.idn")});
  CHECK(inconclusive.code == 2);
  CHECK(inconclusive.out.find("summary: 1 matched, 0 mismatched, 1 inconclusive") != std::string::npos);

  const Run broken = idv_main({"check", data("broken.idn")});
  CHECK(broken.code == 3);
  CHECK(broken.out.empty());
  CHECK(broken.err == data("broken.idn") + ":5:42: expected ')' (at ';')\n");
}

TEST_CASE("check: usage errors") {
  CHECK(idv_main({}).code == 3);
  CHECK(idv_main({"check"}).code == 3);
  CHECK(idv_main({"check", data("missing.idn")}).code == 3);
  CHECK(idv_main({"check", corpus, "--digits", "3"}).code == 3);
  CHECK(idv_main({"check", corpus, "--max-terms", "0"}).code == 3);
  CHECK(idv_main({"check", corpus, "--max-terms", "1.5"}).code == 3);
  CHECK(idv_main({"check", corpus, "--prime-limit", "lots"}).code == 3);
  CHECK(idv_main({"check", corpus, "--mode", "sloppy"}).code == 3);
  CHECK(idv_main({"check", corpus, "--format", "xml"}).code == 3);
  CHECK(idv_main({"check", corpus, "--only", "eq99"}).code == 3);
  CHECK(idv_main({"check", corpus, "--bogus"}).code == 3);
  CHECK(idv_main({"--help"}).code == 0);
}

TEST_CASE("check: scientific counts") {
  const Run a = idv_main({"check", corpus, "--only", "eq4_primes", "--prime-limit", "1e4", "--format", "json"});
  const Run b = idv_main({"check", corpus, "--only", "eq4_primes", "--prime-limit", "10000", "--format", "json"});
  CHECK(a.out == b.out);
  CHECK(a.code == 2);
}

TEST_CASE("check: shipped corpus") {
  const Run r = idv_main({"check", corpus, "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["summary"]["mismatched"] == 0);
  CHECK(j["summary"]["inconclusive"] == 0);
  for (const auto& rec : j["results"]) {
    const std::string id = rec["id"];
    CAPTURE(id);
    const bool refuted = id == "eq2" || id == "eq3" || id == "eq11_as_printed";
    CHECK(rec["verdict"] == (refuted ? "refuted" : "confirmed"));
  }
}

TEST_CASE("property: repeated runs are byte-identical") {
  for (const char* format : {"text", "json"}) {
    const std::vector<std::string> args{"check", corpus, "--only", "eq3", "--format", format, "--max-terms", "1e5"};
    const Run first = idv_main(args);
    CHECK(idv_main(args).out == first.out);
    CHECK(idv_main(args).out == first.out);
  }
}

TEST_CASE("binary end to end") {
  const std::string idv = IDV_BINARY;
  CHECK(shell(idv + " constants --euler 8 > /dev/null") == 0);
  CHECK(shell(idv + " check " + corpus + " --only eq7 > /dev/null") == 0);
  CHECK(shell(idv + " check " + data("mismatch.idn") + " > /dev/null") == 1);
  CHECK(shell(idv + " check " + data("inconclusive.idn") + " > /dev/null") == 2);
  CHECK(shell(idv + " check " + data("broken.idn") + " 2> /dev/null") == 3);
}
