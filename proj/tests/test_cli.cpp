#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stein/cli.hpp"

using namespace stein;

namespace {

cli::RunConfig make_config(std::initializer_list<const char*> args) {
  std::vector<const char*> argv = {"steinpairs"};
  argv.insert(argv.end(), args.begin(), args.end());
  return cli::parse_args(static_cast<int>(argv.size()), argv.data());
}

struct RunResult {
  int rc;
  std::string out;
  std::string err;
};

RunResult run_config(const cli::RunConfig& cfg) {
  std::ostringstream out, err;
  const int rc = cli::run(cfg, out, err);
  return {rc, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

TEST_CASE("parse_args: defaults and validation") {
  const cli::RunConfig cfg = make_config({"polya-pmf", "r=1", "w=1", "c=1", "n=2"});
  CHECK(cfg.command == "polya-pmf");
  CHECK(cfg.params.at("seed") == "42");
  CHECK(cfg.params.at("format") == "csv");
  CHECK_THROWS_AS(make_config({"polya-pmf", "r"}), cli::usage_error);
  CHECK_THROWS_AS(make_config({"polya-pmf", "format=xml"}), cli::usage_error);
  CHECK_THROWS_AS(cli::parse_args(1, nullptr), cli::usage_error);
}

TEST_CASE("run: unknown command and missing keys give usage errors") {
  CHECK_THROWS_AS(run_config(make_config({"frobnicate"})), cli::usage_error);
  CHECK_THROWS_AS(run_config(make_config({"polya-pmf", "r=1"})), cli::usage_error);
}

TEST_CASE("polya-pmf: exact fractions in CSV") {
  const RunResult r = run_config(make_config({"polya-pmf", "r=1", "w=1", "c=1", "n=2"}));
  CHECK(r.rc == 0);
  const auto lines = split(r.out, '\n');
  REQUIRE(lines.size() >= 4);
  CHECK(lines[0] == "k,prob,prob_double,log_prob");
  CHECK(split(lines[1], ',')[1] == "1/3");
  CHECK(split(lines[2], ',')[1] == "1/3");
  CHECK(split(lines[3], ',')[1] == "1/3");
}

TEST_CASE("byte-identical output for identical configs") {
  const cli::RunConfig cfg =
      make_config({"polya-rate", "r=1", "w=1", "c=1", "nmin=8", "nmax=64", "grid=256"});
  const RunResult a = run_config(cfg);
  const RunResult b = run_config(cfg);
  CHECK(a.rc == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("polya-verify: clean exit on the oracle suite") {
  const RunResult r = run_config(make_config({"polya-verify", "r=2", "w=3", "c=2", "n=6"}));
  CHECK(r.rc == 0);
  for (const auto& line : split(r.out, '\n'))
    if (!line.empty() && line.find("check") == std::string::npos)
      CHECK(line.back() == '0');  // failure column
}

TEST_CASE("beta-constants: uniform boundary diagnostics are 0.5") {
  const RunResult r =
      run_config(make_config({"beta-constants", "alpha=0", "beta=0", "grid=512"}));
  CHECK(r.rc == 0);
  const auto lines = split(r.out, '\n');
  const auto header = split(lines[0], ',');
  const auto vals = split(lines[1], ',');
  REQUIRE(header.size() == vals.size());
  double s_minus = 0, s_plus = 0;
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "S_at_minus1") s_minus = std::stod(vals[i]);
    if (header[i] == "S_at_plus1") s_plus = std::stod(vals[i]);
  }
  CHECK(s_minus == 0.5);
  CHECK(s_plus == 0.5);
}

TEST_CASE("polya-rate: pinned schema and slope near -1") {
  const RunResult r = run_config(
      make_config({"polya-rate", "r=1", "w=1", "c=1", "nmin=16", "nmax=256",
                   "test-fn=x2", "grid=256"}));
  CHECK(r.rc == 0);
  const auto lines = split(r.out, '\n');
  CHECK(lines[0] == "n,exact_error,bound,lambda,eta_discrepancy,third_term,slope_running");
  const auto last = split(lines[lines.size() - 2], ',');
  const double slope = std::stod(last.back());
  CHECK(slope > -1.1);
  CHECK(slope < -0.9);
}

TEST_CASE("solve: emits a table of solution values") {
  const RunResult r = run_config(
      make_config({"solve", "a=2", "b=3", "test-fn=x2", "grid=9"}));
  CHECK(r.rc == 0);
  const auto lines = split(r.out, '\n');
  CHECK(lines[0] == "x,g,g_deriv");
  CHECK(lines.size() >= 10);
}

TEST_CASE("stein-check: exit 0 clean, exit 1 under a tilt") {
  CHECK(run_config(make_config({"stein-check", "alpha=1", "beta=2"})).rc == 0);
  CHECK(run_config(make_config({"stein-check", "alpha=1", "beta=2", "tilt=0.1"})).rc == 1);
}

TEST_CASE("distances: single row") {
  const RunResult r = run_config(make_config({"distances", "r=1", "w=1", "c=1", "n=1"}));
  CHECK(r.rc == 0);
  const auto vals = split(split(r.out, '\n')[1], ',');
  CHECK(std::stod(vals[1]) == doctest::Approx(0.5));
  CHECK(std::stod(vals[2]) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("json format carries meta and rows") {
  const RunResult r = run_config(
      make_config({"polya-pmf", "r=1", "w=1", "c=1", "n=2", "format=json"}));
  CHECK(r.rc == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("meta").at("command") == "polya-pmf");
  CHECK(doc.at("meta").at("seed") == "42");
  CHECK(doc.at("rows").size() == 3);
  CHECK(doc.at("rows")[0].at("prob") == "1/3");
}

TEST_CASE("out= writes the report to a file") {
  const std::string path = "cli_test_output.csv";
  std::remove(path.c_str());
  const RunResult r = run_config(
      make_config({"polya-pmf", "r=1", "w=1", "c=1", "n=1", ("out=" + path).c_str()}));
  CHECK(r.rc == 0);
  CHECK(r.out.empty());
  std::ifstream file(path);
  REQUIRE(file.good());
  std::string header;
  std::getline(file, header);
  CHECK(header == "k,prob,prob_double,log_prob");
  file.close();
  std::remove(path.c_str());
}

TEST_CASE("STEIN_THREADS does not change the report") {
  const cli::RunConfig cfg =
      make_config({"polya-rate", "r=2", "w=1", "c=1", "nmin=8", "nmax=64", "grid=256"});
  const RunResult parallel = run_config(cfg);
  setenv("STEIN_THREADS", "1", 1);
  const RunResult serial = run_config(cfg);
  unsetenv("STEIN_THREADS");
  CHECK(parallel.rc == 0);
  CHECK(parallel.out == serial.out);
}

TEST_CASE("main_impl: usage errors exit with 2") {
  const char* argv_bad[] = {"steinpairs", "nope"};
  CHECK(cli::main_impl(2, argv_bad) == 2);
}
