#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace stein::cli {

// Parsed command line: a subcommand plus key=value parameters.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
};

// argv -> RunConfig; throws usage_error on malformed input.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
RunConfig parse_args(int argc, const char* const* argv);

// Executes one command, writing the report (CSV or JSON per the format
// parameter) to `out`.  Returns 0 on success, 1 when a verification
// fails or a numeric operation reports an error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

void print_synopsis(std::ostream& os);

// parse + run + synopsis-on-usage-error; the program main.
int main_impl(int argc, const char* const* argv);

}  // namespace stein::cli
