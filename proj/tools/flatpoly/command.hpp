#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatpoly_cli {

// Usage errors name the offending flag; the process exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown for --help; carries the rendered help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv };

struct Command {
  std::string subcommand;  // singer flat mahler beta riesz rankone realline
  std::vector<std::uint64_t> primes;
  unsigned m = 1;
  std::vector<double> alphas;
  std::size_t grid_mult = 16;
  std::string rule;
  std::vector<std::int64_t> scales;
  bool unchecked = false;
  std::size_t stages = 0;  // 0: one stage per prime
  std::vector<double> kernel_s;
  std::int64_t truncation = 0;  // 0: default for each s
  std::string method;           // mahler: log | jensen | both
  std::string tau;              // rankone flow scale, empty when absent
  std::string x;                // riesz quasi-invariance point, empty when absent
  std::int64_t lag = -1;        // rankone correlation lag, -1 when absent
  std::size_t base_stage = 0;
  std::size_t sim_stage = 0;
  bool coefficients = false;    // riesz: emit every coefficient
  std::string plan_in;
  std::string plan_out;
  std::string output;
  Format format = Format::json;
  bool timestamp = true;

  bool operator==(const Command&) const = default;
};

Command parse(const std::vector<std::string>& args);

// Argument string that parses back to the same Command.
std::string canonical(const Command& cmd);
std::vector<std::string> canonical_args(const Command& cmd);

std::string format_double(double v);

}  // namespace flatpoly_cli
