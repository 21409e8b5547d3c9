#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace emt::cli {

/// Parsed and validated command line.
struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string country;
  std::string age = "0+";
  std::string method = "hist";
  double q = 0.10;
  std::string years;   // "YYYY-YYYY", empty for the default span
  std::string exclude; // "YYYY[,YYYY]"
  std::string weeks;   // "A:B", empty for the whole year
  int shift = 0;
  double tau = 2.5;
  int nsim = 100;
  std::optional<std::uint64_t> seed;
  int order = 1;
  std::string out = ".";
  bool plot = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitComputation = 2;

/// Runs one subcommand. `args` excludes the program name. Summaries go to
/// `out`; usage text and the `error: code=... row=... message=...` line go
/// to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

} // namespace emt::cli
