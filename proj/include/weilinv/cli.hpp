#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace weilinv::cli {

enum ExitCode : int { kOk = 0, kComputationError = 1, kParseError = 2, kCheckFailed = 3 };

struct BasisEntry {
  /// Coordinates of the elements with nonzero coefficient, in index order.
  std::vector<std::vector<std::int64_t>> support;
  std::vector<std::int64_t> coeffs;

  bool operator==(const BasisEntry&) const = default;
};

/// One line of --json output.
struct OutputReport {
  std::string symbol;
  std::uint64_t order = 1;
  std::int64_t level = 1;
  int signature = 0;
  std::optional<int> epsilon;
  std::size_t dimension = 0;
  std::vector<std::uint64_t> primes;
  std::optional<std::vector<BasisEntry>> basis;
  double ms = 0;

  bool operator==(const OutputReport&) const = default;
};

std::string to_json_line(const OutputReport& report);
OutputReport report_from_json(const std::string& line);

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weilinv::cli
