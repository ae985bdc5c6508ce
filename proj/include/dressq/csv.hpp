#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dressq/hamiltonian.hpp"
#include "dressq/params.hpp"

namespace dressq {

inline constexpr std::string_view kVersion = "0.1.0";

/// What produced an output file. Written as "# key: value" lines ahead of
/// the CSV header so that a file can be regenerated from its own preamble.
struct RunManifest {
  std::string subcommand;
  CircuitParams params;
  TruncationScheme trunc;
  std::string flux;  // as given on the command line
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, std::string>> extra;

  void write(std::ostream& os) const;
};

/// Splits one CSV line on commas and trims surrounding blanks. No quoting.
std::vector<std::string> split_csv_line(std::string_view line);

/// Parses a whole string as a finite double; throws ValidationError naming
/// `what` otherwise.
double parse_double(std::string_view text, std::string_view what);

}  // namespace dressq
