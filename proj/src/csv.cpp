#include "dressq/csv.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

namespace dressq {

namespace {
std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

void RunManifest::write(std::ostream& os) const {
  std::ostringstream p;
  p.precision(17);
  for (const auto name : kParamNames)
    p << (name == kParamNames[0] ? "" : " ") << name << '=' << param_value(params, name) << param_unit(name);
  os << "# tool: dressq " << kVersion << '\n'
     << "# subcommand: " << subcommand << '\n'
     << "# params: " << p.str() << '\n'
     << "# truncation: n0=" << trunc.n0 << " m0=" << trunc.m0 << '\n';
  if (!flux.empty()) os << "# flux: " << flux << '\n';
  for (const auto& [k, v] : extra) os << "# " << k << ": " << v << '\n';
  for (const auto& o : outputs) os << "# output: " << o << '\n';
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = s.empty() ? 0.0 : std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ValidationError("non-numeric " + std::string(what) + ": '" + s + "'");
  return v;
}

}  // namespace dressq
