#include "dressq/params.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dressq {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int param_index(std::string_view name) {
  for (int i = 0; i < 6; ++i)
    if (kParamNames[i] == name) return i;
  return -1;
}

std::string line_tag(int line_no) { return " (line " + std::to_string(line_no) + ")"; }

}  // namespace

void CircuitParams::validate() const {
  auto require = [](double v, std::string_view name, bool allow_zero) {
    if (!std::isfinite(v))
      throw ValidationError("non-finite value: " + std::string(name));
    if (v < 0.0 || (!allow_zero && v == 0.0))
      throw ValidationError("non-positive value: " + std::string(name) + " = " +
                            std::to_string(v));
  };
  require(C_r, "C_r", false);
  require(L_r, "L_r", false);
  require(C_q, "C_q", false);
  require(L_q, "L_q", false);
  require(E_J, "E_J", true);
  require(L_s, "L_s", true);
}

double& param_ref(CircuitParams& p, std::string_view name) {
  switch (param_index(name)) {
    case 0: return p.C_r;
    case 1: return p.L_r;
    case 2: return p.C_q;
    case 3: return p.L_q;
    case 4: return p.E_J;
    case 5: return p.L_s;
    default: throw ValidationError("unknown key: " + std::string(name));
  }
}

double param_value(const CircuitParams& p, std::string_view name) {
  return param_ref(const_cast<CircuitParams&>(p), name);
}

std::string_view param_unit(std::string_view name) {
  switch (param_index(name)) {
    case 0:
    case 2: return "fF";
    case 1:
    case 3:
    case 5: return "nH";
    case 4: return "GHz";
    default: throw ValidationError("unknown key: " + std::string(name));
  }
}

CircuitParams load_params(std::string_view text) {
  CircuitParams p;
  std::array<bool, 6> seen{};
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("malformed line: expected 'key = value unit'" + line_tag(line_no));
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view rhs = trim(line.substr(eq + 1));

    const int idx = param_index(key);
    if (idx < 0) throw ValidationError("unknown key: " + std::string(key) + line_tag(line_no));
    if (seen[idx]) throw ValidationError("duplicate key: " + std::string(key) + line_tag(line_no));

    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(rhs.data(), rhs.data() + rhs.size(), value);
    const bool token_ends = ptr == rhs.data() + rhs.size() || *ptr == ' ' || *ptr == '\t';
    if (ec != std::errc{} || ptr == rhs.data() || !token_ends)
      throw ValidationError("malformed number for " + std::string(key) + line_tag(line_no));
    const std::string_view unit = trim(std::string_view(ptr, rhs.data() + rhs.size() - ptr));
    if (unit.empty())
      throw ValidationError("missing unit for " + std::string(key) + ": expected " +
                            std::string(param_unit(key)) + line_tag(line_no));
    if (unit != param_unit(key))
      throw ValidationError("wrong unit for " + std::string(key) + ": got '" + std::string(unit) +
                            "', expected " + std::string(param_unit(key)) + line_tag(line_no));

    param_ref(p, key) = value;
    seen[idx] = true;
  }
  for (int i = 0; i < 6; ++i)
    if (!seen[i]) throw ValidationError("missing key: " + std::string(kParamNames[i]));
  p.validate();
  return p;
}

CircuitParams load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_params(ss.str());
}

std::string to_config_text(const CircuitParams& p) {
  std::string out;
  for (auto name : kParamNames) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), param_value(p, name),
                                   std::chars_format::general, 17);
    out += std::string(name) + " = " + std::string(buf.data(), res.ptr) + " " +
           std::string(param_unit(name)) + "\n";
  }
  return out;
}

CircuitParams device_a() { return {20.3, 15.6, 5.3, 386.0, 6.20, 4.5}; }
CircuitParams device_b() { return {20.1, 19.7, 5.9, 430.0, 9.08, 2.9}; }

std::optional<CircuitParams> builtin_device(std::string_view name) {
  if (name == "deviceA" || name == "A") return device_a();
  if (name == "deviceB" || name == "B") return device_b();
  return std::nullopt;
}

}  // namespace dressq
