#pragma once

// Physical constants, circuit parameters and flux handling shared by every
// other part of the library.
//
// Working units: frequencies and energies in GHz (E/h), capacitance in fF,
// inductance in nH, impedance in ohm, phases dimensionless.

#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dressq {

/// Thrown for malformed or out-of-range inputs (config text, CSV, flags).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a numerical routine cannot deliver its contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CODATA 2018 values. h and e are exact by definition; hbar is pinned to
/// 12 significant digits and the rest are derived from it.
struct PhysicalConstants {
  static constexpr double planck = 6.62607015e-34;            // J s
  static constexpr double elementary_charge = 1.602176634e-19;  // C
  static constexpr double hbar = 1.05457181765e-34;           // J s
  /// Phi_0 / 2pi = hbar / 2e, in Wb.
  static constexpr double reduced_flux_quantum = hbar / (2.0 * elementary_charge);
  /// R_Q = hbar / (2e)^2, in ohm.
  static constexpr double impedance_quantum =
      hbar / (4.0 * elementary_charge * elementary_charge);
};

namespace units {
inline constexpr double femto = 1e-15;
inline constexpr double nano = 1e-9;
inline constexpr double giga = 1e9;

constexpr double farad_from_fF(double c) { return c * femto; }
constexpr double henry_from_nH(double l) { return l * nano; }
constexpr double joule_from_GHz(double f) { return f * giga * PhysicalConstants::planck; }
constexpr double GHz_from_joule(double e) { return e / (giga * PhysicalConstants::planck); }
/// Angular frequency (rad/s) to ordinary frequency in GHz.
constexpr double GHz_from_angular(double omega) {
  return omega / (2.0 * std::numbers::pi) / giga;
}
}  // namespace units

/// The five lumped elements of the reduced fluxonium-resonator circuit plus
/// the small-junction Josephson energy.
struct CircuitParams {
  double C_r = 0.0;  // fF, readout capacitance
  double L_r = 0.0;  // nH, unshared readout inductance
  double C_q = 0.0;  // fF, small-junction capacitance
  double L_q = 0.0;  // nH, unshared qubit superinductance
  double E_J = 0.0;  // GHz
  double L_s = 0.0;  // nH, shared inductance

  bool operator==(const CircuitParams&) const = default;

  /// Throws ValidationError unless C_r, L_r, C_q, L_q > 0 and E_J, L_s >= 0.
  void validate() const;

  /// The reduced circuit assumes L_q >> L_r ~ L_s; false when L_q < 5 (L_r + L_s).
  bool in_large_Lq_regime() const { return L_q >= 5.0 * (L_r + L_s); }
};

/// Names used in config files and fixed-parameter masks, in field order.
inline constexpr std::string_view kParamNames[6] = {"C_r", "L_r", "C_q", "L_q", "E_J", "L_s"};

double& param_ref(CircuitParams& p, std::string_view name);
double param_value(const CircuitParams& p, std::string_view name);
std::string_view param_unit(std::string_view name);

/// Parses the flat key-value config format:
///
///     # comment
///     C_r = 20.3 fF
///     L_r = 15.6 nH
///     ...
///
/// Each of the six keys must appear exactly once with its unit (fF for
/// capacitances, nH for inductances, GHz for E_J). Unknown keys, duplicate
/// keys, missing keys, wrong units, malformed numbers and out-of-range
/// values each raise a ValidationError with a distinct message prefix.
CircuitParams load_params(std::string_view config_text);
CircuitParams load_params_file(const std::string& path);

/// Inverse of load_params; numbers are written with 17 significant digits so
/// that parsing the output gives back bit-identical values.
std::string to_config_text(const CircuitParams& p);

/// Reference parameter sets for the two devices.
CircuitParams device_a();
CircuitParams device_b();
std::optional<CircuitParams> builtin_device(std::string_view name);

/// External flux, stored as the reduced phase phi_ext = 2 pi Phi_ext / Phi_0.
class FluxPoint {
 public:
  constexpr FluxPoint() = default;
  static constexpr FluxPoint from_phase(double phi_ext) { return FluxPoint(phi_ext); }
  static constexpr FluxPoint from_flux_quanta(double phi_over_phi0) {
    return FluxPoint(2.0 * std::numbers::pi * phi_over_phi0);
  }
  constexpr double phase() const { return phi_; }
  constexpr double flux_quanta() const { return phi_ / (2.0 * std::numbers::pi); }

 private:
  constexpr explicit FluxPoint(double phi) : phi_(phi) {}
  double phi_ = 0.0;
};

}  // namespace dressq
