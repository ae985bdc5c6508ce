#pragma once

#include <string>
#include <vector>

#include "dressq/params.hpp"

namespace dressq {

/// Dressed-mode basis of the linearized (E_J -> 0) circuit.
///
/// The bare fluxes are Phi_r = lambda1 Phi_R + lambda2 Phi_Q and
/// Phi_q = lambda3 Phi_R + lambda4 Phi_Q. Columns (lambda1, lambda3) and
/// (lambda2, lambda4) are Euclidean unit vectors with lambda1, lambda4 > 0.
struct NormalModeBasis {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 1.0;

  double C_R = 0.0;  // fF
  double C_Q = 0.0;  // fF
  double L_R = 0.0;  // nH
  double L_Q = 0.0;  // nH

  double omega_R = 0.0;  // rad/s
  double omega_Q = 0.0;  // rad/s

  double Z_R = 0.0;  // ohm
  double Z_Q = 0.0;  // ohm

  double phi_zpf_R = 0.0;
  double phi_zpf_Q = 0.0;

  double f_R() const { return units::GHz_from_angular(omega_R); }
  double f_Q() const { return units::GHz_from_angular(omega_Q); }
};

/// Solves U v = omega^2 C v in closed form, with C = diag(C_r, C_q) and U the
/// Hessian of the inductive energy. Mode R is the eigenvector leaning more
/// toward the readout coordinate; assignment does not depend on which
/// frequency is larger.
///
/// Throws NumericalError for a non-positive-definite U or eigenfrequencies
/// degenerate within 1e-9 relative ("modes unresolvable").
NormalModeBasis solve_normal_modes(const CircuitParams& params);

/// Fills C_i, L_i, omega_i, Z_i and phi_zpf_i of `basis` from its lambdas
/// (the normal-mode capacitance/inductance formulas).
void fill_mode_parameters(NormalModeBasis& basis, const CircuitParams& params);

enum class ImpedanceRegime { Low, Marginal, High };

struct ApplicabilityReport {
  double turns_ratio = 0.0;     // L_s / (L_r + L_s)
  double hybridization = 0.0;   // |lambda3| / lambda4
  bool criterion_as_printed = false;  // turns_ratio < hybridization
  bool criterion_reversed = false;    // hybridization < turns_ratio

  double impedance_quantum = PhysicalConstants::impedance_quantum;
  double Z_R = 0.0;
  double Z_Q = 0.0;
  ImpedanceRegime regime_R = ImpedanceRegime::Low;
  ImpedanceRegime regime_Q = ImpedanceRegime::Low;

  bool large_Lq_regime = true;
  std::vector<std::string> messages;
};

/// Diagnostics only; never throws. Z_i < 0.1 R_Q is Low, Z_i > R_Q is High.
ApplicabilityReport check_applicability(const CircuitParams& params, const NormalModeBasis& basis);

std::string format_report(const ApplicabilityReport& report);

}  // namespace dressq
