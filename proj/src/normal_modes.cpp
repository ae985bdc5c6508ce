#include "dressq/normal_modes.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace dressq {

namespace {

struct Vec2 {
  double r;
  double q;
  double norm() const { return std::hypot(r, q); }
};

// Null vector of the 2x2 matrix (U - w C); takes whichever row gives the
// better-conditioned vector.
Vec2 null_vector(double u11, double u12, double u22, double c_r, double c_q, double w) {
  const Vec2 from_row1{-u12, u11 - w * c_r};
  const Vec2 from_row2{u22 - w * c_q, -u12};
  Vec2 v = from_row1.norm() >= from_row2.norm() ? from_row1 : from_row2;
  const double n = v.norm();
  return {v.r / n, v.q / n};
}

}  // namespace

void fill_mode_parameters(NormalModeBasis& b, const CircuitParams& p) {
  const double l1 = b.lambda1, l2 = b.lambda2, l3 = b.lambda3, l4 = b.lambda4;
  const double Lrs = p.L_r + p.L_s;

  b.C_R = l1 * l1 * p.C_r + l3 * l3 * p.C_q;
  b.C_Q = l2 * l2 * p.C_r + l4 * l4 * p.C_q;
  const double inv_LR = l1 * l1 / Lrs + l3 * l3 / p.L_q - 2.0 * l1 * l3 * p.L_s / (p.L_q * Lrs);
  const double inv_LQ = l2 * l2 / Lrs + l4 * l4 / p.L_q - 2.0 * l2 * l4 * p.L_s / (p.L_q * Lrs);
  b.L_R = 1.0 / inv_LR;
  b.L_Q = 1.0 / inv_LQ;

  const double CR = units::farad_from_fF(b.C_R), CQ = units::farad_from_fF(b.C_Q);
  const double LR = units::henry_from_nH(b.L_R), LQ = units::henry_from_nH(b.L_Q);
  b.omega_R = 1.0 / std::sqrt(LR * CR);
  b.omega_Q = 1.0 / std::sqrt(LQ * CQ);
  b.Z_R = std::sqrt(LR / CR);
  b.Z_Q = std::sqrt(LQ / CQ);
  b.phi_zpf_R = std::sqrt(b.Z_R / (2.0 * PhysicalConstants::impedance_quantum));
  b.phi_zpf_Q = std::sqrt(b.Z_Q / (2.0 * PhysicalConstants::impedance_quantum));
}

NormalModeBasis solve_normal_modes(const CircuitParams& p) {
  p.validate();

  // Work in fF and 1/nH; the eigenvectors are unit independent.
  const double Lrs = p.L_r + p.L_s;
  const double u11 = 1.0 / Lrs;
  const double u22 = 1.0 / p.L_q;
  const double u12 = -p.L_s / (p.L_q * Lrs);
  const double det_u = u11 * u22 - u12 * u12;
  if (!(u11 > 0.0 && det_u > 0.0))
    throw NumericalError("inductance matrix is not positive definite (L_q (L_r + L_s) <= L_s^2)");

  // C_r C_q w^2 - (u11 C_q + u22 C_r) w + det U = 0, w = omega^2.
  const double a = p.C_r * p.C_q;
  const double bq = u11 * p.C_q + u22 * p.C_r;
  const double disc = (u11 * p.C_q - u22 * p.C_r) * (u11 * p.C_q - u22 * p.C_r) +
                      4.0 * p.C_r * p.C_q * u12 * u12;
  const double sq = std::sqrt(disc);
  const double w_hi = (bq + sq) / (2.0 * a);
  const double w_lo = det_u / (a * w_hi);  // Vieta; avoids cancellation
  if (!(w_lo > 0.0)) throw NumericalError("non-positive squared eigenfrequency");
  if (std::abs(w_hi - w_lo) <= 1e-9 * w_hi)
    throw NumericalError("modes unresolvable: eigenfrequencies degenerate within 1e-9");

  Vec2 v_hi = null_vector(u11, u12, u22, p.C_r, p.C_q, w_hi);
  Vec2 v_lo = null_vector(u11, u12, u22, p.C_r, p.C_q, w_lo);

  // The readout-like mode is the one whose vector leans more toward Phi_r.
  const double lean_hi = std::abs(v_hi.r) - std::abs(v_hi.q);
  const double lean_lo = std::abs(v_lo.r) - std::abs(v_lo.q);
  Vec2 vR = v_hi, vQ = v_lo;
  if (lean_lo > lean_hi) std::swap(vR, vQ);
  if (vR.r < 0.0) vR = {-vR.r, -vR.q};
  if (vQ.q < 0.0) vQ = {-vQ.r, -vQ.q};

  NormalModeBasis b;
  b.lambda1 = vR.r;
  b.lambda3 = vR.q;
  b.lambda2 = vQ.r;
  b.lambda4 = vQ.q;
  fill_mode_parameters(b, p);
  return b;
}

ApplicabilityReport check_applicability(const CircuitParams& p, const NormalModeBasis& b) {
  ApplicabilityReport rep;
  rep.turns_ratio = p.L_s / (p.L_r + p.L_s);
  rep.hybridization = std::abs(b.lambda3) / b.lambda4;
  rep.criterion_as_printed = rep.turns_ratio < rep.hybridization;
  rep.criterion_reversed = rep.hybridization < rep.turns_ratio;
  rep.Z_R = b.Z_R;
  rep.Z_Q = b.Z_Q;

  auto classify = [&](double z) {
    if (z < 0.1 * rep.impedance_quantum) return ImpedanceRegime::Low;
    if (z > rep.impedance_quantum) return ImpedanceRegime::High;
    return ImpedanceRegime::Marginal;
  };
  rep.regime_R = classify(b.Z_R);
  rep.regime_Q = classify(b.Z_Q);
  rep.large_Lq_regime = p.in_large_Lq_regime();

  if (rep.regime_R == ImpedanceRegime::High)
    rep.messages.emplace_back("cosine truncation invalid for mode R");
  else if (rep.regime_R == ImpedanceRegime::Marginal)
    rep.messages.emplace_back("cosine truncation marginal for mode R");
  if (rep.regime_Q == ImpedanceRegime::High)
    rep.messages.emplace_back("cosine truncation invalid for mode Q");
  else if (rep.regime_Q == ImpedanceRegime::Marginal)
    rep.messages.emplace_back("cosine truncation marginal for mode Q");
  if (!rep.large_Lq_regime)
    rep.messages.emplace_back("L_q < 5 (L_r + L_s): outside the large-L_q limit of the circuit model");
  return rep;
}

std::string format_report(const ApplicabilityReport& r) {
  auto regime = [](ImpedanceRegime g) {
    switch (g) {
      case ImpedanceRegime::Low: return "low";
      case ImpedanceRegime::Marginal: return "marginal";
      case ImpedanceRegime::High: return "high";
    }
    return "?";
  };
  std::ostringstream os;
  os.precision(6);
  os << "turns_ratio = " << r.turns_ratio << "\n"
     << "hybridization = " << r.hybridization << "\n"
     << "criterion_as_printed (turns_ratio < hybridization) = "
     << (r.criterion_as_printed ? "true" : "false") << "\n"
     << "criterion_reversed (hybridization < turns_ratio) = "
     << (r.criterion_reversed ? "true" : "false") << "\n"
     << "R_Q_ohm = " << r.impedance_quantum << "\n"
     << "Z_R_ohm = " << r.Z_R << " (" << regime(r.regime_R) << ")\n"
     << "Z_Q_ohm = " << r.Z_Q << " (" << regime(r.regime_Q) << ")\n"
     << "large_Lq_regime = " << (r.large_Lq_regime ? "true" : "false") << "\n";
  for (const auto& m : r.messages) os << "warning: " << m << "\n";
  return os.str();
}

}  // namespace dressq
