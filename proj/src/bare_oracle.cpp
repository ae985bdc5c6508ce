#include "dressq/bare_oracle.hpp"

#include <cmath>
#include <numbers>

#include "dressq/hamiltonian.hpp"
#include "dressq/oscillator_ops.hpp"

namespace dressq {

Eigen::MatrixXd bare_hamiltonian(const CircuitParams& p, FluxPoint flux, const BareTruncation& t) {
  p.validate();
  if (t.nr < 0 || t.nq < 0) throw ValidationError("bare truncation cutoffs must be non-negative");

  const double Cr = units::farad_from_fF(p.C_r);
  const double Cq = units::farad_from_fF(p.C_q);
  const double Lr_eff = units::henry_from_nH(p.L_r + p.L_s);
  const double Lq = units::henry_from_nH(p.L_q);

  const double f_r = units::GHz_from_angular(1.0 / std::sqrt(Lr_eff * Cr));
  const double f_q = units::GHz_from_angular(1.0 / std::sqrt(Lq * Cq));
  const double zpf_r = std::sqrt(std::sqrt(Lr_eff / Cr) / (2.0 * PhysicalConstants::impedance_quantum));
  const double zpf_q = std::sqrt(std::sqrt(Lq / Cq) / (2.0 * PhysicalConstants::impedance_quantum));

  // -L_s / (L_q (L_r + L_s)) Phi_r Phi_q with Phi = (Phi_0 / 2pi) phi, in GHz.
  const double flux_unit_sq = PhysicalConstants::reduced_flux_quantum * PhysicalConstants::reduced_flux_quantum;
  const double coupling =
      units::GHz_from_joule(units::henry_from_nH(p.L_s) / (Lq * Lr_eff) * flux_unit_sq);

  const int dr = t.nr + 1;
  const int dq = t.nq + 1;
  const OperatorMatrix phi_r = phase_matrix(zpf_r, dr);
  const OperatorMatrix phi_q = phase_matrix(zpf_q, dq);
  // cos(phi_q - phi_ext) = cos(phi_q) cos(phi_ext) + sin(phi_q) sin(phi_ext),
  // with the sine taken in its ladder-operator sign.
  const OperatorMatrix junction =
      std::cos(flux.phase()) * cos_matrix(zpf_q, dq) +
      std::sin(flux.phase()) * sin_matrix(zpf_q, dq, SineConvention::Ladder);

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dr * dq, dr * dq);
  for (int a = 0; a < dr; ++a) {
    h.block(a * dq, a * dq, dq, dq) = -p.E_J * junction;
    for (int m = 0; m < dq; ++m) h(a * dq + m, a * dq + m) += f_r * a + f_q * m;
    for (int b = 0; b < dr; ++b)
      if (phi_r(a, b) != 0.0) h.block(a * dq, b * dq, dq, dq) -= coupling * phi_r(a, b) * phi_q;
  }
  return h;
}

Eigen::VectorXd bare_basis_oracle(const CircuitParams& p, FluxPoint flux, const BareTruncation& t) {
  return diagonalize(bare_hamiltonian(p, flux, t), false).values;
}

}  // namespace dressq
