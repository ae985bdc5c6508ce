#pragma once

#include <Eigen/Dense>

#include "dressq/params.hpp"

namespace dressq {

/// Inclusive Fock cutoffs for the bare readout (Phi_r) and qubit (Phi_q) modes.
struct BareTruncation {
  int nr = 10;
  int nq = 40;
  int total_dim() const { return (nr + 1) * (nq + 1); }
};

/// Hamiltonian of the two-mode circuit written directly in the bare
/// oscillator basis: readout oscillator (C_r, L_r + L_s), qubit oscillator
/// (C_q, L_q), bilinear mutual-inductance coupling and the full junction
/// cosine on the bare qubit phase. GHz units; zero-point energies omitted.
Eigen::MatrixXd bare_hamiltonian(const CircuitParams& params, FluxPoint flux, const BareTruncation& trunc);

/// Ascending eigenvalues of bare_hamiltonian. Used only as an independent
/// check of the dressed-basis spectrum.
Eigen::VectorXd bare_basis_oracle(const CircuitParams& params, FluxPoint flux, const BareTruncation& trunc);

}  // namespace dressq
