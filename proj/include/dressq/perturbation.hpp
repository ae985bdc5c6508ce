#pragma once

#include <string>
#include <vector>

#include "dressq/normal_modes.hpp"
#include "dressq/params.hpp"

namespace dressq {

struct PerturbedLevel {
  int n = 0;
  int mu = 0;
  double epsilon = 0.0;  // decoupled energy f_R n + epsilon_mu, GHz
  double delta = 0.0;    // first- plus second-order correction, GHz
  double first_order = 0.0;
  double second_order = 0.0;
  double total() const { return epsilon + delta; }
};

struct PerturbedSpectrum {
  FluxPoint flux;
  int m0 = 0;
  int n_max = 0;
  std::vector<PerturbedLevel> levels;  // n-major, then mu

  /// Smallest |(eps_mu - eps_mu')^2 - f_R^2| met in any retained term, GHz^2.
  double min_denominator = 0.0;
  /// Set when min_denominator falls below the divergence threshold.
  bool divergent = false;
  /// Largest |last mu' term| / |second-order sum| over the levels of
  /// interest (mu <= 3); a crude truncation indicator for the mu' sum.
  double tail_ratio = 0.0;
  std::vector<std::string> warnings;

  const PerturbedLevel& level(int n, int mu) const;
  double energy(int n, int mu) const { return level(n, mu).total(); }
};

struct PerturbationOptions {
  int n_max = 2;
  /// Argument of the qubit operators is lambda4 phi_Q when true, bare phi_Q
  /// otherwise.
  bool absorb_lambda4 = true;
  /// GHz^2; (1 MHz)^2.
  double divergence_threshold = 1e-6;
};

/// Second-order energy corrections of the readout-qubit coupling, expanded to
/// O(lambda3^2) about the decoupled Hamiltonian with qubit cutoff m0. The
/// mu' sum runs over mu' != mu within the same cutoff. A resonant denominator
/// is reported through `divergent`/`warnings`, never thrown.
PerturbedSpectrum perturbative_spectrum(const NormalModeBasis& basis, double E_J, FluxPoint flux, int m0,
                                        const PerturbationOptions& options = {});

/// chi from the perturbed levels.
double perturbative_chi(const PerturbedSpectrum& spec);

}  // namespace dressq
