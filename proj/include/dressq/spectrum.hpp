#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dressq/hamiltonian.hpp"
#include "dressq/labeling.hpp"

namespace dressq {

/// Qubit quantum numbers 0..3 print as g, e, f, h; larger ones as ":<mu>".
std::string state_label(int n, int mu);

struct StateLabel {
  int n = 0;
  int mu = 0;
};
/// Accepts "0g", "1e", "2f", "0h" and "<n>:<mu>". Throws ValidationError.
StateLabel parse_state(std::string_view token);

struct Level {
  double energy = 0.0;  // GHz, absolute
  int n = 0;
  int mu = 0;
};

/// Eigenvalues at one flux point with assigned (n, mu) quantum numbers.
/// Levels are sorted by energy; column i of `eigvecs` (when present) belongs
/// to levels[i] and is expressed in the dressed product basis |n m>.
struct LabeledSpectrum {
  FluxPoint flux;
  TruncationScheme trunc;
  std::vector<Level> levels;
  Eigen::MatrixXd eigvecs;
  double label_cost = 0.0;

  int index_of(int n, int mu) const;  // -1 when absent
  double energy(int n, int mu) const;  // throws ValidationError when absent
  double ground_energy() const { return energy(0, 0); }
};

/// Precomputes the normal modes and Kronecker blocks for one parameter set;
/// `solve` is then cheap per flux point and safe to call concurrently.
class SpectrumSolver {
 public:
  explicit SpectrumSolver(const CircuitParams& params, const TruncationScheme& trunc = {},
                          SineConvention convention = SineConvention::Tabulated);

  LabeledSpectrum solve(FluxPoint flux, bool with_vectors = false) const;

  /// Decoupled labels epsilon_{n mu} = f_R n + epsilon_mu over the full
  /// truncated window.
  std::vector<DecoupledLabel> decoupled_labels(FluxPoint flux) const;

  /// Qubit-block eigensystem {epsilon_mu, |mu>_0} of the decoupled Hamiltonian.
  Eigensystem decoupled_qubit(FluxPoint flux) const;

  const CircuitParams& params() const { return params_; }
  const NormalModeBasis& basis() const { return basis_; }
  const HamiltonianBlocks& blocks() const { return blocks_; }

 private:
  CircuitParams params_;
  NormalModeBasis basis_;
  HamiltonianBlocks blocks_;
};

/// Labels a coupled eigensystem against decoupled labels of the same window.
LabeledSpectrum label_spectrum(const Eigensystem& coupled, const std::vector<DecoupledLabel>& labels,
                               FluxPoint flux, const TruncationScheme& trunc);

struct TransitionTable {
  double f_01 = 0.0;  // (E_1g - E_0g)/h
  double f_ge = 0.0;  // (E_0e - E_0g)/h
};

TransitionTable transitions(const LabeledSpectrum& spec);

/// E(to) - E(from), GHz.
double transition_frequency(const LabeledSpectrum& spec, StateLabel from, StateLabel to);

/// chi = (E_1e - E_0e) - (E_1g - E_0g), GHz.
double dispersive_shift(const LabeledSpectrum& spec);

/// Inherited readout anharmonicity (E_2mu - E_1mu) - (E_1mu - E_0mu), GHz.
/// Needs n0 >= 2.
double kerr(const LabeledSpectrum& spec, int mu);

/// `points` evenly spaced values from start to stop inclusive.
std::vector<double> flux_grid(double start, double stop, int points);

/// One labeled spectrum per flux value (units of Phi_0), parallel over points.
std::vector<LabeledSpectrum> sweep(const CircuitParams& params, const std::vector<double>& flux_over_phi0,
                                   const TruncationScheme& trunc, int threads = 1);

/// Columns flux_over_phi0,n,mu,energy_GHz. Energies are relative to E_0g
/// unless `absolute`; `max_levels` < 0 writes every level.
void write_spectrum_csv(std::ostream& os, const std::vector<LabeledSpectrum>& spectra, bool absolute,
                        int max_levels);

struct ConvergenceRow {
  TruncationScheme trunc;
  Eigen::VectorXd energies;  // lowest tracked levels, absolute GHz
  double max_change = 0.0;   // vs previous row; NaN on the first row
};

struct ConvergenceReport {
  double tolerance = 0.0;
  std::vector<ConvergenceRow> rows;
  int converged_at = -1;  // first row whose max_change < tolerance
  bool converged() const { return converged_at >= 0; }
};

ConvergenceReport convergence_report(const CircuitParams& params, FluxPoint flux,
                                     const std::vector<TruncationScheme>& ladder, int tracked_levels,
                                     double tolerance_GHz);

}  // namespace dressq
