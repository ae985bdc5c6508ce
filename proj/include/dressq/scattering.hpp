#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dressq/normal_modes.hpp"
#include "dressq/spectrum.hpp"

namespace dressq {

/// Port quality factors; the port characteristic impedances follow as
/// Z_i = Q_i sqrt(L_i / C_i) of the matching normal mode.
struct PortConfig {
  double Q_R = 1.5e3;
  double Q_Q = 7.5e5;

  void validate() const;
  /// (Z_R, Z_Q) port impedances in ohm.
  Eigen::Vector2d impedances(const NormalModeBasis& basis) const;
};

/// Lossless impedance of one prepared state, written directly in terms of the
/// transition data: for every other level k, delta_f(k) = E_k - E_s (GHz) and
/// the dimensionless flux matrix elements a(k) = <s|phi_R|k>, b(k) = <s|phi_Q|k>.
///
///   Z_ij(f) = i 2 R_Q f sum_k delta_f / (delta_f^2 - f^2) x_i(k) x_j(k)
///
/// Result in ohm. Throws NumericalError("resonant probe ...") when f sits on a
/// pole with non-zero residue.
Eigen::Matrix2cd impedance_from_transitions(const Eigen::VectorXd& delta_f, const Eigen::VectorXd& a,
                                            const Eigen::VectorXd& b, double f);

/// Flux operators of both normal modes in the energy eigenbasis of a labeled
/// spectrum, ready for repeated impedance evaluation.
class ImpedanceModel {
 public:
  /// `spec` must carry eigenvectors. Either sine convention works: flipping
  /// both sines is a joint parity transform, which negates both flux
  /// operators and leaves every Z_ij unchanged.
  ImpedanceModel(const LabeledSpectrum& spec, const NormalModeBasis& basis);

  Eigen::Matrix2cd impedance(int level_index, double f) const;
  Eigen::Matrix2cd impedance(StateLabel state, double f) const;
  /// Population-weighted impedance sum_s p_s Z^s. Weights must be
  /// non-negative and sum to 1 within 1e-9.
  Eigen::Matrix2cd impedance(const std::vector<std::pair<StateLabel, double>>& populations, double f) const;

  /// Transition frequencies |E_k - E_s| from the given level whose flux
  /// matrix element with either port exceeds `min_element`.
  std::vector<double> poles(int level_index, double min_element = 1e-12) const;

  int level_index(StateLabel state) const;
  const LabeledSpectrum& spectrum() const { return spec_; }
  const Eigen::MatrixXd& phi_R() const { return phi_R_; }
  const Eigen::MatrixXd& phi_Q() const { return phi_Q_; }

 private:
  LabeledSpectrum spec_;
  Eigen::MatrixXd phi_R_;
  Eigen::MatrixXd phi_Q_;
};

/// Power-wave scattering matrix Z0^{-1/2} S_v Z0^{1/2} with
/// S_v = (Z Z0^{-1} + I)^{-1} (Z Z0^{-1} - I). Unitary and symmetric for a
/// lossless, reciprocal Z; its diagonal equals that of S_v.
Eigen::Matrix2cd scattering_matrix(const Eigen::Matrix2cd& Z, const Eigen::Vector2d& port_impedances);

/// S_v itself. Not unitary once the two port impedances differ.
Eigen::Matrix2cd voltage_wave_scattering(const Eigen::Matrix2cd& Z, const Eigen::Vector2d& port_impedances);

struct ScatteringResult {
  std::string state;
  std::vector<double> probe_freqs;  // GHz, after pole avoidance
  std::vector<Eigen::Matrix2cd> S;
};

/// S(f) for each prepared state. A grid point within 1e-9 GHz of a pole is
/// moved up by 1e-6 GHz before evaluation.
std::vector<ScatteringResult> scattering_sweep(const ImpedanceModel& model, const PortConfig& ports,
                                               const NormalModeBasis& basis, const std::vector<StateLabel>& states,
                                               const std::vector<double>& freqs, int threads = 1);

/// Columns f_GHz,state,re_S_RR,im_S_RR,re_S_RQ,im_S_RQ,re_S_QQ,im_S_QQ.
void write_scattering_csv(std::ostream& os, const std::vector<ScatteringResult>& results);

/// Unwrapped phase of S_ii (port 0 = R, 1 = Q) along the sweep.
std::vector<double> unwrapped_phase(const ScatteringResult& r, int port);

/// Frequency at which the unwrapped phase of S_ii has moved half of its total
/// excursion over the sweep, by linear interpolation. NaN if the phase never
/// moves.
double phase_roll_center(const ScatteringResult& r, int port);

}  // namespace dressq
