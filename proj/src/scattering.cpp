#include "dressq/scattering.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dressq/parallel.hpp"

namespace dressq {

namespace {
constexpr double kResonanceTol = 1e-12;  // GHz
constexpr double kNearPole = 1e-9;       // GHz
constexpr double kPoleOffset = 1e-6;     // GHz

Eigen::MatrixXd kron_left(const Eigen::MatrixXd& a, int right_dim) {
  const Eigen::Index n = a.rows() * right_dim;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0)
        out.block(i * right_dim, j * right_dim, right_dim, right_dim).diagonal().setConstant(a(i, j));
  return out;
}

Eigen::MatrixXd kron_right(int left_dim, const Eigen::MatrixXd& b) {
  const Eigen::Index d = b.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(left_dim * d, left_dim * d);
  for (int i = 0; i < left_dim; ++i) out.block(i * d, i * d, d, d) = b;
  return out;
}
}  // namespace

void PortConfig::validate() const {
  if (!(Q_R > 0.0) || !(Q_Q > 0.0) || !std::isfinite(Q_R) || !std::isfinite(Q_Q))
    throw ValidationError("port quality factors must be positive and finite");
}

Eigen::Vector2d PortConfig::impedances(const NormalModeBasis& basis) const {
  validate();
  return {Q_R * basis.Z_R, Q_Q * basis.Z_Q};
}

Eigen::Matrix2cd impedance_from_transitions(const Eigen::VectorXd& delta_f, const Eigen::VectorXd& a,
                                            const Eigen::VectorXd& b, double f) {
  if (delta_f.size() != a.size() || a.size() != b.size())
    throw ValidationError("transition data dimension mismatch");
  double rr = 0.0, rq = 0.0, qq = 0.0;
  for (Eigen::Index k = 0; k < delta_f.size(); ++k) {
    if (a(k) == 0.0 && b(k) == 0.0) continue;
    const double d = delta_f(k);
    if (std::abs(std::abs(d) - std::abs(f)) <= kResonanceTol) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "resonant probe at " << f << " GHz; offset the probe frequency from the pole";
      throw NumericalError(msg.str());
    }
    const double w = d / (d * d - f * f);
    rr += w * a(k) * a(k);
    rq += w * a(k) * b(k);
    qq += w * b(k) * b(k);
  }
  const double scale = 2.0 * PhysicalConstants::impedance_quantum * f;
  Eigen::Matrix2cd Z;
  Z << std::complex<double>(0.0, scale * rr), std::complex<double>(0.0, scale * rq),
      std::complex<double>(0.0, scale * rq), std::complex<double>(0.0, scale * qq);
  return Z;
}

ImpedanceModel::ImpedanceModel(const LabeledSpectrum& spec, const NormalModeBasis& basis) : spec_(spec) {
  const auto& t = spec.trunc;
  if (spec.eigvecs.rows() != t.total_dim() || spec.eigvecs.cols() != static_cast<Eigen::Index>(spec.levels.size()))
    throw ValidationError("impedance model needs a spectrum with eigenvectors");
  const Eigen::MatrixXd pr = kron_left(phase_matrix(basis.phi_zpf_R, t.readout_dim()), t.qubit_dim());
  const Eigen::MatrixXd pq = kron_right(t.readout_dim(), phase_matrix(basis.phi_zpf_Q, t.qubit_dim()));
  const Eigen::MatrixXd& V = spec.eigvecs;
  phi_R_ = V.transpose() * pr * V;
  phi_Q_ = V.transpose() * pq * V;
}

int ImpedanceModel::level_index(StateLabel s) const {
  const int i = spec_.index_of(s.n, s.mu);
  if (i < 0) throw ValidationError("state " + state_label(s.n, s.mu) + " not in the truncated window");
  return i;
}

Eigen::Matrix2cd ImpedanceModel::impedance(int s, double f) const {
  if (s < 0 || s >= static_cast<int>(spec_.levels.size())) throw ValidationError("level index out of range");
  const Eigen::Index n = static_cast<Eigen::Index>(spec_.levels.size());
  Eigen::VectorXd df(n);
  for (Eigen::Index k = 0; k < n; ++k) df(k) = spec_.levels[k].energy - spec_.levels[s].energy;
  Eigen::VectorXd a = phi_R_.col(s);
  Eigen::VectorXd b = phi_Q_.col(s);
  a(s) = 0.0;
  b(s) = 0.0;
  return impedance_from_transitions(df, a, b, f);
}

Eigen::Matrix2cd ImpedanceModel::impedance(StateLabel state, double f) const {
  return impedance(level_index(state), f);
}

Eigen::Matrix2cd ImpedanceModel::impedance(const std::vector<std::pair<StateLabel, double>>& populations,
                                           double f) const {
  double total = 0.0;
  Eigen::Matrix2cd Z = Eigen::Matrix2cd::Zero();
  for (const auto& [state, p] : populations) {
    if (!(p >= 0.0)) throw ValidationError("state populations must be non-negative");
    total += p;
    if (p > 0.0) Z += p * impedance(state, f);
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("state populations must sum to 1");
  return Z;
}

std::vector<double> ImpedanceModel::poles(int s, double min_element) const {
  std::vector<double> out;
  for (int k = 0; k < static_cast<int>(spec_.levels.size()); ++k) {
    if (k == s) continue;
    if (std::abs(phi_R_(k, s)) > min_element || std::abs(phi_Q_(k, s)) > min_element)
      out.push_back(std::abs(spec_.levels[k].energy - spec_.levels[s].energy));
  }
  return out;
}

Eigen::Matrix2cd voltage_wave_scattering(const Eigen::Matrix2cd& Z, const Eigen::Vector2d& z0) {
  if (!(z0.array() > 0.0).all()) throw ValidationError("port impedances must be positive");
  Eigen::Matrix2cd zz = Z;
  zz.col(0) /= z0(0);
  zz.col(1) /= z0(1);
  const Eigen::Matrix2cd A = zz + Eigen::Matrix2cd::Identity();
  const std::complex<double> det = A.determinant();
  if (std::abs(det) < 1e-14) {
    std::ostringstream msg;
    msg << "singular Z Z0^-1 + I (|det| = " << std::abs(det) << ")";
    throw NumericalError(msg.str());
  }
  return A.inverse() * (zz - Eigen::Matrix2cd::Identity());
}

Eigen::Matrix2cd scattering_matrix(const Eigen::Matrix2cd& Z, const Eigen::Vector2d& z0) {
  const Eigen::Matrix2cd sv = voltage_wave_scattering(Z, z0);
  Eigen::Matrix2cd s = sv;
  s(0, 1) *= std::sqrt(z0(1) / z0(0));
  s(1, 0) *= std::sqrt(z0(0) / z0(1));
  return s;
}

std::vector<ScatteringResult> scattering_sweep(const ImpedanceModel& model, const PortConfig& ports,
                                               const NormalModeBasis& basis, const std::vector<StateLabel>& states,
                                               const std::vector<double>& freqs, int threads) {
  const Eigen::Vector2d z0 = ports.impedances(basis);
  std::vector<ScatteringResult> out;
  for (const auto& st : states) {
    const int s = model.level_index(st);
    const std::vector<double> poles = model.poles(s, 0.0);
    ScatteringResult r;
    r.state = state_label(st.n, st.mu);
    r.probe_freqs = freqs;
    for (double& f : r.probe_freqs)
      for (double p : poles)
        if (std::abs(f - p) < kNearPole) {
          f += kPoleOffset;
          break;
        }
    r.S.resize(freqs.size());
    parallel_for(freqs.size(), threads, [&](std::size_t i) {
      r.S[i] = scattering_matrix(model.impedance(s, r.probe_freqs[i]), z0);
    });
    out.push_back(std::move(r));
  }
  return out;
}

void write_scattering_csv(std::ostream& os, const std::vector<ScatteringResult>& results) {
  const auto old_precision = os.precision(15);
  os << "f_GHz,state,re_S_RR,im_S_RR,re_S_RQ,im_S_RQ,re_S_QQ,im_S_QQ\n";
  for (const auto& r : results)
    for (std::size_t i = 0; i < r.probe_freqs.size(); ++i) {
      const auto& S = r.S[i];
      os << r.probe_freqs[i] << ',' << r.state << ',' << S(0, 0).real() << ',' << S(0, 0).imag() << ','
         << S(0, 1).real() << ',' << S(0, 1).imag() << ',' << S(1, 1).real() << ',' << S(1, 1).imag() << '\n';
    }
  os.precision(old_precision);
}

std::vector<double> unwrapped_phase(const ScatteringResult& r, int port) {
  if (port != 0 && port != 1) throw ValidationError("port must be 0 (R) or 1 (Q)");
  std::vector<double> ph(r.S.size());
  for (std::size_t i = 0; i < r.S.size(); ++i) {
    ph[i] = std::arg(r.S[i](port, port));
    if (i > 0) {
      double d = ph[i] - ph[i - 1];
      d -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
      ph[i] = ph[i - 1] + d;
    }
  }
  return ph;
}

double phase_roll_center(const ScatteringResult& r, int port) {
  const std::vector<double> ph = unwrapped_phase(r, port);
  if (ph.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mid = 0.5 * (ph.front() + ph.back());
  if (ph.front() == ph.back()) return std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < ph.size(); ++i) {
    const double a = ph[i - 1] - mid;
    const double b = ph[i] - mid;
    if (a == 0.0) return r.probe_freqs[i - 1];
    if ((a < 0.0) != (b < 0.0)) {
      const double t = a / (a - b);
      return r.probe_freqs[i - 1] + t * (r.probe_freqs[i] - r.probe_freqs[i - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace dressq
