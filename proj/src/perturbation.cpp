#include "dressq/perturbation.hpp"

#include <cmath>
#include <limits>

#include "dressq/hamiltonian.hpp"
#include "dressq/oscillator_ops.hpp"
#include "dressq/spectrum.hpp"

namespace dressq {

const PerturbedLevel& PerturbedSpectrum::level(int n, int mu) const {
  if (n < 0 || n > n_max || mu < 0 || mu > m0)
    throw ValidationError("state " + state_label(n, mu) + " outside the perturbative window");
  return levels[static_cast<std::size_t>(n) * (m0 + 1) + mu];
}

PerturbedSpectrum perturbative_spectrum(const NormalModeBasis& basis, double E_J, FluxPoint flux, int m0,
                                        const PerturbationOptions& opt) {
  if (m0 < 1) throw ValidationError("perturbative spectrum needs m0 >= 1");
  if (opt.n_max < 0) throw ValidationError("perturbative spectrum needs n_max >= 0");
  if (!(std::abs(basis.lambda3) < 1.0))
    throw ValidationError("perturbative expansion needs |lambda3| < 1");

  const int dq = m0 + 1;
  const double x_Q = (opt.absorb_lambda4 ? basis.lambda4 : 1.0) * basis.phi_zpf_Q;
  const OperatorMatrix C = cos_matrix(x_Q, dq);
  const OperatorMatrix S = sin_matrix(x_Q, dq);
  const double cphi = std::cos(flux.phase());
  const double sphi = std::sin(flux.phase());

  // cos(phi_Q - phi_ext) and sin(phi_Q - phi_ext) in the same representation
  // as the tabulated sine matrices.
  const Eigen::MatrixXd cos_op = cphi * C + sphi * S;
  const Eigen::MatrixXd sin_op = cphi * S - sphi * C;

  Eigen::MatrixXd hq = -E_J * cos_op;
  for (int m = 0; m < dq; ++m) hq(m, m) += basis.f_Q() * m;
  const Eigensystem qubit = diagonalize(hq, true);
  const Eigen::VectorXd& eps = qubit.values;
  const Eigen::MatrixXd cos_mu = qubit.vectors.transpose() * cos_op * qubit.vectors;
  const Eigen::MatrixXd sin_mu = qubit.vectors.transpose() * sin_op * qubit.vectors;

  const double f_R = basis.f_R();
  const double g2 = std::pow(basis.lambda3 * basis.phi_zpf_R, 2);

  PerturbedSpectrum out;
  out.flux = flux;
  out.m0 = m0;
  out.n_max = opt.n_max;
  out.min_denominator = std::numeric_limits<double>::infinity();
  out.levels.reserve(static_cast<std::size_t>(opt.n_max + 1) * dq);

  for (int n = 0; n <= opt.n_max; ++n) {
    for (int mu = 0; mu < dq; ++mu) {
      PerturbedLevel lv;
      lv.n = n;
      lv.mu = mu;
      lv.epsilon = f_R * n + eps(mu);
      lv.first_order = E_J * g2 * (n + 0.5) * cos_mu(mu, mu);

      double second = 0.0;
      double last_term = 0.0;
      for (int mp = 0; mp < dq; ++mp) {
        if (mp == mu) continue;
        const double d = eps(mu) - eps(mp);
        const double denom = d * d - f_R * f_R;
        out.min_denominator = std::min(out.min_denominator, std::abs(denom));
        const double term = E_J * E_J * g2 * ((2.0 * n + 1.0) * d + f_R) / denom *
                            sin_mu(mp, mu) * sin_mu(mp, mu);
        second += term;
        last_term = term;
      }
      lv.second_order = second;
      lv.delta = lv.first_order + lv.second_order;
      if (mu <= 3 && second != 0.0)
        out.tail_ratio = std::max(out.tail_ratio, std::abs(last_term / second));
      out.levels.push_back(lv);
    }
  }

  if (out.min_denominator < opt.divergence_threshold) {
    out.divergent = true;
    out.warnings.emplace_back("perturbation theory divergent: resonant denominator " +
                              std::to_string(out.min_denominator) + " GHz^2");
  }
  return out;
}

double perturbative_chi(const PerturbedSpectrum& s) {
  return (s.energy(1, 1) - s.energy(0, 1)) - (s.energy(1, 0) - s.energy(0, 0));
}

}  // namespace dressq
