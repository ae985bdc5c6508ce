#include "dressq/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "dressq/parallel.hpp"

namespace dressq {

namespace {
constexpr char kQubitLetters[] = {'g', 'e', 'f', 'h'};
}

std::string state_label(int n, int mu) {
  if (mu >= 0 && mu < 4) return std::to_string(n) + kQubitLetters[mu];
  return std::to_string(n) + ":" + std::to_string(mu);
}

StateLabel parse_state(std::string_view token) {
  StateLabel s;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, s.n);
  if (ec != std::errc{} || ptr == first || s.n < 0)
    throw ValidationError("malformed state token: '" + std::string(token) + "'");
  const std::string_view rest(ptr, last - ptr);
  if (rest.size() == 1) {
    const auto* it = std::find(std::begin(kQubitLetters), std::end(kQubitLetters), rest[0]);
    if (it == std::end(kQubitLetters))
      throw ValidationError("unknown qubit state letter in '" + std::string(token) + "'");
    s.mu = static_cast<int>(it - std::begin(kQubitLetters));
    return s;
  }
  if (rest.size() > 1 && rest[0] == ':') {
    auto [p2, ec2] = std::from_chars(rest.data() + 1, last, s.mu);
    if (ec2 == std::errc{} && p2 == last && s.mu >= 0) return s;
  }
  throw ValidationError("malformed state token: '" + std::string(token) + "'");
}

int LabeledSpectrum::index_of(int n, int mu) const {
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i].n == n && levels[i].mu == mu) return static_cast<int>(i);
  return -1;
}

double LabeledSpectrum::energy(int n, int mu) const {
  const int i = index_of(n, mu);
  if (i < 0) throw ValidationError("state " + state_label(n, mu) + " not in the truncated window");
  return levels[i].energy;
}

SpectrumSolver::SpectrumSolver(const CircuitParams& params, const TruncationScheme& trunc,
                               SineConvention convention)
    : params_(params), basis_(solve_normal_modes(params)), blocks_(basis_, trunc, convention) {}

Eigensystem SpectrumSolver::decoupled_qubit(FluxPoint flux) const {
  return diagonalize(blocks_.qubit_block(params_.E_J, flux), true);
}

std::vector<DecoupledLabel> SpectrumSolver::decoupled_labels(FluxPoint flux) const {
  const auto& t = blocks_.truncation();
  const Eigen::VectorXd eps =
      diagonalize(blocks_.qubit_block(params_.E_J, flux), false).values;
  std::vector<DecoupledLabel> labels;
  labels.reserve(t.total_dim());
  for (int n = 0; n < t.readout_dim(); ++n)
    for (int mu = 0; mu < t.qubit_dim(); ++mu)
      labels.push_back({blocks_.f_R() * n + eps(mu), n, mu});
  return labels;
}

LabeledSpectrum SpectrumSolver::solve(FluxPoint flux, bool with_vectors) const {
  const Eigensystem es = diagonalize(blocks_.hamiltonian(params_.E_J, flux), with_vectors);
  return label_spectrum(es, decoupled_labels(flux), flux, blocks_.truncation());
}

LabeledSpectrum label_spectrum(const Eigensystem& coupled, const std::vector<DecoupledLabel>& labels,
                               FluxPoint flux, const TruncationScheme& trunc) {
  const LabelAssignment a = assign_labels(coupled.values, labels);
  LabeledSpectrum spec;
  spec.flux = flux;
  spec.trunc = trunc;
  spec.label_cost = a.total_cost;
  spec.levels.reserve(coupled.values.size());
  for (Eigen::Index i = 0; i < coupled.values.size(); ++i) {
    const auto& lab = labels[a.label_of_level[i]];
    spec.levels.push_back({coupled.values(i), lab.n, lab.mu});
  }
  spec.eigvecs = coupled.vectors;
  return spec;
}

TransitionTable transitions(const LabeledSpectrum& spec) {
  const double e0g = spec.energy(0, 0);
  return {spec.energy(1, 0) - e0g, spec.energy(0, 1) - e0g};
}

double transition_frequency(const LabeledSpectrum& spec, StateLabel from, StateLabel to) {
  return spec.energy(to.n, to.mu) - spec.energy(from.n, from.mu);
}

double dispersive_shift(const LabeledSpectrum& spec) {
  return (spec.energy(1, 1) - spec.energy(0, 1)) - (spec.energy(1, 0) - spec.energy(0, 0));
}

double kerr(const LabeledSpectrum& spec, int mu) {
  if (spec.trunc.n0 < 2) throw ValidationError("kerr needs n0 >= 2");
  return (spec.energy(2, mu) - spec.energy(1, mu)) - (spec.energy(1, mu) - spec.energy(0, mu));
}

std::vector<double> flux_grid(double start, double stop, int points) {
  if (points < 1) throw ValidationError("flux grid needs at least one point");
  if (points == 1) return {start};
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

std::vector<LabeledSpectrum> sweep(const CircuitParams& params, const std::vector<double>& flux_over_phi0,
                                   const TruncationScheme& trunc, int threads) {
  const SpectrumSolver solver(params, trunc);
  std::vector<LabeledSpectrum> out(flux_over_phi0.size());
  parallel_for(flux_over_phi0.size(), threads, [&](std::size_t i) {
    out[i] = solver.solve(FluxPoint::from_flux_quanta(flux_over_phi0[i]));
  });
  return out;
}

void write_spectrum_csv(std::ostream& os, const std::vector<LabeledSpectrum>& spectra, bool absolute,
                        int max_levels) {
  const auto old_precision = os.precision(12);
  os << "flux_over_phi0,n,mu,energy_GHz\n";
  for (const auto& spec : spectra) {
    const double ref = absolute ? 0.0 : spec.ground_energy();
    const std::size_t count =
        max_levels < 0 ? spec.levels.size()
                       : std::min(spec.levels.size(), static_cast<std::size_t>(max_levels));
    for (std::size_t i = 0; i < count; ++i) {
      const auto& lv = spec.levels[i];
      os << spec.flux.flux_quanta() << ',' << lv.n << ',' << lv.mu << ',' << lv.energy - ref << '\n';
    }
  }
  os.precision(old_precision);
}

ConvergenceReport convergence_report(const CircuitParams& params, FluxPoint flux,
                                     const std::vector<TruncationScheme>& ladder, int tracked_levels,
                                     double tolerance_GHz) {
  ConvergenceReport rep;
  rep.tolerance = tolerance_GHz;
  const NormalModeBasis basis = solve_normal_modes(params);
  for (const auto& t : ladder) {
    if (t.total_dim() < tracked_levels)
      throw ValidationError("truncation smaller than the number of tracked levels");
    const Eigen::VectorXd all =
        diagonalize(HamiltonianBlocks(basis, t).hamiltonian(params.E_J, flux), false).values;
    ConvergenceRow row;
    row.trunc = t;
    row.energies = all.head(tracked_levels);
    row.max_change = rep.rows.empty()
                         ? std::numeric_limits<double>::quiet_NaN()
                         : (row.energies - rep.rows.back().energies).cwiseAbs().maxCoeff();
    if (rep.converged_at < 0 && !rep.rows.empty() && row.max_change < tolerance_GHz)
      rep.converged_at = static_cast<int>(rep.rows.size());
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace dressq
