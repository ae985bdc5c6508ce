#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dressq/hamiltonian.hpp"
#include "dressq/params.hpp"

namespace dressq {

enum class Observable { f_ge, f_01, chi };

std::string_view observable_name(Observable o);
Observable parse_observable(std::string_view name);  // throws ValidationError

struct SpectroscopyRow {
  double flux_over_phi0 = 0.0;
  Observable observable = Observable::f_ge;
  double value = 0.0;  // GHz
  double sigma = 0.0;  // GHz, > 0
};

struct SpectroscopyDataset {
  std::vector<SpectroscopyRow> rows;  // sorted by flux, stable otherwise
};

/// Header `flux,observable,value_GHz,sigma_GHz`; blank lines and lines that
/// start with '#' are skipped. Throws ValidationError on an unknown
/// observable, a non-numeric field, a wrong field count, sigma <= 0 or a
/// non-finite flux.
SpectroscopyDataset ingest_csv(std::string_view text);

/// Model values of the three observables at one flux point.
struct ObservableSet {
  double f_ge = 0.0;
  double f_01 = 0.0;
  double chi = 0.0;
  double get(Observable o) const;
};

/// Exact-diagonalization model of every distinct flux point of `data`, in
/// the order of first appearance.
std::vector<ObservableSet> model_observables(const CircuitParams& params, const std::vector<double>& flux_over_phi0,
                                             const TruncationScheme& trunc, int threads = 1);

/// Mask over kParamNames; true means held at the initial value.
using FixedMask = std::array<bool, 6>;
FixedMask make_mask(const std::vector<std::string>& fixed_names);  // throws on an unknown name

struct FitOptions {
  int max_iterations = 3000;
  int stall_window = 50;
  double stall_tolerance = 1e-10;  // relative improvement over the window
  double initial_step = 0.05;      // simplex edge in log-parameter space
  double residual_cap = 5.0;       // in sigma
  int threads = 1;
};

struct FitResult {
  CircuitParams params;
  FixedMask fixed{};
  double residual = 0.0;  // capped weighted sum of squares, see fit_objective
  std::vector<std::pair<std::string, double>> rms;  // per observable, GHz
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> history;  // best residual after each iteration
};

/// Weighted least squares with normalized residuals z = (model - value)/sigma;
/// each row adds z^2 up to |z| = cap and cap (2|z| - cap) beyond it.
double fit_objective(const SpectroscopyDataset& data, const CircuitParams& params, const TruncationScheme& trunc,
                     double residual_cap = 5.0, int threads = 1);

/// Nelder-Mead over the log of the free parameters, each confined to
/// [0.2, 5] times its initial value. Stalls return the best point with
/// converged = false.
FitResult fit_params(const SpectroscopyDataset& data, const CircuitParams& initial, const FixedMask& fixed,
                     const TruncationScheme& trunc, const FitOptions& options = {});

/// `points` flux values evenly spread over [flux_lo, flux_hi], all three
/// observables each, with multiplicative N(0, noise) errors and
/// sigma = max(noise |v|, 1e-4 GHz).
SpectroscopyDataset synthetic_dataset(const CircuitParams& truth, const TruncationScheme& trunc, int points = 41,
                                      double flux_lo = 0.0, double flux_hi = 0.5, double noise = 0.005,
                                      std::uint64_t seed = 20240611, int threads = 1);

void write_dataset_csv(std::ostream& os, const SpectroscopyDataset& data);

/// Columns flux,observable,measured_GHz,sigma_GHz,model_GHz,residual_sigma.
void write_overlay_csv(std::ostream& os, const SpectroscopyDataset& data, const CircuitParams& params,
                       const TruncationScheme& trunc, int threads = 1);

/// Key-value summary of a fit.
void write_fit_report(std::ostream& os, const FitResult& r);

}  // namespace dressq
