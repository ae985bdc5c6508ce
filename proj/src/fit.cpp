#include "dressq/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "dressq/csv.hpp"
#include "dressq/parallel.hpp"
#include "dressq/spectrum.hpp"

namespace dressq {

namespace {
constexpr double kSigmaFloor = 1e-4;  // GHz
const double kLogLo = std::log(0.2);
const double kLogHi = std::log(5.0);

struct IndexedFlux {
  std::vector<double> unique;
  std::vector<std::size_t> of_row;
};

IndexedFlux index_flux(const SpectroscopyDataset& data) {
  IndexedFlux ix;
  ix.of_row.reserve(data.rows.size());
  for (const auto& r : data.rows) {
    auto it = std::find(ix.unique.begin(), ix.unique.end(), r.flux_over_phi0);
    if (it == ix.unique.end()) {
      ix.unique.push_back(r.flux_over_phi0);
      it = ix.unique.end() - 1;
    }
    ix.of_row.push_back(static_cast<std::size_t>(it - ix.unique.begin()));
  }
  return ix;
}

double capped_objective(const SpectroscopyDataset& data, const IndexedFlux& ix, const CircuitParams& p,
                        const TruncationScheme& trunc, double cap, int threads) {
  const std::vector<ObservableSet> model = model_observables(p, ix.unique, trunc, threads);
  double sum = 0.0;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& r = data.rows[i];
    // Quadratic inside the cap, linear beyond it: outliers lose weight but
    // still point downhill.
    const double z = std::abs(model[ix.of_row[i]].get(r.observable) - r.value) / r.sigma;
    sum += z <= cap ? z * z : cap * (2.0 * z - cap);
  }
  return sum;
}
}  // namespace

std::string_view observable_name(Observable o) {
  switch (o) {
    case Observable::f_ge: return "f_ge";
    case Observable::f_01: return "f_01";
    case Observable::chi: return "chi";
  }
  return "?";
}

Observable parse_observable(std::string_view name) {
  for (auto o : {Observable::f_ge, Observable::f_01, Observable::chi})
    if (observable_name(o) == name) return o;
  throw ValidationError("unknown observable: '" + std::string(name) + "'");
}

double ObservableSet::get(Observable o) const {
  switch (o) {
    case Observable::f_ge: return f_ge;
    case Observable::f_01: return f_01;
    case Observable::chi: return chi;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

SpectroscopyDataset ingest_csv(std::string_view text) {
  SpectroscopyDataset d;
  bool header_seen = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const auto f = split_csv_line(line);
    const std::string where = " (line " + std::to_string(line_no) + ")";
    if (!header_seen) {
      if (f != std::vector<std::string>{"flux", "observable", "value_GHz", "sigma_GHz"})
        throw ValidationError("bad header: expected flux,observable,value_GHz,sigma_GHz" + where);
      header_seen = true;
      continue;
    }
    if (f.size() != 4) throw ValidationError("expected 4 fields" + where);
    SpectroscopyRow r;
    r.flux_over_phi0 = parse_double(f[0], "flux" + where);
    r.observable = parse_observable(f[1]);
    r.value = parse_double(f[2], "value_GHz" + where);
    r.sigma = parse_double(f[3], "sigma_GHz" + where);
    if (!(r.sigma > 0.0)) throw ValidationError("sigma must be positive" + where);
    d.rows.push_back(r);
  }
  if (!header_seen) throw ValidationError("bad header: empty dataset");
  std::stable_sort(d.rows.begin(), d.rows.end(),
                   [](const auto& a, const auto& b) { return a.flux_over_phi0 < b.flux_over_phi0; });
  return d;
}

std::vector<ObservableSet> model_observables(const CircuitParams& params, const std::vector<double>& flux,
                                             const TruncationScheme& trunc, int threads) {
  const SpectrumSolver solver(params, trunc);
  std::vector<ObservableSet> out(flux.size());
  parallel_for(flux.size(), threads, [&](std::size_t i) {
    const LabeledSpectrum s = solver.solve(FluxPoint::from_flux_quanta(flux[i]));
    const TransitionTable t = transitions(s);
    out[i] = {t.f_ge, t.f_01, dispersive_shift(s)};
  });
  return out;
}

FixedMask make_mask(const std::vector<std::string>& names) {
  FixedMask m{};
  for (const auto& n : names) {
    const auto* it = std::find(std::begin(kParamNames), std::end(kParamNames), n);
    if (it == std::end(kParamNames)) throw ValidationError("unknown parameter name: '" + n + "'");
    m[static_cast<std::size_t>(it - std::begin(kParamNames))] = true;
  }
  return m;
}

double fit_objective(const SpectroscopyDataset& data, const CircuitParams& p, const TruncationScheme& trunc,
                     double cap, int threads) {
  return capped_objective(data, index_flux(data), p, trunc, cap, threads);
}

FitResult fit_params(const SpectroscopyDataset& data, const CircuitParams& initial, const FixedMask& fixed,
                     const TruncationScheme& trunc, const FitOptions& opt) {
  if (data.rows.empty()) throw ValidationError("fit needs at least one data row");
  initial.validate();
  trunc.validate();
  const IndexedFlux ix = index_flux(data);

  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < fixed.size(); ++i)
    if (!fixed[i]) {
      if (!(param_value(initial, kParamNames[i]) > 0.0))
        throw ValidationError("free parameter " + std::string(kParamNames[i]) + " needs a positive initial value");
      free.push_back(i);
    }

  FitResult res;
  res.fixed = fixed;

  auto to_params = [&](const std::vector<double>& y) {
    CircuitParams p = initial;
    for (std::size_t k = 0; k < free.size(); ++k) {
      const auto name = kParamNames[free[k]];
      param_ref(p, name) = param_value(initial, name) * std::exp(y[k]);
    }
    return p;
  };
  auto objective = [&](const std::vector<double>& y) {
    ++res.evaluations;
    try {
      return capped_objective(data, ix, to_params(y), trunc, opt.residual_cap, opt.threads);
    } catch (const ValidationError&) {
      return std::numeric_limits<double>::infinity();
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  auto clamp = [](std::vector<double>& y) {
    for (double& v : y) v = std::clamp(v, kLogLo, kLogHi);
  };

  const std::size_t n = free.size();
  std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) simplex[k + 1][k] = opt.initial_step;
  std::vector<double> fval(n + 1);
  for (std::size_t k = 0; k <= n; ++k) fval[k] = objective(simplex[k]);

  if (n == 0) {
    res.params = initial;
    res.residual = fval[0];
    res.converged = true;
  } else {
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fval[a] < fval[b]; });
      std::vector<std::vector<double>> s2;
      std::vector<double> f2;
      for (auto i : order) {
        s2.push_back(simplex[i]);
        f2.push_back(fval[i]);
      }
      simplex.swap(s2);
      fval.swap(f2);
    };
    auto affine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
      std::vector<double> out(n);
      for (std::size_t k = 0; k < n; ++k) out[k] = a[k] + t * (b[k] - a[k]);
      clamp(out);
      return out;
    };

    sort_simplex();
    for (res.iterations = 0; res.iterations < opt.max_iterations;) {
      ++res.iterations;
      std::vector<double> c(n, 0.0);
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t k = 0; k < n; ++k) c[k] += simplex[v][k] / static_cast<double>(n);

      const auto xr = affine(c, simplex[n], -alpha);
      const double fr = objective(xr);
      if (fr < fval[0]) {
        const auto xe = affine(c, xr, gamma);
        const double fe = objective(xe);
        if (fe < fr) {
          simplex[n] = xe;
          fval[n] = fe;
        } else {
          simplex[n] = xr;
          fval[n] = fr;
        }
      } else if (fr < fval[n - 1]) {
        simplex[n] = xr;
        fval[n] = fr;
      } else {
        const bool outside = fr < fval[n];
        const auto xc = outside ? affine(c, xr, rho) : affine(c, simplex[n], rho);
        const double fc = objective(xc);
        if (outside ? fc <= fr : fc < fval[n]) {
          simplex[n] = xc;
          fval[n] = fc;
        } else {
          for (std::size_t v = 1; v <= n; ++v) {
            simplex[v] = affine(simplex[0], simplex[v], sigma);
            fval[v] = objective(simplex[v]);
          }
        }
      }
      sort_simplex();
      res.history.push_back(fval[0]);

      double spread = 0.0;
      for (std::size_t v = 1; v <= n; ++v)
        for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(simplex[v][k] - simplex[0][k]));
      if (fval[n] - fval[0] <= 1e-9 * std::max(1.0, std::abs(fval[0])) && spread < 1e-7) {
        res.converged = true;
        break;
      }
      const auto it = static_cast<std::size_t>(res.iterations);
      const auto w = static_cast<std::size_t>(opt.stall_window);
      if (it > w) {
        const double before = res.history[it - 1 - w];
        if (before - fval[0] <= opt.stall_tolerance * std::abs(before)) break;
      }
    }
    res.params = to_params(simplex[0]);
    res.residual = fval[0];
  }

  const std::vector<ObservableSet> model = model_observables(res.params, ix.unique, trunc, opt.threads);
  for (auto o : {Observable::f_ge, Observable::f_01, Observable::chi}) {
    double ss = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < data.rows.size(); ++i)
      if (data.rows[i].observable == o) {
        const double d = model[ix.of_row[i]].get(o) - data.rows[i].value;
        ss += d * d;
        ++count;
      }
    if (count > 0) res.rms.emplace_back(std::string(observable_name(o)), std::sqrt(ss / count));
  }
  return res;
}

SpectroscopyDataset synthetic_dataset(const CircuitParams& truth, const TruncationScheme& trunc, int points,
                                      double flux_lo, double flux_hi, double noise, std::uint64_t seed,
                                      int threads) {
  if (!(noise >= 0.0)) throw ValidationError("noise level must be non-negative");
  const std::vector<double> flux = flux_grid(flux_lo, flux_hi, points);
  const std::vector<ObservableSet> model = model_observables(truth, flux, trunc, threads);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectroscopyDataset d;
  for (std::size_t i = 0; i < flux.size(); ++i)
    for (auto o : {Observable::f_ge, Observable::f_01, Observable::chi}) {
      const double v = model[i].get(o);
      const double eps = noise * gauss(rng);
      d.rows.push_back({flux[i], o, v * (1.0 + eps), std::max(noise * std::abs(v), kSigmaFloor)});
    }
  return d;
}

void write_dataset_csv(std::ostream& os, const SpectroscopyDataset& d) {
  const auto old = os.precision(15);
  os << "flux,observable,value_GHz,sigma_GHz\n";
  for (const auto& r : d.rows)
    os << r.flux_over_phi0 << ',' << observable_name(r.observable) << ',' << r.value << ',' << r.sigma << '\n';
  os.precision(old);
}

void write_overlay_csv(std::ostream& os, const SpectroscopyDataset& d, const CircuitParams& p,
                       const TruncationScheme& trunc, int threads) {
  const IndexedFlux ix = index_flux(d);
  const std::vector<ObservableSet> model = model_observables(p, ix.unique, trunc, threads);
  const auto old = os.precision(15);
  os << "flux,observable,measured_GHz,sigma_GHz,model_GHz,residual_sigma\n";
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    const auto& r = d.rows[i];
    const double m = model[ix.of_row[i]].get(r.observable);
    os << r.flux_over_phi0 << ',' << observable_name(r.observable) << ',' << r.value << ',' << r.sigma << ','
       << m << ',' << (m - r.value) / r.sigma << '\n';
  }
  os.precision(old);
}

void write_fit_report(std::ostream& os, const FitResult& r) {
  std::ostringstream s;
  s.precision(10);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto name = kParamNames[i];
    s << name << " = " << param_value(r.params, name) << ' ' << param_unit(name) << (r.fixed[i] ? "  # fixed" : "")
      << '\n';
  }
  s << "residual = " << r.residual << '\n'
    << "iterations = " << r.iterations << '\n'
    << "evaluations = " << r.evaluations << '\n'
    << "converged: " << (r.converged ? "true" : "false") << '\n';
  for (const auto& [name, v] : r.rms) s << "rms_" << name << "_GHz = " << v << '\n';
  os << s.str();
}

}  // namespace dressq
