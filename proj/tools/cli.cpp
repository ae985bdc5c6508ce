#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dressq/bare_oracle.hpp"
#include "dressq/csv.hpp"
#include "dressq/fit.hpp"
#include "dressq/normal_modes.hpp"
#include "dressq/perturbation.hpp"
#include "dressq/scattering.hpp"
#include "dressq/spectrum.hpp"

namespace dressq::cli {

namespace {

struct Options {
  std::string config = "deviceA";
  double flux = std::nan("");
  std::string flux_range;
  int n0 = 5;
  int m0 = 20;
  int threads = 1;
  std::string output;

  // per-subcommand extras
  std::string method = "exact";
  std::vector<std::string> states;
  std::string freq_range;
  double qr = PortConfig{}.Q_R;
  double qq = PortConfig{}.Q_Q;
  int levels = -1;
  bool absolute = false;
  double tol_mhz = 1.0;
  std::vector<int> m0_ladder{10, 15, 20, 25, 30, 35, 40};
  int nr = 10;
  int nq = 40;
  std::string data;
  std::string init;
  std::vector<std::string> fix{"C_r"};
  std::string overlay;
  int max_iter = FitOptions{}.max_iterations;
  std::string synthesize;
  int points = 41;
  double noise = 0.005;
  std::uint64_t seed = 20240611;
};

CircuitParams resolve_config(const std::string& spec) {
  if (auto p = builtin_device(spec)) return *p;
  return load_params_file(spec);
}

struct Range {
  double lo = 0.0, hi = 0.0;
  int n = 0;
};

Range parse_range(const std::string& text, const char* what) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
  if (parts.size() != 3) throw ValidationError(std::string(what) + " must look like start:stop:points");
  Range r;
  r.lo = parse_double(parts[0], what);
  r.hi = parse_double(parts[1], what);
  const double n = parse_double(parts[2], what);
  if (n < 1 || n != std::floor(n) || n > 1e7) throw ValidationError(std::string(what) + " needs a positive integer point count");
  r.n = static_cast<int>(n);
  return r;
}

TruncationScheme truncation(const Options& o) {
  TruncationScheme t{o.n0, o.m0};
  t.validate();
  return t;
}

double require_flux(const Options& o) {
  if (std::isnan(o.flux)) throw ValidationError("--flux is required");
  if (!std::isfinite(o.flux)) throw ValidationError("--flux must be finite");
  return o.flux;
}

/// Grid from --flux-range, else the single --flux value.
std::vector<double> flux_values(const Options& o) {
  if (!o.flux_range.empty()) {
    const Range r = parse_range(o.flux_range, "--flux-range");
    return flux_grid(r.lo, r.hi, r.n);
  }
  return {require_flux(o)};
}

std::string flux_spec(const Options& o) {
  if (!o.flux_range.empty()) return o.flux_range;
  if (std::isnan(o.flux)) return {};
  std::ostringstream s;
  s.precision(17);
  s << o.flux;
  return s.str();
}

RunManifest manifest(const std::string& sub, const Options& o, const CircuitParams& p) {
  RunManifest m;
  m.subcommand = sub;
  m.params = p;
  m.trunc = {o.n0, o.m0};
  m.flux = flux_spec(o);
  if (!o.output.empty()) m.outputs.push_back(o.output);
  return m;
}

/// Writes `body` with a manifest preamble to --output, or to `out`.
void emit(const Options& o, std::ostream& out, const RunManifest& m, const std::function<void(std::ostream&)>& body) {
  if (o.output.empty()) {
    m.write(out);
    body(out);
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw ValidationError("cannot open output file: " + o.output);
  m.write(f);
  body(f);
  if (!f) throw ValidationError("failed writing output file: " + o.output);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open file: " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void cmd_normal_modes(const Options& o, std::ostream& out) {
  const CircuitParams p = resolve_config(o.config);
  const NormalModeBasis b = solve_normal_modes(p);
  const std::vector<std::tuple<std::string, double, std::string>> rows = {
      {"lambda1", b.lambda1, ""},         {"lambda2", b.lambda2, ""},
      {"lambda3", b.lambda3, ""},         {"lambda4", b.lambda4, ""},
      {"one_minus_lambda1", 1.0 - b.lambda1, ""}, {"one_minus_lambda4", 1.0 - b.lambda4, ""},
      {"C_R", b.C_R, "fF"},               {"C_Q", b.C_Q, "fF"},
      {"L_R", b.L_R, "nH"},               {"L_Q", b.L_Q, "nH"},
      {"f_R", b.f_R(), "GHz"},            {"f_Q", b.f_Q(), "GHz"},
      {"Z_R", b.Z_R, "ohm"},              {"Z_Q", b.Z_Q, "ohm"},
      {"phi_zpf_R", b.phi_zpf_R, ""},     {"phi_zpf_Q", b.phi_zpf_Q, ""},
      {"L_s_over_L_r", p.L_s / p.L_r, ""}};
  std::ostringstream s;
  s.precision(10);
  for (const auto& [k, v, u] : rows) s << k << " = " << v << (u.empty() ? "" : " " + u) << '\n';
  out << s.str();
  if (!o.output.empty())
    emit(o, out, manifest("normal-modes", o, p), [&](std::ostream& f) {
      f.precision(17);
      f << "quantity,value,unit\n";
      for (const auto& [k, v, u] : rows) f << k << ',' << v << ',' << u << '\n';
    });
}

void cmd_check(const Options& o, std::ostream& out) {
  const CircuitParams p = resolve_config(o.config);
  out << format_report(check_applicability(p, solve_normal_modes(p)));
}

void cmd_spectrum(const Options& o, std::ostream& out) {
  const CircuitParams p = resolve_config(o.config);
  const SpectrumSolver solver(p, truncation(o));
  const LabeledSpectrum s = solver.solve(FluxPoint::from_flux_quanta(require_flux(o)));
  const int count = o.levels < 0 ? 10 : o.levels;
  if (o.output.empty()) {
    std::ostringstream t;
    t << std::fixed << std::setprecision(9);
    t << "# level  state  energy_GHz (relative to 0g)\n";
    for (int i = 0; i < std::min<int>(count, static_cast<int>(s.levels.size())); ++i)
      t << std::setw(5) << i << "  " << std::setw(5) << state_label(s.levels[i].n, s.levels[i].mu) << "  "
        << s.levels[i].energy - s.ground_energy() << '\n';
    out << t.str();
    return;
  }
  emit(o, out, manifest("spectrum", o, p), [&](std::ostream& f) { write_spectrum_csv(f, {s}, o.absolute, o.levels); });
}

void cmd_sweep(const Options& o, std::ostream& out) {
  if (o.flux_range.empty()) throw ValidationError("--flux-range is required");
  const CircuitParams p = resolve_config(o.config);
  const auto spectra = sweep(p, flux_values(o), truncation(o), o.threads);
  emit(o, out, manifest("sweep", o, p),
       [&](std::ostream& f) { write_spectrum_csv(f, spectra, o.absolute, o.levels); });
}

void cmd_chi(const Options& o, std::ostream& out, std::ostream& err) {
  const CircuitParams p = resolve_config(o.config);
  const TruncationScheme t = truncation(o);
  const std::vector<double> flux = flux_values(o);
  std::vector<double> chi(flux.size());
  if (o.method == "exact") {
    const auto spectra = sweep(p, flux, t, o.threads);
    for (std::size_t i = 0; i < flux.size(); ++i) chi[i] = dispersive_shift(spectra[i]);
  } else {
    const NormalModeBasis b = solve_normal_modes(p);
    bool warned = false;
    for (std::size_t i = 0; i < flux.size(); ++i) {
      const auto ps = perturbative_spectrum(b, p.E_J, FluxPoint::from_flux_quanta(flux[i]), t.m0);
      chi[i] = perturbative_chi(ps);
      if (ps.divergent && !warned) {
        err << "warning: " << ps.warnings.front() << '\n';
        warned = true;
      }
    }
  }
  if (o.flux_range.empty() && o.output.empty()) {
    std::ostringstream s;
    s.precision(10);
    s << "chi_GHz = " << chi[0] << '\n';
    out << s.str();
    return;
  }
  auto m = manifest("chi", o, p);
  m.extra.emplace_back("method", o.method);
  emit(o, out, m, [&](std::ostream& f) {
    f.precision(15);
    f << "flux_over_phi0,chi_GHz\n";
    for (std::size_t i = 0; i < flux.size(); ++i) f << flux[i] << ',' << chi[i] << '\n';
  });
}

void cmd_kerr(const Options& o, std::ostream& out) {
  const CircuitParams p = resolve_config(o.config);
  const auto spectra = sweep(p, flux_values(o), truncation(o), o.threads);
  if (o.flux_range.empty() && o.output.empty()) {
    std::ostringstream s;
    s.precision(10);
    for (int mu = 0; mu < 4; ++mu)
      s << "kerr_" << state_label(0, mu).substr(1) << "_GHz = " << kerr(spectra[0], mu) << '\n';
    out << s.str();
    return;
  }
  emit(o, out, manifest("kerr", o, p), [&](std::ostream& f) {
    f.precision(15);
    f << "flux_over_phi0,mu,kerr_GHz\n";
    for (const auto& s : spectra)
      for (int mu = 0; mu < 4; ++mu) f << s.flux.flux_quanta() << ',' << mu << ',' << kerr(s, mu) << '\n';
  });
}

void cmd_convergence(const Options& o, std::ostream& out) {
  const CircuitParams p = resolve_config(o.config);
  std::vector<TruncationScheme> ladder;
  for (int m : o.m0_ladder) {
    TruncationScheme t{o.n0, m};
    t.validate();
    ladder.push_back(t);
  }
  const int levels = o.levels < 0 ? 10 : o.levels;
  const auto rep =
      convergence_report(p, FluxPoint::from_flux_quanta(require_flux(o)), ladder, levels, o.tol_mhz * 1e-3);
  auto m = manifest("convergence", o, p);
  m.extra.emplace_back("tolerance_MHz", std::to_string(o.tol_mhz));
  emit(o, out, m, [&](std::ostream& f) {
    f.precision(12);
    f << "n0,m0,dim,max_change_MHz\n";
    for (const auto& r : rep.rows)
      f << r.trunc.n0 << ',' << r.trunc.m0 << ',' << r.trunc.total_dim() << ',' << r.max_change * 1e3 << '\n';
    if (rep.converged())
      f << "# converged_at: " << rep.rows[rep.converged_at].trunc.n0 << ':' << rep.rows[rep.converged_at].trunc.m0
        << '\n';
    else
      f << "# converged_at: none\n";
  });
}

void cmd_oracle(const Options& o, std::ostream& out) {
  const CircuitParams p = resolve_config(o.config);
  const FluxPoint flux = FluxPoint::from_flux_quanta(require_flux(o));
  const int levels = o.levels < 0 ? 10 : o.levels;
  const TruncationScheme t = truncation(o);
  const BareTruncation bt{o.nr, o.nq};
  if (bt.nr < 0 || bt.nq < 0) throw ValidationError("--nr and --nq must be non-negative");
  if (t.total_dim() < levels || bt.total_dim() < levels) throw ValidationError("truncation smaller than --levels");
  const Eigen::VectorXd dressed =
      diagonalize(HamiltonianBlocks(solve_normal_modes(p), t).hamiltonian(p.E_J, flux), false).values;
  const Eigen::VectorXd bare = bare_basis_oracle(p, flux, bt);
  double worst = 0.0;
  auto m = manifest("oracle-check", o, p);
  m.extra.emplace_back("bare_truncation", "nr=" + std::to_string(bt.nr) + " nq=" + std::to_string(bt.nq));
  emit(o, out, m, [&](std::ostream& f) {
    f.precision(12);
    f << "level,dressed_GHz,bare_GHz,diff_MHz\n";
    for (int i = 0; i < levels; ++i) {
      const double d = dressed(i) - dressed(0);
      const double b = bare(i) - bare(0);
      worst = std::max(worst, std::abs(d - b));
      f << i << ',' << d << ',' << b << ',' << (d - b) * 1e3 << '\n';
    }
    f << "# max_abs_diff_MHz: " << worst * 1e3 << '\n';
  });
}

void cmd_scattering(const Options& o, std::ostream& out) {
  if (o.freq_range.empty()) throw ValidationError("--freq-range is required");
  const CircuitParams p = resolve_config(o.config);
  const Range fr = parse_range(o.freq_range, "--freq-range");
  if (!(fr.lo > 0.0) || !(fr.hi > 0.0)) throw ValidationError("--freq-range must be positive");
  const PortConfig ports{o.qr, o.qq};
  ports.validate();
  std::vector<StateLabel> states;
  for (const auto& s : o.states.empty() ? std::vector<std::string>{"0g"} : o.states) states.push_back(parse_state(s));

  const SpectrumSolver solver(p, truncation(o));
  const LabeledSpectrum spec = solver.solve(FluxPoint::from_flux_quanta(require_flux(o)), true);
  const ImpedanceModel model(spec, solver.basis());
  const auto results = scattering_sweep(model, ports, solver.basis(), states, flux_grid(fr.lo, fr.hi, fr.n), o.threads);
  auto m = manifest("scattering", o, p);
  std::ostringstream q;
  q.precision(17);
  q << "Q_R=" << ports.Q_R << " Q_Q=" << ports.Q_Q;
  m.extra.emplace_back("ports", q.str());
  m.extra.emplace_back("freq_range_GHz", o.freq_range);
  emit(o, out, m, [&](std::ostream& f) { write_scattering_csv(f, results); });
}

void cmd_fit(const Options& o, std::ostream& out) {
  const TruncationScheme t = truncation(o);
  if (!o.synthesize.empty()) {
    const CircuitParams truth = resolve_config(o.config);
    const auto d = synthetic_dataset(truth, t, o.points, 0.0, 0.5, o.noise, o.seed, o.threads);
    std::ofstream f(o.synthesize);
    if (!f) throw ValidationError("cannot open output file: " + o.synthesize);
    auto m = manifest("fit", o, truth);
    m.outputs = {o.synthesize};
    m.extra.emplace_back("synthetic", "points=" + std::to_string(o.points) + " noise=" + std::to_string(o.noise) +
                                          " seed=" + std::to_string(o.seed));
    m.write(f);
    write_dataset_csv(f, d);
    out << "wrote " << d.rows.size() << " rows to " << o.synthesize << '\n';
    return;
  }
  if (o.data.empty()) throw ValidationError("--data is required");
  const SpectroscopyDataset data = ingest_csv(read_file(o.data));
  const CircuitParams init = resolve_config(o.init.empty() ? o.config : o.init);
  FitOptions fo;
  fo.threads = o.threads;
  fo.max_iterations = o.max_iter;
  const FitResult r = fit_params(data, init, make_mask(o.fix), t, fo);
  write_fit_report(out, r);
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) throw ValidationError("cannot open output file: " + o.output);
    auto m = manifest("fit", o, r.params);
    m.write(f);
    f << to_config_text(r.params);
  }
  if (!o.overlay.empty()) {
    std::ofstream f(o.overlay);
    if (!f) throw ValidationError("cannot open output file: " + o.overlay);
    auto m = manifest("fit", o, r.params);
    m.outputs = {o.overlay};
    m.write(f);
    write_overlay_csv(f, data, r.params, t, o.threads);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dressed normal-mode spectra, scattering and fits for fluxonium-resonator circuits", "dressq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;

  auto common = [&](CLI::App* s, bool with_flux, bool with_trunc) {
    s->add_option("--config", o.config, "Config file or built-in name (deviceA, deviceB)");
    if (with_flux) {
      s->add_option("--flux", o.flux, "External flux in units of Phi_0");
      s->add_option("--flux-range", o.flux_range, "start:stop:points in units of Phi_0");
    }
    if (with_trunc) {
      s->add_option("--n0", o.n0, "Readout Fock cutoff");
      s->add_option("--m0", o.m0, "Qubit Fock cutoff");
      s->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    }
    s->add_option("--output", o.output, "Output path (CSV unless noted)");
  };

  std::function<void()> action;
  auto sub = [&](const char* name, const char* help, auto fn) {
    CLI::App* s = app.add_subcommand(name, help);
    s->callback([&, fn] { action = fn; });
    return s;
  };

  auto* nm = sub("normal-modes", "Normal-mode coefficients and mode parameters", [&] { cmd_normal_modes(o, out); });
  common(nm, false, false);
  auto* ck = sub("check", "Applicability diagnostics", [&] { cmd_check(o, out); });
  common(ck, false, false);

  auto* sp = sub("spectrum", "Labeled spectrum at one flux point", [&] { cmd_spectrum(o, out); });
  common(sp, true, true);
  sp->add_option("--levels", o.levels, "Number of levels to print or write");
  sp->add_flag("--absolute", o.absolute, "Absolute energies instead of relative to 0g");

  auto* sw = sub("sweep", "Labeled spectra over a flux range", [&] { cmd_sweep(o, out); });
  common(sw, true, true);
  sw->add_option("--levels", o.levels, "Levels per flux point (default all)");
  sw->add_flag("--absolute", o.absolute, "Absolute energies instead of relative to 0g");

  auto* ch = sub("chi", "Dispersive shift", [&] { cmd_chi(o, out, err); });
  common(ch, true, true);
  ch->add_option("--method", o.method, "exact or perturbative")->check(CLI::IsMember({"exact", "perturbative"}));

  auto* ke = sub("kerr", "Readout Kerr shift per qubit state", [&] { cmd_kerr(o, out); });
  common(ke, true, true);

  auto* cv = sub("convergence", "Eigenvalue change along a truncation ladder", [&] { cmd_convergence(o, out); });
  common(cv, true, true);
  cv->add_option("--levels", o.levels, "Tracked levels (default 10)");
  cv->add_option("--tol-mhz", o.tol_mhz, "Convergence tolerance in MHz");
  cv->add_option("--m0-ladder", o.m0_ladder, "Qubit cutoffs to visit")->delimiter(',');

  auto* oc = sub("oracle-check", "Compare against the bare-basis diagonalization", [&] { cmd_oracle(o, out); });
  common(oc, true, true);
  oc->add_option("--levels", o.levels, "Compared levels (default 10)");
  oc->add_option("--nr", o.nr, "Bare readout cutoff");
  oc->add_option("--nq", o.nq, "Bare qubit cutoff");

  auto* sc = sub("scattering", "State-dependent scattering matrix sweep", [&] { cmd_scattering(o, out); });
  common(sc, true, true);
  sc->add_option("--state", o.states, "Prepared state, e.g. 0g, 1e, 2:5 (repeatable)");
  sc->add_option("--freq-range", o.freq_range, "start:stop:points in GHz");
  sc->add_option("--qr", o.qr, "Readout port quality factor");
  sc->add_option("--qq", o.qq, "Qubit port quality factor");

  auto* ft = sub("fit", "Fit circuit parameters to spectroscopy data", [&] { cmd_fit(o, out); });
  common(ft, false, true);
  ft->add_option("--data", o.data, "CSV with flux,observable,value_GHz,sigma_GHz");
  ft->add_option("--init", o.init, "Initial guess config (default: --config)");
  ft->add_option("--fix", o.fix, "Parameters held fixed (default C_r)")->delimiter(',');
  ft->add_option("--overlay", o.overlay, "Measured-vs-model CSV");
  ft->add_option("--max-iter", o.max_iter, "Simplex iteration cap")->check(CLI::PositiveNumber);
  ft->add_option("--synthesize", o.synthesize, "Write a synthetic dataset from --config to this path and exit");
  ft->add_option("--points", o.points, "Synthetic flux points");
  ft->add_option("--noise", o.noise, "Synthetic multiplicative noise level");
  ft->add_option("--seed", o.seed, "Synthetic noise seed");

  if (argc <= 1) {
    err << app.help();
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return kUsage;
  }

  try {
    if (action) action();
    return kOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace dressq::cli
