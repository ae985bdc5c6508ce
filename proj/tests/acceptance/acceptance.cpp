// Acceptance suite: one PASS/FAIL line per criterion, "info:" lines with the
// measured numbers. Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dressq/bare_oracle.hpp"
#include "dressq/fit.hpp"
#include "dressq/hamiltonian.hpp"
#include "dressq/normal_modes.hpp"
#include "dressq/perturbation.hpp"
#include "dressq/scattering.hpp"
#include "dressq/spectrum.hpp"

using namespace dressq;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& what) {
  std::printf("%s %s %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

void info(const std::string& s) { std::printf("  info: %s\n", s.c_str()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

Eigen::VectorXd relative_levels(const Eigen::VectorXd& e, int count) {
  return e.head(count).array() - e(0);
}

Eigen::VectorXd dressed_levels(const CircuitParams& p, FluxPoint f, int n0, int m0) {
  return diagonalize(build_hamiltonian(solve_normal_modes(p), p.E_J, f, {n0, m0}), false).values;
}

Eigen::VectorXd bare_levels(const CircuitParams& p, FluxPoint f, int nr, int nq) {
  return bare_basis_oracle(p, f, {nr, nq});
}

using LevelFn = std::function<Eigen::VectorXd(int, int)>;

struct Converged {
  bool ok = false;
  int a = 0, b = 0;
  Eigen::VectorXd levels;  // relative to ground
};

// Walks a truncation ladder until the tracked relative levels change by less
// than `tol` between consecutive rungs.
Converged converge(const LevelFn& fn, const std::vector<std::pair<int, int>>& ladder, int count, double tol) {
  Converged c;
  Eigen::VectorXd prev;
  for (const auto& [a, b] : ladder) {
    const Eigen::VectorXd e = relative_levels(fn(a, b), count);
    if (prev.size() == count && (e - prev).cwiseAbs().maxCoeff() < tol) {
      c = {true, a, b, e};
      return c;
    }
    prev = e;
  }
  c.levels = prev;
  return c;
}

// Smallest (a+1)(b+1) whose relative levels lie within tol of ref.
int minimal_dimension(const LevelFn& fn, const Eigen::VectorXd& ref, double tol, int max_dim, int* best_a, int* best_b) {
  std::vector<std::tuple<int, int, int>> cand;
  for (int a = 1; a <= 40; ++a)
    for (int b = 1; b <= 120; ++b) {
      const int d = (a + 1) * (b + 1);
      if (d >= ref.size() && d <= max_dim) cand.emplace_back(d, a, b);
    }
  std::sort(cand.begin(), cand.end());
  for (const auto& [d, a, b] : cand) {
    const Eigen::VectorXd e = relative_levels(fn(a, b), static_cast<int>(ref.size()));
    if ((e - ref).cwiseAbs().maxCoeff() < tol) {
      *best_a = a;
      *best_b = b;
      return d;
    }
  }
  return -1;
}

void criterion1() {
  struct Row {
    const char* name;
    CircuitParams p;
    double t1, t2, t3, t4;      // reference 1-l1, l2, l3, 1-l4
    double e1, e2, e3, e4;      // quoted precision (one unit in the last digit)
  };
  const Row rows[] = {{"A", device_a(), 1.5e-3, 1.5e-2, -5.6e-2, 1.1e-4, 0.1e-3, 0.1e-2, 0.1e-2, 0.1e-4},
                      {"B", device_b(), 4.1e-4, 8.4e-3, -2.9e-2, 3.5e-5, 0.1e-4, 0.1e-3, 0.1e-2, 0.1e-5}};
  bool all = true;
  std::string detail;
  double max_runtime = 0.0;
  for (const auto& r : rows) {
    const auto t0 = std::chrono::steady_clock::now();
    const NormalModeBasis b = solve_normal_modes(r.p);
    max_runtime = std::max(max_runtime, seconds_since(t0));
    const double v[4] = {1 - b.lambda1, b.lambda2, b.lambda3, 1 - b.lambda4};
    const double t[4] = {r.t1, r.t2, r.t3, r.t4};
    const double e[4] = {r.e1, r.e2, r.e3, r.e4};
    bool ok = true;
    for (int i = 0; i < 4; ++i) ok = ok && within(v[i], t[i], e[i] * (1 + 1e-9));
    all = all && ok;
    detail += fmt("%s[%s: 1-l1=%.3g l2=%.3g l3=%.4g 1-l4=%.3g] ", ok ? "" : "MISS", r.name, v[0], v[1], v[2], v[3]);
    if (!ok) {
      // Device A's absolute tolerances applied to this column, for context.
      const double ea[4] = {0.1e-3, 0.1e-2, 0.1e-2, 0.1e-4};
      std::string miss;
      for (int i = 0; i < 4; ++i)
        miss += fmt("%s%.2g ", within(v[i], t[i], ea[i]) ? "" : "!", std::abs(v[i] - t[i]) / ea[i]);
      info(fmt("device %s |error| / device-A tolerance (!=outside): %s", r.name, miss.c_str()));
    }
  }
  all = all && max_runtime < 1e-3;
  report("[1]", all, "normal-mode coefficients vs reference values: " + detail + fmt("runtime %.1e s", max_runtime));
}

void criterion2() {
  const CircuitParams p = device_a();
  const FluxPoint half = FluxPoint::from_flux_quanta(0.5);
  const auto t0 = std::chrono::steady_clock::now();
  const double exact = dispersive_shift(SpectrumSolver(p, {5, 20}).solve(half)) * 1e3;
  const double pert = perturbative_chi(perturbative_spectrum(solve_normal_modes(p), p.E_J, half, 20)) * 1e3;
  const double rt = seconds_since(t0);
  const bool ok_e = within(exact, 57.0, 3.0), ok_p = within(pert, 75.0, 4.0);
  report("[2]", ok_e && ok_p && rt < 1.0,
         fmt("chi at 0.5 Phi0, device A: exact %.2f MHz (57+-3 %s), perturbative %.2f MHz (75+-4 %s), %.3f s", exact,
             ok_e ? "ok" : "miss", pert, ok_p ? "ok" : "miss", rt));
  const double conv = dispersive_shift(SpectrumSolver(p, {8, 40}).solve(half)) * 1e3;
  PerturbationOptions bare;
  bare.absorb_lambda4 = false;
  const double pert_bare = perturbative_chi(perturbative_spectrum(solve_normal_modes(p), p.E_J, half, 20, bare)) * 1e3;
  info(fmt("exact chi at (8,40): %.3f MHz; perturbative with bare qubit argument: %.2f MHz", conv, pert_bare));
  // A parameter set that rounds to the device A reference values.
  const CircuitParams r{20.254, 15.624, 5.329, 386.465, 6.195, 4.531};
  const double re = dispersive_shift(SpectrumSolver(r, {5, 20}).solve(half)) * 1e3;
  const double rp = perturbative_chi(perturbative_spectrum(solve_normal_modes(r), r.E_J, half, 20)) * 1e3;
  info(fmt("within rounding of the device A values (C_r=20.254 L_r=15.624 C_q=5.329 L_q=386.465 E_J=6.195 L_s=4.531): "
           "exact %.2f MHz, perturbative %.2f MHz",
           re, rp));
}

void criterion3() {
  const double a = device_a().L_s / device_a().L_r, b = device_b().L_s / device_b().L_r;
  report("[3]", within(a, 0.29, 0.01) && within(b, 0.15, 0.01),
         fmt("L_s/L_r: device A %.4f (0.29+-0.01), device B %.4f (0.15+-0.01)", a, b));
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kLevels = 10;
  constexpr double kLadderTol = 1e-4;  // GHz between rungs counts as converged
  std::vector<std::pair<int, int>> dressed_ladder, bare_ladder;
  for (int k = 0; k < 9; ++k) dressed_ladder.push_back({3 + k, 10 + 5 * k});
  for (int k = 0; k < 10; ++k) bare_ladder.push_back({4 + 2 * k, 15 + 5 * k});

  bool ok_a = true;
  double worst = 0.0;
  std::string detail;
  for (const char* dev : {"A", "B"}) {
    const CircuitParams p = *builtin_device(dev);
    for (double phi : {0.0, std::numbers::pi / 2, std::numbers::pi}) {
      const FluxPoint f = FluxPoint::from_phase(phi);
      const Converged d =
          converge([&](int a, int b) { return dressed_levels(p, f, a, b); }, dressed_ladder, kLevels, kLadderTol);
      const Converged o =
          converge([&](int a, int b) { return bare_levels(p, f, a, b); }, bare_ladder, kLevels, kLadderTol);
      const double diff = (d.levels - o.levels).cwiseAbs().maxCoeff();
      worst = std::max(worst, diff);
      const bool ok = d.ok && o.ok && diff <= 1e-3;
      ok_a = ok_a && ok;
      info(fmt("device %s phi=%.4f: dressed converged %s at (%d,%d), bare %s at (%d,%d), max |diff| %.2e MHz", dev, phi,
               d.ok ? "yes" : "NO", d.a, d.b, o.ok ? "yes" : "NO", o.a, o.b, diff * 1e3));
    }
  }
  detail += fmt("(a) 10 lowest levels agree, worst %.2e MHz %s; ", worst * 1e3, ok_a ? "ok" : "miss");

  bool ok_b = true;
  const CircuitParams p = device_a();
  for (double phi : {0.0, std::numbers::pi / 2, std::numbers::pi}) {
    const FluxPoint f = FluxPoint::from_phase(phi);
    const LevelFn dfn = [&](int a, int b) { return dressed_levels(p, f, a, b); };
    const LevelFn bfn = [&](int a, int b) { return bare_levels(p, f, a, b); };
    const Eigen::VectorXd ref_d = relative_levels(dfn(12, 60), kLevels);
    const Eigen::VectorXd ref_b = relative_levels(bfn(24, 70), kLevels);
    int da = 0, db = 0, ba = 0, bb = 0;
    const int dd = minimal_dimension(dfn, ref_d, 1e-3, 3000, &da, &db);
    const int bd = minimal_dimension(bfn, ref_b, 1e-3, 3000, &ba, &bb);
    const bool ok = dd > 0 && bd > 0 && dd < bd;
    ok_b = ok_b && ok;
    info(fmt("device A phi=%.4f: minimal dimension for 1 MHz: dressed %d (n0=%d m0=%d), bare %d (nr=%d nq=%d)", phi, dd,
             da, db, bd, ba, bb));
  }
  detail += fmt("(b) dressed strictly smaller for device A %s; ", ok_b ? "ok" : "miss");
  const double rt = seconds_since(t0);
  report("[4]", ok_a && ok_b && rt < 30.0, "oracle equivalence: " + detail + fmt("%.1f s", rt));
}

void criterion5() {
  CircuitParams p = device_a();
  p.E_J = 0.0;
  const SpectrumSolver s(p, {5, 20});
  const LabeledSpectrum sp = s.solve(FluxPoint::from_flux_quanta(0.37));
  double worst = 0.0;
  for (const auto& lv : sp.levels)
    worst = std::max(worst, std::abs(lv.energy - (s.basis().f_R() * lv.n + s.basis().f_Q() * lv.mu)));
  p = device_a();
  p.L_s = 0.0;
  const NormalModeBasis b = solve_normal_modes(p);
  const double chi = dispersive_shift(SpectrumSolver(p, {5, 20}).solve(FluxPoint::from_flux_quanta(0.5)));
  const bool ok = worst <= 1e-9 && b.lambda2 == 0.0 && b.lambda3 == 0.0 && std::abs(chi) <= 1e-12;
  report("[5]", ok,
         fmt("exact limits: E_J=0 max |E - (n f_R + m f_Q)| = %.1e GHz; L_s=0 lambda2=%g lambda3=%g chi=%.1e GHz", worst,
             b.lambda2, b.lambda3, chi));
}

void criterion6() {
  const NormalModeBasis b = solve_normal_modes(device_a());
  const HamiltonianBlocks h(b, {5, 20});
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  double worst_p = 0.0, worst_r = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double phi = u(rng);
    const auto e = diagonalize(h.hamiltonian(6.2, FluxPoint::from_phase(phi)), false).values;
    const auto ep = diagonalize(h.hamiltonian(6.2, FluxPoint::from_phase(phi + 2 * std::numbers::pi)), false).values;
    const auto er = diagonalize(h.hamiltonian(6.2, FluxPoint::from_phase(2 * std::numbers::pi - phi)), false).values;
    worst_p = std::max(worst_p, (e - ep).cwiseAbs().maxCoeff());
    worst_r = std::max(worst_r, (e - er).cwiseAbs().maxCoeff());
  }
  report("[6]", worst_p <= 1e-9 && worst_r <= 1e-9,
         fmt("periodicity max shift %.1e GHz, reflection about pi max shift %.1e GHz (5 random points)", worst_p, worst_r));
}

void criterion7() {
  double worst = 0.0;
  for (const CircuitParams& p : {device_a(), device_b()}) {
    const NormalModeBasis b = solve_normal_modes(p);
    const double xR = b.lambda3 * b.phi_zpf_R, xQ = b.lambda4 * b.phi_zpf_Q;
    const OperatorMatrix cR = cos_matrix(xR, 6), sR = sin_matrix(xR, 6), cQ = cos_matrix(xQ, 21), sQ = sin_matrix(xQ, 21);
    for (double flux : {0.0, 0.13, 0.25, 0.41, 0.5}) {
      const FluxPoint f = FluxPoint::from_flux_quanta(flux);
      auto eig = [&](const OperatorMatrix& a, const OperatorMatrix& c) {
        return diagonalize(HamiltonianBlocks::from_operators(b.f_R(), b.f_Q(), cR, a, cQ, c).hamiltonian(p.E_J, f), false)
            .values;
      };
      const Eigen::VectorXd ref = eig(sR, sQ);
      worst = std::max(worst, (eig(-sR, sQ) - ref).cwiseAbs().maxCoeff());
      worst = std::max(worst, (eig(sR, -sQ) - ref).cwiseAbs().maxCoeff());
    }
  }
  report("[7]", worst <= 1e-10, fmt("sine-sign flip max eigenvalue change %.1e GHz", worst));
}

double unitarity_deficit(double x, int dim, int block) {
  const OperatorMatrix c = cos_matrix(x, dim), s = sin_matrix(x, dim);
  const Eigen::MatrixXcd u = c.cast<std::complex<double>>() + std::complex<double>(0, 1) * s.cast<std::complex<double>>();
  return ((u * u.adjoint()).topLeftCorner(block, block) - Eigen::MatrixXcd::Identity(block, block)).norm();
}

void criterion8() {
  const NormalModeBasis b = solve_normal_modes(device_a());
  const double x = b.lambda4 * b.phi_zpf_Q;
  const double d = unitarity_deficit(x, 60, 30);
  report("[8]", d < 1e-6, fmt("||(C+iS)(C+iS)^dag - I|| on the 30x30 block, x=%.4f, dim 60: %.2e", x, d));
  info(fmt("same block at dim 80: %.2e; 25x25 block at dim 60: %.2e", unitarity_deficit(x, 80, 30),
           unitarity_deficit(x, 60, 25)));
}

void criterion9() {
  const CircuitParams p = device_a();
  const SpectrumSolver solver(p, {5, 20});
  const LabeledSpectrum spec = solver.solve(FluxPoint::from_flux_quanta(0.5), true);
  const ImpedanceModel model(spec, solver.basis());
  const PortConfig ports{1.5e3, 7.5e5};
  const double f01 = transitions(spec).f_01;
  const double chi = dispersive_shift(spec);

  std::vector<double> wide = flux_grid(0.2, 12.0, 2951);
  const auto w = scattering_sweep(model, ports, solver.basis(), {{0, 0}, {0, 1}}, wide);
  const auto local = flux_grid(f01 - 0.2, f01 + 0.2 + chi, 8001);
  const auto n = scattering_sweep(model, ports, solver.basis(), {{0, 0}, {0, 1}}, local);

  double unit = 0.0, recip = 0.0;
  for (const auto* set : {&w, &n})
    for (const auto& r : *set)
      for (const auto& S : r.S) {
        unit = std::max(unit, (S.adjoint() * S - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
        recip = std::max(recip, std::abs(S(0, 1) - S(1, 0)));
      }
  const auto ph = unwrapped_phase(n[0], 0);
  const double roll = std::abs(ph.back() - ph.front()) / (2 * std::numbers::pi);
  const double shift = phase_roll_center(n[1], 0) - phase_roll_center(n[0], 0);
  const bool ok = unit <= 1e-8 && recip <= 1e-10 && within(roll, 1.0, 0.05) && within(shift, chi, 0.05 * std::abs(chi));
  report("[9]", ok,
         fmt("scattering: max|S^dag S - I| %.1e, max|S_RQ - S_QR| %.1e, S_RR roll across f_01 %.3f turns, "
             "roll-center shift %.2f MHz vs chi %.2f MHz",
             unit, recip, roll, shift * 1e3, chi * 1e3));
}

// Flux (units of Phi_0) where the decoupled e->h transition meets f_R, found
// by bisection.
double anticrossing_flux(const CircuitParams& p, double lo, double hi) {
  const SpectrumSolver s(p, {5, 20});
  auto g = [&](double x) {
    const auto q = s.decoupled_qubit(FluxPoint::from_flux_quanta(x)).values;
    return (q(3) - q(1)) - s.basis().f_R();
  };
  double glo = g(lo);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void criterion10() {
  const CircuitParams a = device_a();
  const double xc = anticrossing_flux(a, 0.2, 0.3);
  const SpectrumSolver sa(a, {5, 20});
  const NormalModeBasis ba = solve_normal_modes(a);
  double best = 0.0, at = xc;
  // Offsets of 1e-4 .. 2e-3 Phi0 on either side, never on the pole itself.
  for (int k = -20; k <= 20; ++k) {
    if (k == 0) continue;
    const double x = xc + 1e-4 * k;
    const FluxPoint f = FluxPoint::from_flux_quanta(x);
    const double ex = dispersive_shift(sa.solve(f));
    const double pt = perturbative_chi(perturbative_spectrum(ba, a.E_J, f, 20));
    if (std::abs(pt / ex) > best) {
      best = std::abs(pt / ex);
      at = x;
    }
  }
  const CircuitParams b = device_b();
  const double ex = dispersive_shift(SpectrumSolver(b, {5, 20}).solve(FluxPoint{}));
  const double pt = perturbative_chi(perturbative_spectrum(solve_normal_modes(b), b.E_J, FluxPoint{}, 20));
  const double rel = std::abs(pt - ex) / std::abs(ex);
  report("[10]", best > 10.0 && rel < 0.15,
         fmt("perturbation theory: max |chi_pert/chi_exact| = %.1f at %.5f Phi0 (e->h meets f_R at %.5f); "
             "device B at 0: exact %.4f MHz, perturbative %.4f MHz, rel. diff %.1f%%",
             best, at, xc, ex * 1e3, pt * 1e3, rel * 100));
}

void criterion11() {
  const CircuitParams truth = device_a();
  const TruncationScheme t{5, 20};
  const SpectroscopyDataset data = synthetic_dataset(truth, t, 41, 0.0, 0.5, 0.005, 20240611, 1);
  CircuitParams start = truth;
  const double sign[6] = {0, +1, -1, +1, -1, +1};
  for (int i = 1; i < 6; ++i) param_ref(start, kParamNames[i]) *= 1.0 + 0.10 * sign[i];
  const auto t0 = std::chrono::steady_clock::now();
  const FitResult r = fit_params(data, start, make_mask({"C_r"}), t, FitOptions{});
  const double rt = seconds_since(t0);
  double worst = 0.0;
  std::string detail;
  for (int i = 1; i < 6; ++i) {
    const double e = std::abs(param_value(r.params, kParamNames[i]) / param_value(truth, kParamNames[i]) - 1.0);
    worst = std::max(worst, e);
    detail += fmt("%s %.2f%% ", std::string(kParamNames[i]).c_str(), e * 100);
  }
  report("[11]", worst < 0.02 && rt < 300.0 && r.params.C_r == truth.C_r,
         fmt("fit round trip (41 points, 0.5%% noise, start +-10%%, C_r fixed): %sworst %.2f%%, %d iterations, "
             "converged %s, %.1f s",
             detail.c_str(), worst * 100, r.iterations, r.converged ? "true" : "false", rt));
}

void criterion12() {
  CircuitParams p = device_a();
  p.E_J = 0.0;
  const LabeledSpectrum s0 = SpectrumSolver(p, {5, 20}).solve(FluxPoint::from_flux_quanta(0.3));
  double k0 = 0.0;
  for (int mu = 0; mu < 4; ++mu) k0 = std::max(k0, std::abs(kerr(s0, mu)));
  const auto sweep_a = sweep(device_a(), flux_grid(0.0, 0.5, 51), {5, 20});
  std::string changed;
  for (int mu = 0; mu < 4; ++mu) {
    double lo = 1e300, hi = -1e300;
    for (const auto& s : sweep_a) {
      lo = std::min(lo, kerr(s, mu));
      hi = std::max(hi, kerr(s, mu));
    }
    if (lo < 0 && hi > 0) changed += state_label(0, mu).substr(1) + " ";
  }
  report("[12]", k0 <= 1e-12 && !changed.empty(),
         fmt("Kerr: max |K| at E_J=0 = %.1e GHz; sign change over flux for states: %s", k0,
             changed.empty() ? "none" : changed.c_str()));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<void (*)()> all = {criterion1, criterion2, criterion3, criterion4,  criterion5,  criterion6,
                                       criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
  for (auto c : all) {
    try {
      c();
    } catch (const std::exception& e) {
      report("[?]", false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d criteria failed; total %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
