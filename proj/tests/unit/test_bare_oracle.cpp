#include <doctest.h>

#include <cmath>

#include "dressq/bare_oracle.hpp"
#include "dressq/hamiltonian.hpp"
#include "dressq/normal_modes.hpp"

using namespace dressq;

TEST_CASE("bare Hamiltonian is symmetric and harmonic without junction and coupling") {
  CircuitParams p = device_a();
  p.E_J = 0.0;
  p.L_s = 0.0;
  const BareTruncation t{3, 5};
  const Eigen::MatrixXd h = bare_hamiltonian(p, FluxPoint{}, t);
  CHECK((h - h.transpose()).norm() == 0.0);
  const NormalModeBasis b = solve_normal_modes(p);
  for (int a = 0; a <= 3; ++a)
    for (int m = 0; m <= 5; ++m) CHECK(h(a * 6 + m, a * 6 + m) == doctest::Approx(b.f_R() * a + b.f_Q() * m).epsilon(1e-12));
}

TEST_CASE("bare and dressed bases agree relative to the ground state") {
  for (const CircuitParams& p : {device_a(), device_b()})
    for (double phi : {0.0, M_PI}) {
      const Eigen::VectorXd bare = bare_basis_oracle(p, FluxPoint::from_phase(phi), {12, 40});
      const Eigen::VectorXd dressed =
          diagonalize(build_hamiltonian(solve_normal_modes(p), p.E_J, FluxPoint::from_phase(phi), {5, 40}), false).values;
      for (int i = 1; i < 10; ++i) CHECK(std::abs((bare(i) - bare(0)) - (dressed(i) - dressed(0))) < 1e-3);
    }
}
