#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dressq/labeling.hpp"

using namespace dressq;

namespace {
// Brute force over all injective row -> column maps.
double brute_force(const Eigen::MatrixXd& c) {
  std::vector<int> cols(c.cols());
  std::iota(cols.begin(), cols.end(), 0);
  double best = 1e300;
  do {
    double s = 0.0;
    for (Eigen::Index r = 0; r < c.rows(); ++r) s += c(r, cols[r]);
    best = std::min(best, s);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}
}  // namespace

TEST_CASE("assignment matches brute force on random matrices") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int cols = 2 + trial % 6;
    const int rows = cols - (trial % 3 == 0 ? 1 : 0);
    Eigen::MatrixXd c(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) c(i, j) = trial % 4 == 0 ? std::round(u(rng)) : u(rng);
    const std::vector<int> a = solve_assignment(c);
    REQUIRE(static_cast<int>(a.size()) == rows);
    std::vector<int> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += c(i, a[i]);
    CHECK(s == doctest::Approx(brute_force(c)).epsilon(1e-12));
  }
}

TEST_CASE("labels follow energies when coupling is absent") {
  std::vector<DecoupledLabel> labels = {{0.0, 0, 0}, {1.2, 0, 1}, {7.9, 1, 0}, {9.1, 1, 1}};
  Eigen::VectorXd e(4);
  e << 0.0, 1.2, 7.9, 9.1;
  const auto a = assign_labels(e, labels);
  CHECK(a.label_of_level == std::vector<int>{0, 1, 2, 3});
  CHECK(a.total_cost == doctest::Approx(0.0));
}

TEST_CASE("exact degeneracy gives the lower level the smaller photon number") {
  // Two labels at the same energy; both coupled levels equidistant.
  std::vector<DecoupledLabel> labels = {{5.0, 1, 0}, {5.0, 0, 3}};
  Eigen::VectorXd e(2);
  e << 4.9, 5.1;
  const auto a = assign_labels(e, labels);
  CHECK(labels[a.label_of_level[0]].n == 0);
  CHECK(labels[a.label_of_level[1]].n == 1);
}
