#include "dressq/labeling.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "dressq/params.hpp"

namespace dressq {

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  if (rows > cols) throw ValidationError("assignment needs at least as many columns as rows");
  if (rows == 0) return {};

  // 1-based potentials formulation; column 0 is a sentinel.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<int> match(cols + 1, 0), way(cols + 1, 0);

  for (int i = 1; i <= rows; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(rows, -1);
  for (int j = 1; j <= cols; ++j)
    if (match[j] != 0) result[match[j] - 1] = j - 1;
  return result;
}

LabelAssignment assign_labels(const Eigen::VectorXd& coupled,
                              const std::vector<DecoupledLabel>& labels) {
  const int n_levels = static_cast<int>(coupled.size());
  const int n_labels = static_cast<int>(labels.size());
  assert(n_levels <= n_labels && "more coupled levels than labels");
  if (n_levels > n_labels) throw NumericalError("more coupled levels than decoupled labels");

  // Tie-break: eta * n * (N - i) is far below any physical energy scale and
  // favours small n on the lower of two otherwise equivalent levels.
  const double eta = 1e-12 / (static_cast<double>(n_levels) * n_levels + 1.0);
  Eigen::MatrixXd cost(n_levels, n_labels);
  for (int i = 0; i < n_levels; ++i)
    for (int j = 0; j < n_labels; ++j)
      cost(i, j) = std::abs(coupled(i) - labels[j].energy) +
                   eta * labels[j].n * static_cast<double>(n_levels - i);

  LabelAssignment out;
  out.label_of_level = solve_assignment(cost);
  for (int i = 0; i < n_levels; ++i)
    out.total_cost += std::abs(coupled(i) - labels[out.label_of_level[i]].energy);
  return out;
}

}  // namespace dressq
