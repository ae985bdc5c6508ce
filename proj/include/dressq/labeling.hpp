#pragma once

#include <vector>

#include <Eigen/Dense>

namespace dressq {

/// Minimum-cost assignment of rows to distinct columns (rows <= cols),
/// Hungarian method with potentials, O(rows^2 cols). Returns the column
/// chosen for each row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

struct DecoupledLabel {
  double energy = 0.0;  // epsilon_{n mu}, GHz
  int n = 0;
  int mu = 0;
};

struct LabelAssignment {
  std::vector<int> label_of_level;  // index into the label list, per coupled level
  double total_cost = 0.0;          // sum |E - epsilon| over the matching, GHz
};

/// Matches coupled eigenvalues to decoupled labels minimizing the total
/// |E - epsilon|. Exactly degenerate matchings are resolved so that the
/// lower coupled level receives the smaller readout number n.
LabelAssignment assign_labels(const Eigen::VectorXd& coupled,
                              const std::vector<DecoupledLabel>& labels);

}  // namespace dressq
