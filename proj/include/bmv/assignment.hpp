#pragma once

#include <Eigen/Dense>

#include <vector>

namespace bmv {

struct Assignment {
  std::vector<int> column_of_row;  // row i is matched to column column_of_row[i]
  double total = 0.0;
};

// Minimum-cost perfect matching on a square cost matrix (Hungarian method, O(n^3)).
Assignment solve_assignment(const Eigen::MatrixXd& cost);

// Cost of the cheapest perfect matching that differs from `best`. The
// runner-up differs from the optimum on at least one edge, so it is the
// minimum over re-solves with one optimal edge forbidden at a time.
// Returns +inf for n < 2.
double second_best_total(const Eigen::MatrixXd& cost, const Assignment& best);

}  // namespace bmv
