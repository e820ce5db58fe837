#include "bmv/assignment.hpp"

#include "bmv/error.hpp"

#include <limits>

namespace bmv {

Assignment solve_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw Error(ErrorKind::dimension, "assignment cost matrix must be square");
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // Potentials u (rows), v (columns); p[j] = row matched to column j (1-based, 0 = free).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
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
      if (j1 == 0) throw Error(ErrorKind::numeric, "assignment has no finite perfect matching");
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment a;
  a.column_of_row.assign(n, -1);
  for (int j = 1; j <= n; ++j) a.column_of_row[p[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) a.total += cost(i, a.column_of_row[i]);
  return a;
}

double second_best_total(const Eigen::MatrixXd& cost, const Assignment& best) {
  const auto n = cost.rows();
  double second = std::numeric_limits<double>::infinity();
  if (n < 2) return second;
  // Large finite penalty keeps the solver's arithmetic finite.
  const double penalty = 1e6 * (1.0 + cost.cwiseAbs().maxCoeff()) * static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::MatrixXd forbidden = cost;
    forbidden(i, best.column_of_row[i]) = penalty;
    const Assignment alt = solve_assignment(forbidden);
    if (alt.column_of_row[i] != best.column_of_row[i]) second = std::min(second, alt.total);
  }
  return second;
}

}  // namespace bmv
