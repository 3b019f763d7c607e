#include "kreinspec/assignment.hpp"

#include "kreinspec/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

namespace kreinspec {

std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost) {
  const auto rows = static_cast<int>(cost.rows());
  const auto cols = static_cast<int>(cost.cols());
  if (rows > cols) throw InvalidInput("optimal_assignment: more rows than columns");
  if (rows == 0) return {};

  // Shortest augmenting path formulation with row/column potentials,
  // 1-based internally; column 0 is the virtual source.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<int> owner(cols + 1, 0), way(cols + 1, 0);
  for (int i = 1; i <= rows; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = owner[j0];
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
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(rows, -1);
  for (int j = 1; j <= cols; ++j) {
    if (owner[j] != 0) result[owner[j] - 1] = j - 1;
  }
  return result;
}

std::vector<int> greedy_assignment(const Eigen::MatrixXd& cost) {
  const auto rows = static_cast<int>(cost.rows());
  const auto cols = static_cast<int>(cost.cols());
  if (rows > cols) throw InvalidInput("greedy_assignment: more rows than columns");

  std::vector<std::tuple<double, int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) pairs.emplace_back(cost(i, j), i, j);
  std::sort(pairs.begin(), pairs.end());

  std::vector<int> result(rows, -1);
  std::vector<char> taken(cols, 0);
  int left = rows;
  for (const auto& [c, i, j] : pairs) {
    if (left == 0) break;
    if (result[i] >= 0 || taken[j]) continue;
    result[i] = j;
    taken[j] = 1;
    --left;
  }
  return result;
}

}  // namespace kreinspec
