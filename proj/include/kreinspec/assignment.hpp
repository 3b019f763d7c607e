#pragma once

#include <Eigen/Dense>

#include <vector>

namespace kreinspec {

/// Exact minimum-cost assignment (Hungarian method, O(r^2 c)) of every row
/// to a distinct column. Requires rows <= cols. Returns the column index
/// chosen for each row.
std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost);

/// Greedy nearest-pair assignment: repeatedly takes the cheapest remaining
/// (row, column) pair. Not optimal, O(r c log(r c)).
std::vector<int> greedy_assignment(const Eigen::MatrixXd& cost);

}  // namespace kreinspec
