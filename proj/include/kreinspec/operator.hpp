#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace kreinspec {

/// Dense matrix realization of a differential operator.
struct DiscretizedOperator {
  Eigen::MatrixXcd matrix;
  std::vector<double> grid;            // interior nodes of the first component
  std::vector<int> component_sizes;    // unknowns per field component, sums to matrix rows
  std::string meta;                    // boundary-row description

  bool is_real() const { return matrix.imag().isZero(0.0); }
};

}  // namespace kreinspec
