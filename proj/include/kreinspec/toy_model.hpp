#pragma once

// The 2x2 pseudo-Hermitian warm-up model and the PT-symmetric 4x4 toy model
// built from two coupled 2x2 subsystems.

#include "kreinspec/numkit.hpp"

#include <Eigen/Dense>

#include <array>
#include <string_view>

namespace kreinspec::toy {

struct TwoByTwoParams {
  double x = 0.0;
  double y = 0.0;
  cplx w = 0.0;
};

struct TwoByTwoSpectrum {
  cplx plus;    // x + sqrt(y^2 - |w|^2)
  cplx minus;   // x - sqrt(y^2 - |w|^2)
  bool at_exceptional_point = false;
};

/// [[x + y, w], [-conj(w), x - y]].
Eigen::Matrix2cd assemble_two_by_two(const TwoByTwoParams& p);

/// Closed-form eigenvalues. The exceptional-point flag is raised when
/// |y^2 - |w|^2| <= ep_tol * max(1, y^2, |w|^2).
TwoByTwoSpectrum two_by_two_eigs(const TwoByTwoParams& p, double ep_tol = 1e-12);

/// Parameters of the 4x4 model: two real subsystems (x_k, y_k, w_k) coupled
/// through z.
struct ToyParams {
  double x1 = 0.0, y1 = 0.0, w1 = 0.0;
  double x2 = 0.0, y2 = 0.0, w2 = 0.0;
  double z = 0.0;

  void validate() const;
  /// Access by name ("x1", ..., "z"); throws InvalidInput on unknown names.
  double& at(std::string_view name);
  double at(std::string_view name) const;
};

inline constexpr std::array<std::string_view, 7> kToyParamNames = {"x1", "y1", "w1", "x2",
                                                                    "y2", "w2", "z"};

/// Parity metric diag(1, 1, -1, -1).
Eigen::Matrix4d parity();

/// Real 4x4 matrix
///   [ x1+y1   0     w1    z    ]
///   [ 0       x2+y2 0     w2   ]
///   [ -w1     0     x1-y1 0    ]
///   [ -z      -w2   0     x2-y2]
/// satisfying P H^T P = H.
Eigen::Matrix4d assemble_h4(const ToyParams& p);

/// Closed-form coefficients of det(H - l I).
QuarticCoeffs char_coeffs(const ToyParams& p);

/// Eigenvalues of the decoupled model (z ignored):
/// {x1 + s1, x1 - s1, x2 + s2, x2 - s2}, s_k = sqrt(y_k^2 - w_k^2).
std::array<cplx, 4> uncoupled_eigs(const ToyParams& p);

/// Closed-form parametrization of a triple root beta_c of the quartic under
/// the subsystem branch-point conditions y_k^2 = w_k^2, in the normalization
/// beta_c = z_c = 1, x1_c = 0.
struct TripleRootSolution {
  int epsilon = 1;
  int delta = 1;
  double beta_c = 1.0;
  double z_c = 1.0;
  double x1_c = 0.0;
  double lambda4_c = 0.0;
  double x2_c = 0.0;
  double y1_c = 0.0;
  double y2_c = 0.0;
};

/// epsilon, delta in {-1, +1}; throws InvalidInput otherwise.
TripleRootSolution triple_root_params(int epsilon, int delta);

/// x1 = x1_c, x2 = x2_c, w1 = y1 = y1_c, w2 = y2 = y2_c, z = z_c.
ToyParams to_toy_params(const TripleRootSolution& s);

/// One-parameter deformation through the triple point:
///   x2 = x2_c + t, y1 = y1_c + 2t^2, y2 = y2_c - t^3,
///   w1 = y1_c - t,  w2 = y2_c + 3t^2, x1 = x1_c, z = z_c.
/// Reduces to to_toy_params(s) at t = 0. Intended for the (+,+) branch;
/// other branches are accepted and follow the same formulas.
ToyParams blowup_path(const TripleRootSolution& s, double t);

}  // namespace kreinspec::toy
