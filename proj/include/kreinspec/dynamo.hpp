#pragma once

// Finite-difference realization of the spherically symmetric alpha^2-dynamo
// operator matrix
//   H_l[alpha] = [[-Q[1], alpha], [Q[alpha], -Q[1]]],
//   Q[alpha] = -(d_r + 1/r) alpha(r) (d_r + 1/r) + alpha(r) l(l+1)/r^2
// on r in (0, 1].

#include "kreinspec/numkit.hpp"
#include "kreinspec/operator.hpp"

#include <string_view>
#include <vector>

namespace kreinspec::dynamo {

struct AlphaProfile {
  enum class Kind { Polynomial, Constant };
  Kind kind = Kind::Polynomial;
  double C = 1.0;     // overall amplitude; the constant value for Kind::Constant
  double zeta = 0.0;  // warp parameter of the polynomial profile

  /// Unchecked evaluation, also used for ghost midpoints just outside r = 1.
  double operator()(double r) const;
};

/// Checked evaluation for 0 <= r <= 1; throws DomainError otherwise.
///   C [ -(21.465 + 2.467 zeta) + (426.412 + 167.928 zeta) r^2
///       - (806.729 + 436.289 zeta) r^3 + (392.276 + 272.991 zeta) r^4 ]
double alpha_eval(const AlphaProfile& profile, double r);

enum class BoundaryKind {
  Idealized,  // u1(1) = u2(1) = 0
  Realistic,  // u2(1) = 0, u1'(1) + (l + 1) u1(1) = 0 (vacuum matching)
};

std::string_view to_string(BoundaryKind kind);
BoundaryKind boundary_kind_from_string(std::string_view s);

struct DynamoConfig {
  int l = 1;
  int N = 100;  // grid intervals on [0, 1]
  BoundaryKind bc = BoundaryKind::Realistic;
  AlphaProfile profile;

  /// N >= 16, l >= 1, finite profile parameters.
  void validate() const;
};

/// Second-order staggered finite differences on r_j = j/N. The first-order
/// factor (d_r + 1/r) maps nodes to midpoints; u(0) = 0 enters through the
/// first midpoint. Unknown layout is [u1 (poloidal); u2 (toroidal)].
DiscretizedOperator assemble_dynamo(const DynamoConfig& cfg);

/// Eigenvalues sorted by real part, descending (ties: imaginary part descending).
std::vector<cplx> dynamo_spectrum(const DynamoConfig& cfg);

}  // namespace kreinspec::dynamo
