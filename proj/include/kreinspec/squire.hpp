#pragma once

// Chebyshev collocation of the PT-symmetric box problem
//   -psi'' + g y^2 (i y)^nu psi = E psi,  psi(-b) = psi(b) = 0.

#include "kreinspec/numkit.hpp"
#include "kreinspec/operator.hpp"

#include <vector>

namespace kreinspec::squire {

struct SquireConfig {
  double g = 1.0;
  double nu = 0.0;
  double b = 1.0;
  int N = 64;  // Chebyshev polynomial degree; N - 1 interior unknowns

  /// b > 0, N >= 16, finite g and nu.
  void validate() const;
};

/// g |y|^(2+nu) exp(i pi nu sgn(y) / 2), the principal branch of
/// g y^2 (i y)^nu. Zero at y = 0 for nu > -2; throws DomainError at y = 0 for
/// nu <= -2 and for |y| > b.
cplx potential(const SquireConfig& cfg, double y);

/// Chebyshev points and first-derivative matrix on [-1, 1], nodes
/// x_j = cos(j pi / n), j = 0..n, computed so that x_{n-j} = -x_j exactly.
struct ChebyshevGrid {
  Eigen::VectorXd x;
  Eigen::MatrixXd d;
};
ChebyshevGrid chebyshev(int n);

/// -D2 + diag(V) on the N - 1 interior nodes y_j = b x_j.
DiscretizedOperator assemble_squire(const SquireConfig& cfg);

/// Real matrix similar to a PT-symmetric collocation matrix A
/// (P conj(A) P = A with P the node reversal): S^{-1} A S with
/// S = (I + iP)/sqrt(2). Complex eigenvalues of the result come in exact
/// conjugate pairs. Throws InvalidInput when A is not PT symmetric to
/// 1e-10 relative.
Eigen::MatrixXd pt_realify(const Eigen::MatrixXcd& a);

struct SquireSpectrum {
  std::vector<cplx> values;   // ascending real part
  std::vector<bool> unresolved;  // index in the upper third of the discrete spectrum
};

/// The k eigenvalues of smallest real part.
SquireSpectrum squire_spectrum(const SquireConfig& cfg, int k);

}  // namespace kreinspec::squire
