#pragma once

// Shared numerical kernels: polynomial roots, dense eigenvalues, numerical
// rank, eigenvalue clustering and Jordan-structure inference.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace kreinspec {

using cplx = std::complex<double>;

/// Coefficients of the monic quartic l^4 + a3 l^3 + a2 l^2 + a1 l + a0.
struct QuarticCoeffs {
  double a3 = 0.0;
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  /// Throws InvalidInput if any coefficient is NaN or infinite.
  void validate() const;
  /// Descending coefficient list {1, a3, a2, a1, a0}.
  std::vector<cplx> monic() const;
};

/// Tolerances shared by the kernels. Call sites take these from
/// configuration rather than spelling out literals.
struct NumkitTolerances {
  double rank_scale = 1e-8;        // relative singular-value cut
  double diameter_factor = 10.0;   // cluster-diameter floor on the rank cut
  double cluster = 1e-6;           // single-linkage distance
  int polish_iterations = 10;      // damped Newton steps after the companion solve
};

/// Horner evaluation; `coeffs` in descending order.
cplx poly_eval(std::span<const cplx> coeffs, cplx x);

/// Roots of a monic polynomial given in descending order
/// (coeffs[0] == 1). Uses the companion-matrix eigenproblem followed by at
/// most `polish_iterations` damped Newton steps per root.
std::vector<cplx> poly_roots(std::span<const cplx> coeffs,
                             int polish_iterations = NumkitTolerances{}.polish_iterations);
std::vector<cplx> poly_roots(const QuarticCoeffs& c,
                             int polish_iterations = NumkitTolerances{}.polish_iterations);

/// Discriminant of the monic quartic. Zero iff a repeated root exists;
/// negative iff exactly two roots are real.
double quartic_discriminant(const QuarticCoeffs& c);

/// Eigenvalues of a general square matrix. Real input goes through the real
/// Schur form, so complex eigenvalues come in exactly conjugate pairs.
std::vector<cplx> dense_eigs(const Eigen::MatrixXd& a);
std::vector<cplx> dense_eigs(const Eigen::MatrixXcd& a);

struct EigenPairs {
  std::vector<cplx> values;
  Eigen::MatrixXcd vectors;  // column k belongs to values[k], unit 2-norm
};
EigenPairs dense_eigenpairs(const Eigen::MatrixXcd& a);

/// Number of singular values strictly above tol_scale * sigma_max.
int numerical_rank(const Eigen::MatrixXcd& a,
                   double tol_scale = NumkitTolerances{}.rank_scale);

struct EigenCluster {
  cplx center;                // mean of members
  std::vector<cplx> members;
  double diameter = 0.0;      // max |member - center|
};

/// Single-linkage clustering with linkage distance `tol`. Clusters are
/// ordered by the index of their first member in the input.
std::vector<EigenCluster> cluster_eigs(std::span<const cplx> eigs, double tol);

/// Builds a cluster from an explicit member list.
EigenCluster make_cluster(std::vector<cplx> members);

enum class JordanType {
  TypeI,            // n = 3, m = 1
  TypeII,           // n = 3, m = 2
  TypeIII,          // n = 3, m = 3
  Simple,           // n = 1
  DoubleDefective,  // n = 2, m = 1
  Diagonal,         // m = n, n = 2 or n >= 4
  Higher,           // n >= 4, m < n
};

std::string_view to_string(JordanType t);
JordanType jordan_type_from_string(std::string_view s);
JordanType classify_jordan(int algebraic, int geometric);

struct MultiplicityReport {
  cplx eigenvalue;
  int algebraic = 0;   // n(lambda)
  int geometric = 0;   // m(lambda)
  std::vector<int> rank_filtration;  // rank((A - lambda I)^k), k = 1..n
  JordanType jordan_type = JordanType::Simple;
};

/// Infers the Jordan structure of `a` at the cluster center from the rank
/// filtration of B^k, B = A - center I. null(B^k) is grown from null(B^(k-1))
/// as the singular directions of (I - N N^*) B below
///   max(rank_scale * sigma_max(B), diameter_factor * diameter),
/// so every power is judged on the scale of B itself.
/// Throws DegenerateThreshold if the filtration is not non-increasing or the
/// geometric multiplicity falls outside [1, n].
MultiplicityReport jordan_structure(const Eigen::MatrixXcd& a,
                                    const EigenCluster& cluster,
                                    const NumkitTolerances& tol = {});

}  // namespace kreinspec
