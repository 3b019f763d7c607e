#include "kreinspec/numkit.hpp"

#include "kreinspec/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace kreinspec {

namespace {

bool all_finite(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(), [](cplx c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

cplx poly_deriv_eval(std::span<const cplx> coeffs, cplx x) {
  const auto n = static_cast<int>(coeffs.size()) - 1;
  cplx d = 0.0;
  for (int k = 0; k < n; ++k) d = d * x + coeffs[k] * static_cast<double>(n - k);
  return d;
}

// Damped Newton: a step is accepted only if it lowers |p|; otherwise it is
// halved a few times before giving up.
cplx polish(std::span<const cplx> coeffs, cplx root, int iterations) {
  cplx p = poly_eval(coeffs, root);
  for (int it = 0; it < iterations && p != 0.0; ++it) {
    const cplx dp = poly_deriv_eval(coeffs, root);
    if (dp == 0.0) break;
    const cplx step = p / dp;
    bool accepted = false;
    for (double damping = 1.0; damping > 1.0 / 64.0; damping *= 0.5) {
      const cplx trial = root - damping * step;
      const cplx pt = poly_eval(coeffs, trial);
      if (std::abs(pt) < std::abs(p)) {
        root = trial;
        p = pt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return root;
}

std::vector<double> singular_values(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

int count_above(const std::vector<double>& s, double cut) {
  return static_cast<int>(std::count_if(s.begin(), s.end(), [cut](double v) { return v > cut; }));
}

}  // namespace

void QuarticCoeffs::validate() const {
  for (double v : {a3, a2, a1, a0}) {
    if (!std::isfinite(v)) throw InvalidInput("quartic coefficient is not finite");
  }
}

std::vector<cplx> QuarticCoeffs::monic() const { return {1.0, a3, a2, a1, a0}; }

cplx poly_eval(std::span<const cplx> coeffs, cplx x) {
  cplx acc = 0.0;
  for (const cplx c : coeffs) acc = acc * x + c;
  return acc;
}

std::vector<cplx> poly_roots(std::span<const cplx> coeffs, int polish_iterations) {
  if (coeffs.size() < 2) throw InvalidInput("poly_roots: degree must be at least 1");
  if (!all_finite(coeffs)) throw InvalidInput("poly_roots: non-finite coefficient");
  if (coeffs[0] != 1.0) throw InvalidInput("poly_roots: polynomial must be monic");

  const auto n = static_cast<Eigen::Index>(coeffs.size()) - 1;
  const bool real = std::all_of(coeffs.begin(), coeffs.end(), [](cplx c) { return c.imag() == 0.0; });

  std::vector<cplx> roots;
  if (n == 1) {
    roots.push_back(-coeffs[1]);
  } else if (real) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) companion(0, j) = -coeffs[j + 1].real();
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    roots = dense_eigs(companion);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) companion(0, j) = -coeffs[j + 1];
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    roots = dense_eigs(companion);
  }

  if (!real) {
    for (auto& r : roots) r = polish(coeffs, r, polish_iterations);
    return roots;
  }

  // Real coefficients: polish the closed upper half plane and mirror, so the
  // returned multiset stays exactly conjugation symmetric.
  std::vector<cplx> upper;
  std::vector<cplx> lower;
  for (const cplx r : roots) (r.imag() < 0.0 ? lower : upper).push_back(r);
  std::vector<cplx> out;
  out.reserve(roots.size());
  for (const cplx r : upper) {
    cplx p = polish(coeffs, r, polish_iterations);
    if (r.imag() == 0.0) p = {p.real(), 0.0};
    out.push_back(p);
  }
  for (const cplx r : lower) {
    // partner is the polished upper root closest to conj(r)
    auto best = std::min_element(upper.begin(), upper.end(), [r](cplx a, cplx b) {
      return std::abs(a - std::conj(r)) < std::abs(b - std::conj(r));
    });
    const auto idx = static_cast<std::size_t>(best - upper.begin());
    out.push_back(std::conj(out[idx]));
  }
  return out;
}

std::vector<cplx> poly_roots(const QuarticCoeffs& c, int polish_iterations) {
  c.validate();
  const auto coeffs = c.monic();
  return poly_roots(std::span<const cplx>(coeffs), polish_iterations);
}

double quartic_discriminant(const QuarticCoeffs& q) {
  q.validate();
  const double b = q.a3, c = q.a2, d = q.a1, e = q.a0;
  const double b2 = b * b, c2 = c * c, d2 = d * d, e2 = e * e;
  return 256.0 * e2 * e - 192.0 * b * d * e2 - 128.0 * c2 * e2 + 144.0 * c * d2 * e -
         27.0 * d2 * d2 + 144.0 * b2 * c * e2 - 6.0 * b2 * d2 * e - 80.0 * b * c2 * d * e +
         18.0 * b * c * d2 * d + 16.0 * c2 * c2 * e - 4.0 * c2 * c * d2 - 27.0 * b2 * b2 * e2 +
         18.0 * b2 * b * c * d * e - 4.0 * b2 * b * d2 * d - 4.0 * b2 * c2 * c * e +
         b2 * c2 * d2;
}

std::vector<cplx> dense_eigs(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InvalidInput("dense_eigs: matrix must be square and non-empty");
  if (!a.allFinite()) throw InvalidInput("dense_eigs: non-finite matrix entry");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw SolverFailure("real Schur iteration did not converge", a.rows());
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<cplx> dense_eigs(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InvalidInput("dense_eigs: matrix must be square and non-empty");
  if (!a.allFinite()) throw InvalidInput("dense_eigs: non-finite matrix entry");
  if (a.imag().isZero(0.0)) return dense_eigs(Eigen::MatrixXd(a.real()));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw SolverFailure("complex Schur iteration did not converge", a.rows());
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

EigenPairs dense_eigenpairs(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InvalidInput("dense_eigenpairs: matrix must be square and non-empty");
  if (!a.allFinite()) throw InvalidInput("dense_eigenpairs: non-finite matrix entry");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw SolverFailure("complex Schur iteration did not converge", a.rows());
  EigenPairs out;
  const auto& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  out.vectors = solver.eigenvectors();
  out.vectors.colwise().normalize();
  return out;
}

int numerical_rank(const Eigen::MatrixXcd& a, double tol_scale) {
  if (!a.allFinite()) throw InvalidInput("numerical_rank: non-finite matrix entry");
  const auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  return count_above(s, tol_scale * s.front());
}

EigenCluster make_cluster(std::vector<cplx> members) {
  EigenCluster c;
  c.members = std::move(members);
  if (c.members.empty()) return c;
  c.center = std::accumulate(c.members.begin(), c.members.end(), cplx{}) /
             static_cast<double>(c.members.size());
  for (const cplx m : c.members) c.diameter = std::max(c.diameter, std::abs(m - c.center));
  return c;
}

std::vector<EigenCluster> cluster_eigs(std::span<const cplx> eigs, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("cluster_eigs: tolerance must be positive");
  const std::size_t n = eigs.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(eigs[i] - eigs[j]) <= tol) {
        const auto ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<std::vector<cplx>> groups;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(eigs[i]);
  }
  std::vector<EigenCluster> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.push_back(make_cluster(std::move(g)));
  return out;
}

std::string_view to_string(JordanType t) {
  switch (t) {
    case JordanType::TypeI: return "I";
    case JordanType::TypeII: return "II";
    case JordanType::TypeIII: return "III";
    case JordanType::Simple: return "simple";
    case JordanType::DoubleDefective: return "double-defective";
    case JordanType::Diagonal: return "diagonal";
    case JordanType::Higher: return "higher";
  }
  return "unknown";
}

JordanType jordan_type_from_string(std::string_view s) {
  for (auto t : {JordanType::TypeI, JordanType::TypeII, JordanType::TypeIII, JordanType::Simple,
                 JordanType::DoubleDefective, JordanType::Diagonal, JordanType::Higher}) {
    if (to_string(t) == s) return t;
  }
  throw InvalidInput("unknown Jordan type '" + std::string(s) + "'");
}

JordanType classify_jordan(int algebraic, int geometric) {
  if (algebraic == 1) return JordanType::Simple;
  if (algebraic == 3) {
    if (geometric == 1) return JordanType::TypeI;
    if (geometric == 2) return JordanType::TypeII;
    return JordanType::TypeIII;
  }
  if (geometric == algebraic) return JordanType::Diagonal;
  return algebraic == 2 ? JordanType::DoubleDefective : JordanType::Higher;
}

MultiplicityReport jordan_structure(const Eigen::MatrixXcd& a, const EigenCluster& cluster,
                                    const NumkitTolerances& tol) {
  if (a.rows() != a.cols()) throw InvalidInput("jordan_structure: matrix must be square");
  if (cluster.members.empty()) throw InvalidInput("jordan_structure: empty cluster");
  const auto dim = static_cast<int>(a.rows());
  const auto n = static_cast<int>(cluster.members.size());
  if (n > dim) throw InvalidInput("jordan_structure: cluster larger than matrix dimension");

  const Eigen::MatrixXcd shifted = a - cluster.center * Eigen::MatrixXcd::Identity(dim, dim);
  const auto s1 = singular_values(shifted);
  const double smax = s1.empty() ? 0.0 : s1.front();
  const double cut = std::max(tol.rank_scale * smax, tol.diameter_factor * cluster.diameter);

  MultiplicityReport report;
  report.eigenvalue = cluster.center;
  report.algebraic = n;

  // Nested null spaces: null(B^k) = {x : B x in null(B^(k-1))}, found as the
  // small singular directions of (I - N N^*) B. Every step has the scale of B.
  Eigen::MatrixXcd basis(dim, 0);
  for (int k = 1; k <= n; ++k) {
    Eigen::MatrixXcd projected = shifted;
    if (basis.cols() > 0) projected -= basis * (basis.adjoint() * shifted);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(projected, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > cut;
    if (smax == 0.0) rank = 0;
    report.rank_filtration.push_back(rank);
    basis = svd.matrixV().rightCols(dim - rank);
  }

  for (std::size_t k = 1; k < report.rank_filtration.size(); ++k) {
    if (report.rank_filtration[k] > report.rank_filtration[k - 1]) {
      throw DegenerateThreshold("rank filtration is not monotone; adjust rank_scale or cluster tolerance");
    }
  }
  report.geometric = dim - report.rank_filtration.front();
  if (report.geometric < 1 || report.geometric > n) {
    throw DegenerateThreshold("geometric multiplicity " + std::to_string(report.geometric) +
                              " outside [1, " + std::to_string(n) +
                              "]; adjust rank_scale or cluster tolerance");
  }
  report.jordan_type = classify_jordan(n, report.geometric);
  return report;
}

}  // namespace kreinspec
