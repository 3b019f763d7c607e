#include "kreinspec/squire.hpp"

#include "kreinspec/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kreinspec::squire {

void SquireConfig::validate() const {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("squire: b must be positive and finite");
  if (N < 16) throw InvalidInput("squire: N must be at least 16");
  if (!std::isfinite(g) || !std::isfinite(nu)) throw InvalidInput("squire: g and nu must be finite");
}

cplx potential(const SquireConfig& cfg, double y) {
  if (std::abs(y) > cfg.b * (1.0 + 1e-14)) throw DomainError("squire potential: |y| exceeds b");
  if (y == 0.0) {
    if (cfg.nu <= -2.0) throw DomainError("squire potential: singular at y = 0 for nu <= -2");
    return 0.0;
  }
  const double sgn = y > 0.0 ? 1.0 : -1.0;
  const double mag = cfg.g * std::pow(std::abs(y), 2.0 + cfg.nu);
  const double phase = std::numbers::pi * cfg.nu * sgn / 2.0;
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

ChebyshevGrid chebyshev(int n) {
  ChebyshevGrid grid;
  grid.x.resize(n + 1);
  for (int j = 0; j <= n; ++j) grid.x(j) = std::sin(std::numbers::pi * (n - 2.0 * j) / (2.0 * n));
  Eigen::VectorXd c(n + 1);
  for (int j = 0; j <= n; ++j) c(j) = ((j == 0 || j == n) ? 2.0 : 1.0) * (j % 2 == 0 ? 1.0 : -1.0);

  grid.d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i != j) grid.d(i, j) = c(i) / c(j) / (grid.x(i) - grid.x(j));
    }
  }
  // negative-sum trick for the diagonal
  for (int i = 0; i <= n; ++i) grid.d(i, i) = -grid.d.row(i).sum();
  return grid;
}

DiscretizedOperator assemble_squire(const SquireConfig& cfg) {
  cfg.validate();
  const int n = cfg.N;
  const auto cheb = chebyshev(n);
  const Eigen::MatrixXd d2 = (cheb.d * cheb.d).block(1, 1, n - 1, n - 1) / (cfg.b * cfg.b);

  DiscretizedOperator op;
  op.matrix = (-d2).cast<cplx>();
  op.grid.resize(static_cast<std::size_t>(n - 1));
  for (int j = 1; j < n; ++j) {
    const double y = cfg.b * cheb.x(j);
    op.grid[static_cast<std::size_t>(j - 1)] = y;
    op.matrix(j - 1, j - 1) += potential(cfg, y);
  }
  op.component_sizes = {n - 1};
  op.meta = "Dirichlet psi(-b)=psi(b)=0 by removing boundary rows and columns";
  return op;
}

Eigen::MatrixXd pt_realify(const Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, n - 1 - i) = 1.0;
  const cplx i_unit(0.0, 1.0);
  const Eigen::MatrixXcd s =
      (Eigen::MatrixXcd::Identity(n, n) + i_unit * p.cast<cplx>()) / std::numbers::sqrt2;
  const Eigen::MatrixXcd s_inv = -i_unit * p.cast<cplx>() * s;
  const Eigen::MatrixXcd m = s_inv * a * s;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (m.imag().cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidInput("pt_realify: matrix is not PT symmetric under node reversal");
  }
  return m.real();
}

SquireSpectrum squire_spectrum(const SquireConfig& cfg, int k) {
  const auto op = assemble_squire(cfg);
  const auto dim = static_cast<int>(op.matrix.rows());
  if (k < 1 || k > dim) throw InvalidInput("squire_spectrum: k must lie in [1, N-1]");
  auto ev = dense_eigs(pt_realify(op.matrix));
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  SquireSpectrum out;
  out.values.assign(ev.begin(), ev.begin() + k);
  out.unresolved.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out.unresolved[static_cast<std::size_t>(i)] = 3 * i >= 2 * dim;
  return out;
}

}  // namespace kreinspec::squire
