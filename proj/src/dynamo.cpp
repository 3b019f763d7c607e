#include "kreinspec/dynamo.hpp"

#include "kreinspec/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kreinspec::dynamo {

namespace {

// Q[alpha] on nodes r_i = i h, i = 1..M. With `robin`, M = N and the ghost
// value u_{N+1} = u_{N-1} - 2h(l+1) u_N closes the last row; otherwise
// M = N - 1 and u_N = 0.
Eigen::MatrixXd q_operator(int n_intervals, int l, const AlphaProfile& alpha, bool robin) {
  const double h = 1.0 / n_intervals;
  const int m = robin ? n_intervals : n_intervals - 1;
  const double ll = static_cast<double>(l) * (l + 1);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);

  // adds coef * u_node to row, resolving u_0, u_N (Dirichlet) and the ghost
  auto add = [&](int row, int node, double coef) {
    if (node == 0) return;
    if (node == n_intervals + 1) {
      q(row, n_intervals - 2) += coef;
      q(row, n_intervals - 1) += coef * (-2.0 * h * (l + 1));
      return;
    }
    if (node > m) return;
    q(row, node - 1) += coef;
  };

  for (int i = 1; i <= m; ++i) {
    const double ri = i * h;
    const double outer_plus = 1.0 / h + 0.5 / ri;    // weight of midpoint i+1/2
    const double outer_minus = -1.0 / h + 0.5 / ri;  // weight of midpoint i-1/2
    for (const auto& [mid, outer] : {std::pair{i + 1, outer_plus}, std::pair{i, outer_minus}}) {
      // midpoint (mid - 1/2) h, first-order factor on nodes mid-1, mid
      const double rm = (mid - 0.5) * h;
      const double am = alpha(rm);
      add(i - 1, mid - 1, -outer * am * (-1.0 / h + 0.5 / rm));
      add(i - 1, mid, -outer * am * (1.0 / h + 0.5 / rm));
    }
    q(i - 1, i - 1) += alpha(ri) * ll / (ri * ri);
  }
  return q;
}

}  // namespace

double AlphaProfile::operator()(double r) const {
  if (kind == Kind::Constant) return C;
  const double r2 = r * r;
  return C * (-(21.465 + 2.467 * zeta) + (426.412 + 167.928 * zeta) * r2 -
              (806.729 + 436.289 * zeta) * r2 * r + (392.276 + 272.991 * zeta) * r2 * r2);
}

double alpha_eval(const AlphaProfile& profile, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("alpha_eval: r must lie in [0, 1]");
  return profile(r);
}

std::string_view to_string(BoundaryKind kind) {
  return kind == BoundaryKind::Idealized ? "idealized" : "realistic";
}

BoundaryKind boundary_kind_from_string(std::string_view s) {
  if (s == "idealized") return BoundaryKind::Idealized;
  if (s == "realistic") return BoundaryKind::Realistic;
  throw InvalidInput("unknown boundary condition kind '" + std::string(s) + "'");
}

void DynamoConfig::validate() const {
  if (N < 16) throw InvalidInput("dynamo: N must be at least 16");
  if (l < 1) throw InvalidInput("dynamo: l must be at least 1");
  if (!std::isfinite(profile.C) || !std::isfinite(profile.zeta)) {
    throw InvalidInput("dynamo: alpha profile parameters must be finite");
  }
}

DiscretizedOperator assemble_dynamo(const DynamoConfig& cfg) {
  cfg.validate();
  const int n = cfg.N;
  const double h = 1.0 / n;
  const bool robin = cfg.bc == BoundaryKind::Realistic;
  const int m1 = robin ? n : n - 1;  // poloidal unknowns
  const int m2 = n - 1;              // toroidal unknowns

  const AlphaProfile unit{AlphaProfile::Kind::Constant, 1.0, 0.0};
  const Eigen::MatrixXd q1_pol = q_operator(n, cfg.l, unit, robin);
  const Eigen::MatrixXd q1_tor = robin ? q_operator(n, cfg.l, unit, false) : q1_pol;
  // rows of Q[alpha] at toroidal nodes; none of them touches the ghost
  const Eigen::MatrixXd q_alpha = q_operator(n, cfg.l, cfg.profile, robin).topRows(m2);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m1 + m2, m1 + m2);
  a.topLeftCorner(m1, m1) = -q1_pol;
  for (int i = 0; i < m2; ++i) a(i, m1 + i) = cfg.profile((i + 1) * h);
  a.bottomLeftCorner(m2, m1) = q_alpha;
  a.bottomRightCorner(m2, m2) = -q1_tor;

  DiscretizedOperator op;
  op.matrix = a.cast<cplx>();
  op.grid.resize(static_cast<std::size_t>(m1));
  for (int i = 0; i < m1; ++i) op.grid[static_cast<std::size_t>(i)] = (i + 1) * h;
  op.component_sizes = {m1, m2};
  op.meta = robin ? "u1: vacuum Robin u1'+(l+1)u1=0 at r=1 via ghost node; u2: Dirichlet at r=1; "
                    "regularity u(0)=0 via first midpoint"
                  : "u1, u2: Dirichlet at r=1; regularity u(0)=0 via first midpoint";
  return op;
}

std::vector<cplx> dynamo_spectrum(const DynamoConfig& cfg) {
  const auto op = assemble_dynamo(cfg);
  auto ev = dense_eigs(Eigen::MatrixXd(op.matrix.real()));
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return ev;
}

}  // namespace kreinspec::dynamo
