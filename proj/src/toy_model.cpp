#include "kreinspec/toy_model.hpp"

#include "kreinspec/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kreinspec::toy {

Eigen::Matrix2cd assemble_two_by_two(const TwoByTwoParams& p) {
  Eigen::Matrix2cd h;
  h << p.x + p.y, p.w, -std::conj(p.w), p.x - p.y;
  return h;
}

TwoByTwoSpectrum two_by_two_eigs(const TwoByTwoParams& p, double ep_tol) {
  const double aw = std::abs(p.w);
  // factored form keeps the cone y^2 = |w|^2 exact
  const double d = (p.y - aw) * (p.y + aw);
  const cplx root = std::sqrt(cplx(d, 0.0));
  TwoByTwoSpectrum out;
  out.plus = p.x + root;
  out.minus = p.x - root;
  const double scale = std::max({1.0, p.y * p.y, aw * aw});
  out.at_exceptional_point = std::abs(d) <= ep_tol * scale;
  return out;
}

void ToyParams::validate() const {
  for (double v : {x1, y1, w1, x2, y2, w2, z}) {
    if (!std::isfinite(v)) throw InvalidInput("toy parameter is not finite");
  }
}

double& ToyParams::at(std::string_view name) {
  if (name == "x1") return x1;
  if (name == "y1") return y1;
  if (name == "w1") return w1;
  if (name == "x2") return x2;
  if (name == "y2") return y2;
  if (name == "w2") return w2;
  if (name == "z") return z;
  throw InvalidInput("unknown toy parameter '" + std::string(name) + "'");
}

double ToyParams::at(std::string_view name) const { return const_cast<ToyParams&>(*this).at(name); }

Eigen::Matrix4d parity() { return Eigen::Vector4d(1.0, 1.0, -1.0, -1.0).asDiagonal(); }

Eigen::Matrix4d assemble_h4(const ToyParams& p) {
  p.validate();
  Eigen::Matrix4d h;
  // clang-format off
  h << p.x1 + p.y1, 0.0,         p.w1,        p.z,
       0.0,         p.x2 + p.y2, 0.0,         p.w2,
       -p.w1,       0.0,         p.x1 - p.y1, 0.0,
       -p.z,        -p.w2,       0.0,         p.x2 - p.y2;
  // clang-format on
  return h;
}

QuarticCoeffs char_coeffs(const ToyParams& p) {
  p.validate();
  const double d1 = p.y1 * p.y1 - p.w1 * p.w1;
  const double d2 = p.y2 * p.y2 - p.w2 * p.w2;
  const double z2 = p.z * p.z;
  const double sx = p.x1 + p.x2;
  QuarticCoeffs c;
  c.a3 = -2.0 * sx;
  c.a2 = -d1 - d2 + sx * sx + 2.0 * p.x1 * p.x2 + z2;
  c.a1 = 2.0 * (p.x1 * (d2 - p.x2 * p.x2) + p.x2 * (d1 - p.x1 * p.x1)) -
         z2 * (p.x1 - p.y1 + p.x2 + p.y2);
  c.a0 = (d1 - p.x1 * p.x1) * (d2 - p.x2 * p.x2) + z2 * (p.x1 - p.y1) * (p.x2 + p.y2);
  return c;
}

std::array<cplx, 4> uncoupled_eigs(const ToyParams& p) {
  const auto s1 = two_by_two_eigs({p.x1, p.y1, p.w1});
  const auto s2 = two_by_two_eigs({p.x2, p.y2, p.w2});
  return {s1.plus, s1.minus, s2.plus, s2.minus};
}

TripleRootSolution triple_root_params(int epsilon, int delta) {
  if ((epsilon != 1 && epsilon != -1) || (delta != 1 && delta != -1)) {
    throw InvalidInput("triple_root_params: epsilon and delta must be +1 or -1");
  }
  TripleRootSolution s;
  s.epsilon = epsilon;
  s.delta = delta;
  const double l4 = 3.0 + std::pow(2.0, 1.5) * epsilon;
  const double root = std::sqrt(9.0 * l4 * l4 + 2.0 * l4 + 1.0);
  s.lambda4_c = l4;
  s.x2_c = 0.5 * (l4 + 3.0);
  s.y1_c = 0.5 * (-(3.0 * l4 + 1.0) + delta * root);
  s.y2_c = l4 - 1.0 + 0.5 * delta * root;
  return s;
}

ToyParams to_toy_params(const TripleRootSolution& s) {
  ToyParams p;
  p.x1 = s.x1_c;
  p.x2 = s.x2_c;
  p.y1 = p.w1 = s.y1_c;
  p.y2 = p.w2 = s.y2_c;
  p.z = s.z_c;
  return p;
}

ToyParams blowup_path(const TripleRootSolution& s, double t) {
  ToyParams p;
  p.x1 = s.x1_c;
  p.x2 = s.x2_c + t;
  p.y1 = s.y1_c + 2.0 * t * t;
  p.y2 = s.y2_c - t * t * t;
  p.w1 = s.y1_c - t;
  p.w2 = s.y2_c + 3.0 * t * t;
  p.z = s.z_c;
  return p;
}

}  // namespace kreinspec::toy
