#include "kreinspec/branch_tracker.hpp"
#include "kreinspec/error.hpp"
#include "kreinspec/toy_model.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace kreinspec;

namespace {

MatrixFamily cone_family() {
  // 2x2 model at x = 0, y = 1 with real w swept
  return MatrixFamily("cone", [](double w) {
    return Eigen::MatrixXcd(toy::assemble_two_by_two({0.0, 1.0, cplx(w, 0.0)}));
  });
}

// Toy model along the blow-up path at fixed t, swept in z.
MatrixFamily toy_in_z(double t) {
  const auto sol = toy::triple_root_params(1, 1);
  return MatrixFamily("toy-z", [sol, t](double z) {
    auto p = toy::blowup_path(sol, t);
    p.z = z;
    return Eigen::MatrixXcd(toy::assemble_h4(p).cast<cplx>());
  });
}

MatrixFamily toy_in_t(double z) {
  const auto sol = toy::triple_root_params(1, 1);
  return MatrixFamily("toy-t", [sol, z](double t) {
    auto p = toy::blowup_path(sol, t);
    p.z = z;
    return Eigen::MatrixXcd(toy::assemble_h4(p).cast<cplx>());
  });
}

double toy_disc(double t, double z) {
  auto p = toy::blowup_path(toy::triple_root_params(1, 1), t);
  p.z = z;
  return quartic_discriminant(toy::char_coeffs(p));
}

int real_roots(double t, double z) {
  auto p = toy::blowup_path(toy::triple_root_params(1, 1), t);
  p.z = z;
  int n = 0;
  for (const cplx r : poly_roots(toy::char_coeffs(p))) n += std::abs(r.imag()) < 1e-9;
  return n;
}

}  // namespace

TEST_CASE("sweep input validation") {
  const auto f = cone_family();
  CHECK_THROWS_AS(sweep(f, 1.0, 0.0, 10), InvalidInput);
  CHECK_THROWS_AS(sweep(f, 0.0, 1.0, 1), InvalidInput);
}

TEST_CASE("sweep continues branches through a crossing") {
  MatrixFamily f("cross", [](double p) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = p;
    m(1, 1) = -p;
    return m;
  });
  const auto br = sweep(f, -1.0, 1.0, 41);
  REQUIRE(br.size() == 2);
  // with the descending order, branch 0 starts at +1 (value -p) and keeps following -p
  for (const auto& s : br[0].samples) CHECK(s.value.real() == doctest::Approx(-s.parameter));
  for (const auto& s : br[1].samples) CHECK(s.value.real() == doctest::Approx(s.parameter));
  for (std::size_t i = 1; i < br[0].samples.size(); ++i) CHECK(br[0].samples[i].parameter > br[0].samples[i - 1].parameter);
}

TEST_CASE("sweep is deterministic and independent of the worker count") {
  const auto f = toy_in_z(-0.03);
  TrackerConfig one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = sweep(f, 0.0, 2.0, 101, one);
  const auto b = sweep(f, 0.0, 2.0, 101, four);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].samples.size() == b[i].samples.size());
    for (std::size_t k = 0; k < a[i].samples.size(); ++k) {
      CHECK(a[i].samples[k].parameter == b[i].samples[k].parameter);
      CHECK(a[i].samples[k].value == b[i].samples[k].value);
    }
  }
}

TEST_CASE("sweep reports an unresolvable jump") {
  MatrixFamily f("jump", [](double p) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = p < 0.5 ? 0.0 : 50.0;
    m(1, 1) = 100.0 + p;
    return m;
  });
  TrackerConfig cfg;
  cfg.max_refinements = 4;
  CHECK_THROWS_AS(sweep(f, 0.0, 1.0, 21, cfg), StepRefinementRequired);
}

TEST_CASE("2x2 cone: EP at |w| = y with eigenvalue 0") {
  const auto f = cone_family();
  const auto br = sweep(f, 0.0, 2.0, 41);
  REQUIRE(br.size() == 2);
  CHECK(br[0].samples.front().is_real);
  CHECK_FALSE(br[0].samples.back().is_real);
  const auto eps = find_eps(br, f, 1e-12);
  REQUIRE(eps.size() == 1);
  CHECK(eps[0].parameter == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(eps[0].eigenvalue) < 1e-5);
  CHECK(eps[0].order == 2);
  CHECK(eps[0].bracket_width <= 1e-12);
  CHECK(eps[0].iterations <= static_cast<int>(std::ceil(std::log2(0.05 / 1e-12))) + 2);

  // closed form: the pair splits as sqrt(1 - w^2)
  const auto fit = ep_exponent_check(eps[0], f, {1e-3, 2.0, 9, 0, 0.1});
  CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.02));
  CHECK(fit.square_root);
}

TEST_CASE("toy path at fixed t: two EPs bracket a real segment") {
  const double t = -0.01;
  const auto f = toy_in_z(t);
  const auto br = sweep(f, 0.9, 1.05, 151);
  const auto eps = find_eps(br, f, 1e-12);
  REQUIRE(eps.size() == 2);
  const double mid = 0.5 * (eps[0].parameter + eps[1].parameter);
  const double sep = eps[1].parameter - eps[0].parameter;
  CHECK(real_roots(t, mid) == 4);
  CHECK(real_roots(t, eps[0].parameter - sep) == 2);
  CHECK(real_roots(t, eps[1].parameter + sep) == 2);
  for (const auto& ep : eps) {
    // sign change of the quartic discriminant across the refined location
    CHECK(toy_disc(t, ep.parameter - 1e-8) * toy_disc(t, ep.parameter + 1e-8) < 0.0);
    CHECK(ep.gap_residual < 1e-4);
  }
}

TEST_CASE("eigenvectors coalesce at a detected EP") {
  const auto f = toy_in_z(-0.03);
  const auto eps = find_eps(sweep(f, 0.9, 1.05, 151), f, 1e-13);
  REQUIRE_FALSE(eps.empty());
  const auto& ep = eps.front();
  auto overlap = [&](double offset) {
    const double p = ep.parameter - offset;  // outside, on the side where the pair is real or complex
    const auto pairs = dense_eigenpairs(f.matrix(p));
    std::size_t a = 0, b = 1;
    double best = 1e300;
    for (std::size_t i = 0; i < pairs.values.size(); ++i)
      for (std::size_t j = i + 1; j < pairs.values.size(); ++j) {
        const double d = std::abs(pairs.values[i] - ep.eigenvalue) + std::abs(pairs.values[j] - ep.eigenvalue);
        if (d < best) {
          best = d;
          a = i;
          b = j;
        }
      }
    return std::abs(pairs.vectors.col(static_cast<Eigen::Index>(a)).dot(pairs.vectors.col(static_cast<Eigen::Index>(b))));
  };
  const double far = overlap(1e-4), near = overlap(1e-8);
  CHECK(near > far);
  CHECK(near > 0.999);
}

TEST_CASE("square-root exponents along the blow-up path") {
  const auto f = toy_in_t(1.0);
  const auto eps = find_eps(sweep(f, -0.2, 0.2, 401), f, 1e-12);
  int checked = 0;
  for (const auto& ep : eps) {
    if (ep.order != 2) continue;
    const auto fit = ep_exponent_check(ep, f);
    CHECK(fit.exponent >= 0.4);
    CHECK(fit.exponent <= 0.6);
    ++checked;
  }
  CHECK(checked == 2);
}

TEST_CASE("triple coalescence on the path is reported as an order-3 event") {
  const auto f = toy_in_t(1.0);
  const auto eps = find_eps(sweep(f, -0.2, 0.2, 401), f, 1e-12);
  int order3 = 0;
  for (const auto& ep : eps) {
    if (ep.order != 3) continue;
    ++order3;
    CHECK(std::abs(ep.parameter) < 1e-9);
    CHECK(std::abs(ep.eigenvalue - 1.0) < 1e-3);
    CHECK(ep.jordan_type == JordanType::TypeI);
  }
  CHECK(order3 == 1);
}

TEST_CASE("exponent window validation") {
  const auto f = cone_family();
  const auto eps = find_eps(sweep(f, 0.0, 2.0, 41), f, 1e-6);
  REQUIRE(eps.size() == 1);
  CHECK_THROWS_AS(ep_exponent_check(eps[0], f, {1e-5, 1.0, 9, 0, 0.1}), InvalidInput);
  CHECK_THROWS_AS(ep_exponent_check(eps[0], f, {1e-3, 1.0, 2, 0, 0.1}), InvalidInput);
}

TEST_CASE("a bracket with several reality changes is ambiguous") {
  MatrixFamily f("wiggle", [](double p) {
    const double w = 1.0 - 0.2 * std::cos(5.0 * std::numbers::pi * p);
    return Eigen::MatrixXcd(toy::assemble_two_by_two({0.0, 1.0, cplx(w, 0.0)}));
  });
  const auto br = sweep(f, 0.0, 1.0, 2);
  CHECK_THROWS_AS(find_eps(br, f, 1e-10), AmbiguousBracket);
}

TEST_CASE("local discriminant sign") {
  const std::vector<cplx> three_real{1.0, 1.1, 1.3, 7.0};
  CHECK(local_discriminant(three_real, 1.1) > 0.0);
  const std::vector<cplx> pair_and_real{cplx(1.0, 0.1), cplx(1.0, -0.1), 1.2, 7.0};
  CHECK(local_discriminant(pair_and_real, 1.1) < 0.0);
  const auto cl = local_cluster(pair_and_real, cplx(1.0, 0.1), 2);
  REQUIRE(cl.size() == 2);
  CHECK(cl[1] == std::conj(cl[0]));
}

TEST_CASE("locate_ep_pair matches find_eps and reports absence") {
  const auto f = toy_in_z(-0.01);
  const auto eps = find_eps(sweep(f, 0.9, 1.05, 151), f, 1e-12);
  REQUIRE(eps.size() == 2);
  const auto res = locate_ep_pair(f, 0.98, 1.0, 1.0, 1e-12);
  REQUIRE(res.status == PairSearchStatus::Found);
  CHECK(res.pair->first.parameter == doctest::Approx(eps[0].parameter).epsilon(1e-9));
  CHECK(res.pair->second.parameter == doctest::Approx(eps[1].parameter).epsilon(1e-9));

  // below grid resolution: the two EPs at t = -0.001 are 2e-5 apart
  const auto close = locate_ep_pair(toy_in_z(-0.001), 0.99, 1.01, 1.0, 1e-12);
  REQUIRE(close.status == PairSearchStatus::Found);
  CHECK(close.pair->separation() > 0.0);
  CHECK(close.pair->separation() < 1e-4);

  CHECK(locate_ep_pair(toy_in_z(0.01), 0.98, 1.02, 1.0, 1e-12).status == PairSearchStatus::Absent);
}

TEST_CASE("EP pair separation shrinks toward the triple point") {
  TwoParameterFamily fam2 = [](double t) { return toy_in_z(t); };
  const std::vector<double> ts{-0.1, -0.03, -0.01, -0.003, -0.001};
  const auto track = track_ep_pair(fam2, ts, {0.0, 2.0}, 1e-12);
  REQUIRE(track.size() == ts.size());
  double last = 1e300;
  for (const auto& s : track) {
    REQUIRE(s.pair.has_value());
    CHECK(s.pair->separation() < last);
    last = s.pair->separation();
  }
  CHECK(last < 1e-3);
}

TEST_CASE("triple point of the toy model in (z, t)") {
  TwoParameterFamily fam2 = [](double t) { return toy_in_z(t); };
  const auto tp = find_triple_point(fam2, {0.0, 2.0}, {-0.1, 0.1}, 1e-10);
  CHECK(tp.coalesced);
  CHECK(tp.primary_parameter == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(tp.secondary_parameter) < 1e-6);
  CHECK(std::abs(tp.eigenvalue - 1.0) < 1e-2);
  CHECK(tp.jordan_type == JordanType::TypeI);
  REQUIRE(tp.multiplicity.has_value());
  CHECK(tp.multiplicity->rank_filtration == std::vector<int>{3, 2, 1});
  CHECK(tp.initial_eps.size() >= 2);
  for (std::size_t i = 1; i < tp.ep_separation_history.size(); ++i) {
    CHECK(tp.ep_separation_history[i].second <= tp.ep_separation_history[i - 1].second * 1.0001 + 1e-9);
  }
}

TEST_CASE("triple point of the toy model in (t, z) coalesces at z = 1") {
  TwoParameterFamily fam2 = [](double z) { return toy_in_t(z); };
  const auto tp = find_triple_point(fam2, {-0.2, 0.2}, {0.99, 1.01}, 1e-10);
  CHECK(tp.coalesced);
  CHECK(tp.secondary_parameter == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(tp.primary_parameter) < 1e-6);
  CHECK(tp.jordan_type == JordanType::TypeI);
}

TEST_CASE("triple-point search preconditions") {
  TwoParameterFamily fam2 = [](double t) { return toy_in_z(t); };
  CHECK_THROWS_AS(find_triple_point(fam2, {0.9, 1.1}, {0.05, 0.1}, 1e-10), InvalidInput);
  CHECK_THROWS_AS(find_triple_point(fam2, {1.0, 0.0}, {-0.1, 0.1}, 1e-10), InvalidInput);
}

TEST_CASE("thread count resolution") {
  TrackerConfig cfg;
  cfg.threads = 3;
  CHECK(resolve_thread_count(cfg) == 3);
  cfg.threads = 0;
  setenv("KREINSPEC_THREADS", "2", 1);
  CHECK(resolve_thread_count(cfg) == 2);
  unsetenv("KREINSPEC_THREADS");
  CHECK(resolve_thread_count(cfg) >= 1);
}
