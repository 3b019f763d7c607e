#include "kreinspec/app.hpp"

#include "kreinspec/dynamo.hpp"
#include "kreinspec/error.hpp"
#include "kreinspec/squire.hpp"
#include "kreinspec/toy_model.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#ifndef KREINSPEC_VERSION
#define KREINSPEC_VERSION "0.0.0"
#endif

namespace kreinspec {

using nlohmann::json;

std::string version() { return KREINSPEC_VERSION; }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const AmbiguousBracket*>(&e) || dynamic_cast<const Ambiguity*>(&e)) return exit_code::ambiguous;
  if (dynamic_cast<const InvalidInput*>(&e) || dynamic_cast<const json::exception*>(&e)) return exit_code::invalid;
  return exit_code::solver;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  // rounding can still produce a signed zero for denormals
  if (s == "-0") return "0";
  return s;
}

namespace {

double rounded(double v) { return std::stod(format_number(v)); }

json complex_json(cplx v) { return {{"re", rounded(v.real())}, {"im", rounded(v.imag())}}; }

json ep_json(const ExceptionalPoint& ep, const EpExponent* fit) {
  json j = {{"parameter", rounded(ep.parameter)},
            {"eigenvalue", complex_json(ep.eigenvalue)},
            {"branch_ids", ep.branch_ids},
            {"order", ep.order},
            {"jordan_type", std::string(to_string(ep.jordan_type))},
            {"gap_residual", rounded(ep.gap_residual)},
            {"bracket_width", rounded(ep.bracket_width)},
            {"iterations", ep.iterations}};
  if (fit) j["exponent"] = fit->exponent ? json(rounded(*fit->exponent)) : json(nullptr);
  return j;
}

EpExponent fit_exponent(const ExceptionalPoint& ep, const std::vector<ExceptionalPoint>& all,
                        const MatrixFamily& family, std::array<double, 2> range) {
  EpExponent out;
  if (ep.order != 2) return out;
  double room = std::min(ep.parameter - range[0], range[1] - ep.parameter);
  for (const auto& other : all) {
    if (&other != &ep) room = std::min(room, std::abs(other.parameter - ep.parameter));
  }
  ExponentFitOptions opts;
  opts.window_hi = std::min(1e-3 * (range[1] - range[0]), 0.1 * room);
  try {
    const auto fit = ep_exponent_check(ep, family, opts);
    out.exponent = fit.exponent;
    out.points = fit.points;
  } catch (const InvalidInput&) {
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw InvalidInput("write failed for '" + path.string() + "'");
}

}  // namespace

RunResult execute(const RunConfig& config) {
  RunResult result;
  const auto& tol = config.tolerances;
  const auto family = make_family(config.model, config.sweep.parameter);
  result.branches = sweep(family, config.sweep.range[0], config.sweep.range[1], config.sweep.steps, tol.tracker);
  result.eps = find_eps(result.branches, family, tol.precision, tol.tracker);
  for (const auto& ep : result.eps) result.exponents.push_back(fit_exponent(ep, result.eps, family, config.sweep.range));

  if (config.secondary) {
    const auto family2 =
        make_two_parameter_family(config.model, config.sweep.parameter, config.secondary->parameter);
    TriplePointOptions opts;
    opts.primary_steps = config.sweep.steps;
    opts.secondary_steps = config.secondary->steps;
    opts.numkit = tol.numkit;
    result.triple_point =
        find_triple_point(family2, config.sweep.range, config.secondary->range, tol.precision, tol.tracker, opts);
  }
  return result;
}

std::string branches_csv(const std::vector<SpectralBranch>& branches) {
  std::string out = "param,branch_id,re,im,is_real\n";
  if (branches.empty()) return out;
  const auto samples = branches.front().samples.size();
  for (std::size_t s = 0; s < samples; ++s) {
    for (const auto& b : branches) {
      const auto& x = b.samples[s];
      out += format_number(x.parameter);
      out += ',';
      out += std::to_string(b.branch_id);
      out += ',';
      out += format_number(x.value.real());
      out += ',';
      out += format_number(x.value.imag());
      out += x.is_real ? ",1\n" : ",0\n";
    }
  }
  return out;
}

std::string ep_report(const RunConfig& config, const RunResult& result) {
  json doc;
  doc["tool"] = "kreinspec";
  doc["version"] = version();
  doc["model"] = {{"kind", std::string(to_string(config.model.kind))},
                  {"parameter", config.sweep.parameter},
                  {"branches", result.branches.size()}};
  doc["config"] = json::parse(to_json_text(config));
  doc["exceptional_points"] = json::array();
  for (std::size_t i = 0; i < result.eps.size(); ++i) {
    const EpExponent* fit = i < result.exponents.size() ? &result.exponents[i] : nullptr;
    doc["exceptional_points"].push_back(ep_json(result.eps[i], fit));
  }
  if (result.triple_point) {
    const auto& tp = *result.triple_point;
    json t = {{"coalesced", tp.coalesced},
              {"primary_parameter", rounded(tp.primary_parameter)},
              {"secondary_parameter", rounded(tp.secondary_parameter)},
              {"eigenvalue", complex_json(tp.eigenvalue)},
              {"jordan_type", std::string(to_string(tp.jordan_type))}};
    if (tp.multiplicity) {
      t["algebraic"] = tp.multiplicity->algebraic;
      t["geometric"] = tp.multiplicity->geometric;
      t["rank_filtration"] = tp.multiplicity->rank_filtration;
    }
    json hist = json::array();
    for (const auto& [s, sep] : tp.ep_separation_history) hist.push_back({rounded(s), rounded(sep)});
    t["ep_separation_history"] = hist;
    json initial = json::array();
    for (const auto& ep : tp.initial_eps) initial.push_back(ep_json(ep, nullptr));
    t["initial_eps"] = initial;
    doc["triple_point"] = t;
  } else {
    doc["triple_point"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

int run_command(const std::string& config_path, const RunOverrides& overrides, std::ostream& out,
                std::ostream& err) {
  try {
    auto config = load_run_config(config_path);
    if (overrides.steps) config.sweep.steps = *overrides.steps;
    if (overrides.precision) config.tolerances.precision = *overrides.precision;
    if (overrides.out_dir) config.output.dir = *overrides.out_dir;
    config.validate();

    const auto result = execute(config);

    const std::filesystem::path dir(config.output.dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InvalidInput("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_file(dir / config.output.branches, branches_csv(result.branches));
    write_file(dir / config.output.report, ep_report(config, result));
    out << "branches: " << (dir / config.output.branches).string() << "\n"
        << "report: " << (dir / config.output.report).string() << "\n"
        << "exceptional points: " << result.eps.size() << "\n";
    return exit_code::ok;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

namespace {

CheckResult check(std::string name, double error, double tol, const std::string& what) {
  std::ostringstream d;
  d << what << " error " << format_number(error) << " (tolerance " << format_number(tol) << ")";
  return {std::move(name), error <= tol, d.str()};
}

std::vector<CheckResult> suite_toy() {
  std::vector<CheckResult> out;
  const auto sol = toy::triple_root_params(1, 1);
  const auto params = toy::to_toy_params(sol);
  const auto c = toy::char_coeffs(params);
  const double d0 = 1.0 + c.a3 + c.a2 + c.a1 + c.a0;
  const double d1 = 4.0 + 3.0 * c.a3 + 2.0 * c.a2 + c.a1;
  const double d2 = 12.0 + 6.0 * c.a3 + 2.0 * c.a2;
  out.push_back(check("char-poly-at-1", std::abs(d0), 1e-9, "|Delta(1)|"));
  out.push_back(check("char-poly-derivative-at-1", std::abs(d1), 1e-9, "|Delta'(1)|"));
  out.push_back(check("char-poly-second-derivative-at-1", std::abs(d2), 1e-9, "|Delta''(1)|"));

  const auto roots = poly_roots(c);
  const auto far = *std::max_element(roots.begin(), roots.end(),
                                     [](cplx a, cplx b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
  out.push_back(check("fourth-root", std::abs(far - (3.0 + 2.0 * std::numbers::sqrt2)), 1e-10, "|l4 - (3+2 sqrt2)|"));

  const Eigen::MatrixXcd h = toy::assemble_h4(params).cast<cplx>();
  const auto eig = dense_eigs(h);
  std::vector<cplx> near;
  for (const cplx v : eig)
    if (std::abs(v - 1.0) < 0.5) near.push_back(v);
  const auto report = jordan_structure(h, make_cluster(near), {});
  const bool ok = report.algebraic == 3 && report.geometric == 1 && report.jordan_type == JordanType::TypeI &&
                  report.rank_filtration == std::vector<int>{3, 2, 1};
  std::ostringstream d;
  d << "algebraic " << report.algebraic << ", geometric " << report.geometric << ", type "
    << to_string(report.jordan_type) << ", ranks";
  for (int r : report.rank_filtration) d << ' ' << r;
  out.push_back({"jordan-type-I", ok, d.str()});
  return out;
}

std::vector<double> j1_zeros(int count) {
  std::vector<double> zeros;
  auto f = [](double x) { return std::sph_bessel(1u, x); };
  const double step = 0.05;
  double a = 1.0;
  double fa = f(a);
  while (static_cast<int>(zeros.size()) < count) {
    const double b = a + step;
    const double fb = f(b);
    if (fa * fb < 0.0) {
      double lo = a, hi = b, flo = fa;
      for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

double dynamo_worst_relative_error(int n, const std::vector<double>& exact) {
  dynamo::DynamoConfig cfg;
  cfg.l = 1;
  cfg.N = n;
  cfg.bc = dynamo::BoundaryKind::Idealized;
  cfg.profile.kind = dynamo::AlphaProfile::Kind::Constant;
  cfg.profile.C = 1.0;
  const auto spec = dynamo_spectrum(cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) worst = std::max(worst, std::abs(spec[i] - exact[i]) / std::abs(exact[i]));
  return worst;
}

std::vector<CheckResult> suite_dynamo() {
  const auto kappa = j1_zeros(12);
  std::vector<double> exact;
  for (const double k : kappa) {
    exact.push_back(-k * k + k);
    exact.push_back(-k * k - k);
  }
  std::sort(exact.begin(), exact.end(), std::greater<>());
  exact.resize(10);

  std::vector<CheckResult> out;
  const double e400 = dynamo_worst_relative_error(400, exact);
  out.push_back(check("rightmost-ten-N400", e400, 1e-3, "max relative"));
  const double e200 = dynamo_worst_relative_error(200, exact);
  const double order = std::log2(e200 / e400);
  std::ostringstream d;
  d << "observed order " << format_number(order) << " from N=200,400 (expected [1.7, 2.3])";
  out.push_back({"convergence-order", order >= 1.7 && order <= 2.3, d.str()});
  return out;
}

std::vector<CheckResult> squire_levels(const squire::SquireConfig& cfg, const std::vector<double>& exact,
                                       double tol, const std::string& prefix) {
  const auto spec = squire::squire_spectrum(cfg, static_cast<int>(exact.size()));
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    out.push_back(check(prefix + "-E" + std::to_string(i), std::abs(spec.values[i] - exact[i]), tol,
                        "|E - " + format_number(exact[i]) + "|"));
  }
  return out;
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
  if (suite == "toy-triple-root") return suite_toy();
  if (suite == "dynamo-constant-alpha") return suite_dynamo();
  if (suite == "squire-oscillator") {
    squire::SquireConfig cfg;
    cfg.g = 1.0;
    cfg.nu = 0.0;
    cfg.b = 6.0;
    cfg.N = 64;
    return squire_levels(cfg, {1.0, 3.0, 5.0, 7.0}, 1e-6, "oscillator");
  }
  if (suite == "box-exact") {
    squire::SquireConfig cfg;
    cfg.g = 0.0;
    cfg.b = std::numbers::pi / 2.0;
    cfg.N = 64;
    return squire_levels(cfg, {1.0, 4.0, 9.0, 16.0, 25.0}, 1e-8, "box");
  }
  throw InvalidInput("unknown suite '" + suite + "'");
}

int verify_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(config_path);
    if (!in) throw InvalidInput("cannot read config file '" + config_path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw InvalidInput(std::string("config: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("suite") || !doc["suite"].is_string()) {
      throw InvalidInput("verify config must be an object with a string 'suite'");
    }
    const auto suite = doc["suite"].get<std::string>();
    bool all = true;
    for (const auto& c : run_suite(suite)) {
      out << (c.pass ? "PASS " : "FAIL ") << suite << "/" << c.name << ": " << c.detail << "\n";
      all = all && c.pass;
    }
    return all ? exit_code::ok : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace kreinspec
