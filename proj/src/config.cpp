#include "kreinspec/config.hpp"

#include "kreinspec/dynamo.hpp"
#include "kreinspec/error.hpp"
#include "kreinspec/squire.hpp"
#include "kreinspec/toy_model.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kreinspec {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 4> kModelNames = {"two_by_two", "toy4", "dynamo", "squire"};

const std::set<std::string> kIntegerKeys = {"l", "N", "track", "epsilon", "delta"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InvalidInput(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw InvalidInput(where + ": unknown key '" + key + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw InvalidInput(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InvalidInput(where + ": must be finite");
  return d;
}

int integer(const json& v, const std::string& where) {
  const double d = number(v, where);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw InvalidInput(where + ": expected an integer");
  return static_cast<int>(d);
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) throw InvalidInput(where + ": expected a string");
  return v.get<std::string>();
}

std::array<double, 2> range_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw InvalidInput(where + ": expected [from, to]");
  return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
}

ModelSpec parse_model(const std::string& name, const json& params) {
  ModelSpec spec;
  spec.kind = model_kind_from_string(name);
  auto take = [&](const std::string& key, double fallback) {
    spec.values[key] = params.contains(key) ? number(params[key], "params." + key) : fallback;
  };
  switch (spec.kind) {
    case ModelKind::TwoByTwo:
      reject_unknown(params, {"x", "y", "w_re", "w_im"}, "params");
      for (const char* k : {"x", "y", "w_re", "w_im"}) take(k, 0.0);
      break;
    case ModelKind::Toy4: {
      std::set<std::string> allowed = {"base", "epsilon", "delta", "t"};
      for (auto n : toy::kToyParamNames) allowed.emplace(n);
      reject_unknown(params, allowed, "params");
      const std::string base = params.contains("base") ? text(params["base"], "params.base") : "blowup";
      spec.options["base"] = base;
      if (base == "blowup") {
        take("epsilon", 1.0);
        take("delta", 1.0);
        take("t", 0.0);
        for (auto n : toy::kToyParamNames) {
          const std::string key(n);
          if (params.contains(key)) take(key, 0.0);
        }
      } else if (base == "explicit") {
        for (const char* k : {"epsilon", "delta", "t"}) {
          if (params.contains(k)) throw InvalidInput(std::string("params.") + k + ": only valid with base 'blowup'");
        }
        for (auto n : toy::kToyParamNames) take(std::string(n), 0.0);
      } else {
        throw InvalidInput("params.base: expected 'blowup' or 'explicit'");
      }
      break;
    }
    case ModelKind::Dynamo:
      reject_unknown(params, {"l", "N", "bc", "profile", "C", "zeta", "track"}, "params");
      take("l", 1.0);
      take("N", 100.0);
      take("C", 1.0);
      take("zeta", 0.0);
      take("track", 10.0);
      spec.options["bc"] = params.contains("bc") ? text(params["bc"], "params.bc") : "realistic";
      spec.options["profile"] = params.contains("profile") ? text(params["profile"], "params.profile") : "polynomial";
      break;
    case ModelKind::Squire:
      reject_unknown(params, {"g", "nu", "b", "N", "track"}, "params");
      take("g", 1.0);
      take("nu", 0.0);
      take("b", 1.0);
      take("N", 64.0);
      take("track", 10.0);
      break;
  }
  for (const auto& [key, v] : spec.values) {
    if (kIntegerKeys.contains(key) && v != std::floor(v)) throw InvalidInput("params." + key + ": expected an integer");
  }
  return spec;
}

dynamo::DynamoConfig dynamo_config(const ModelSpec& spec) {
  dynamo::DynamoConfig c;
  c.l = static_cast<int>(spec.value("l"));
  c.N = static_cast<int>(spec.value("N"));
  c.bc = dynamo::boundary_kind_from_string(spec.options.at("bc"));
  const auto& profile = spec.options.at("profile");
  if (profile == "polynomial") {
    c.profile.kind = dynamo::AlphaProfile::Kind::Polynomial;
  } else if (profile == "constant") {
    c.profile.kind = dynamo::AlphaProfile::Kind::Constant;
  } else {
    throw InvalidInput("params.profile: expected 'polynomial' or 'constant'");
  }
  c.profile.C = spec.value("C");
  c.profile.zeta = spec.value("zeta");
  return c;
}

squire::SquireConfig squire_config(const ModelSpec& spec) {
  squire::SquireConfig c;
  c.g = spec.value("g");
  c.nu = spec.value("nu");
  c.b = spec.value("b");
  c.N = static_cast<int>(spec.value("N"));
  return c;
}

SpectrumWindow window_for(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::Dynamo:
      return {static_cast<std::size_t>(spec.value("track")), SpectrumOrder::RealDescending};
    case ModelKind::Squire:
      return {static_cast<std::size_t>(spec.value("track")), SpectrumOrder::RealAscending};
    default:
      return {};
  }
}

json params_json(const ModelSpec& spec) {
  json p = json::object();
  for (const auto& [k, v] : spec.options) p[k] = v;
  for (const auto& [k, v] : spec.values) {
    if (kIntegerKeys.contains(k)) {
      p[k] = static_cast<long long>(v);
    } else {
      p[k] = v;
    }
  }
  return p;
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kModelNames[static_cast<std::size_t>(kind)]; }

ModelKind model_kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kModelNames.size(); ++i) {
    if (kModelNames[i] == s) return static_cast<ModelKind>(i);
  }
  throw InvalidInput("unknown model '" + std::string(s) + "'");
}

double ModelSpec::value(const std::string& name) const {
  const auto it = values.find(name);
  if (it == values.end()) throw InvalidInput("model parameter '" + name + "' is not set");
  return it->second;
}

std::vector<std::string> ModelSpec::sweepable() const {
  switch (kind) {
    case ModelKind::TwoByTwo:
      return {"x", "y", "w_re", "w_im"};
    case ModelKind::Toy4: {
      std::vector<std::string> names(toy::kToyParamNames.begin(), toy::kToyParamNames.end());
      if (options.at("base") == "blowup") names.emplace_back("t");
      return names;
    }
    case ModelKind::Dynamo:
      return {"zeta", "C"};
    case ModelKind::Squire:
      return {"g", "nu", "b"};
  }
  return {};
}

Eigen::MatrixXcd model_matrix(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::TwoByTwo: {
      toy::TwoByTwoParams p{spec.value("x"), spec.value("y"), cplx(spec.value("w_re"), spec.value("w_im"))};
      return toy::assemble_two_by_two(p);
    }
    case ModelKind::Toy4: {
      toy::ToyParams p;
      if (spec.options.at("base") == "blowup") {
        const auto sol = toy::triple_root_params(static_cast<int>(spec.value("epsilon")),
                                                 static_cast<int>(spec.value("delta")));
        p = toy::blowup_path(sol, spec.value("t"));
      }
      for (auto n : toy::kToyParamNames) {
        const auto it = spec.values.find(std::string(n));
        if (it != spec.values.end()) p.at(n) = it->second;
      }
      return toy::assemble_h4(p).cast<cplx>();
    }
    case ModelKind::Dynamo:
      return dynamo::assemble_dynamo(dynamo_config(spec)).matrix;
    case ModelKind::Squire:
      return squire::pt_realify(squire::assemble_squire(squire_config(spec)).matrix).cast<cplx>();
  }
  throw InvalidInput("unknown model kind");
}

MatrixFamily make_family(const ModelSpec& spec, const std::string& parameter) {
  const auto names = spec.sweepable();
  if (std::find(names.begin(), names.end(), parameter) == names.end()) {
    throw InvalidInput("parameter '" + parameter + "' cannot be swept for model " + std::string(to_string(spec.kind)));
  }
  return MatrixFamily(
      std::string(to_string(spec.kind)) + ":" + parameter,
      [spec, parameter](double p) {
        auto s = spec;
        s.values[parameter] = p;
        return model_matrix(s);
      },
      window_for(spec));
}

TwoParameterFamily make_two_parameter_family(const ModelSpec& spec, const std::string& primary,
                                             const std::string& secondary) {
  make_family(spec, secondary);  // validates the name
  return [spec, primary, secondary](double s) {
    auto copy = spec;
    copy.values[secondary] = s;
    return make_family(copy, primary);
  };
}

void RunConfig::validate() const {
  const auto names = model.sweepable();
  auto check_name = [&](const std::string& p, const std::string& where) {
    if (std::find(names.begin(), names.end(), p) == names.end()) {
      throw InvalidInput(where + ": '" + p + "' cannot be swept for model " + std::string(to_string(model.kind)));
    }
  };
  check_name(sweep.parameter, "sweep.parameter");
  if (!(sweep.range[0] < sweep.range[1])) throw InvalidInput("sweep.range: expected from < to");
  if (sweep.steps < 2) throw InvalidInput("sweep.steps: at least 2");
  if (secondary) {
    check_name(secondary->parameter, "secondary.parameter");
    if (secondary->parameter == sweep.parameter) throw InvalidInput("secondary.parameter: must differ from sweep.parameter");
    if (secondary->range[0] == secondary->range[1]) throw InvalidInput("secondary.range: empty");
    if (secondary->steps < 1) throw InvalidInput("secondary.steps: at least 1");
  }
  const auto& t = tolerances;
  if (!(t.precision > 0.0)) throw InvalidInput("tolerances.precision: must be positive");
  if (!(t.tracker.reality_rel > 0.0) || !(t.tracker.jump_factor > 0.0) || !(t.tracker.jump_floor > 0.0)) {
    throw InvalidInput("tolerances: reality_rel, jump_factor and jump_floor must be positive");
  }
  if (t.tracker.max_refinements < 0) throw InvalidInput("tolerances.max_refinements: must be non-negative");
  if (!(t.numkit.rank_scale > 0.0) || !(t.numkit.diameter_factor >= 0.0) || !(t.numkit.cluster > 0.0)) {
    throw InvalidInput("tolerances: rank_scale and cluster must be positive, diameter_factor non-negative");
  }
  if (output.branches.empty() || output.report.empty()) throw InvalidInput("output: file names must be non-empty");

  switch (model.kind) {
    case ModelKind::Toy4:
      if (model.options.at("base") == "blowup") {
        toy::triple_root_params(static_cast<int>(model.value("epsilon")), static_cast<int>(model.value("delta")));
      }
      break;
    case ModelKind::Dynamo:
      dynamo_config(model).validate();
      break;
    case ModelKind::Squire:
      squire_config(model).validate();
      break;
    default:
      break;
  }

  // both sweep ends (and secondary ends) must produce a matrix
  std::size_t dim = 0;
  for (const double p : sweep.range) {
    auto s = model;
    s.values[sweep.parameter] = p;
    if (secondary) {
      for (const double q : secondary->range) {
        auto s2 = s;
        s2.values[secondary->parameter] = q;
        dim = static_cast<std::size_t>(model_matrix(s2).rows());
      }
    } else {
      dim = static_cast<std::size_t>(model_matrix(s).rows());
    }
  }
  if (model.values.contains("track")) {
    const double k = model.value("track");
    if (k < 1 || k > static_cast<double>(dim)) throw InvalidInput("params.track: must lie in [1, dimension]");
  }
}

RunConfig parse_run_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  reject_unknown(doc, {"model", "params", "sweep", "secondary", "tolerances", "output"}, "config");
  if (!doc.contains("model")) throw InvalidInput("config: 'model' is required");
  if (!doc.contains("sweep")) throw InvalidInput("config: 'sweep' is required");

  RunConfig c;
  c.model = parse_model(text(doc["model"], "model"), doc.value("params", json::object()));

  const auto& sw = doc["sweep"];
  reject_unknown(sw, {"parameter", "range", "steps"}, "sweep");
  if (!sw.contains("parameter") || !sw.contains("range")) throw InvalidInput("sweep: 'parameter' and 'range' are required");
  c.sweep.parameter = text(sw["parameter"], "sweep.parameter");
  c.sweep.range = range_of(sw["range"], "sweep.range");
  if (sw.contains("steps")) c.sweep.steps = integer(sw["steps"], "sweep.steps");

  if (doc.contains("secondary") && !doc["secondary"].is_null()) {
    const auto& se = doc["secondary"];
    reject_unknown(se, {"parameter", "range", "steps"}, "secondary");
    if (!se.contains("parameter") || !se.contains("range")) {
      throw InvalidInput("secondary: 'parameter' and 'range' are required");
    }
    SecondarySpec s;
    s.parameter = text(se["parameter"], "secondary.parameter");
    s.range = range_of(se["range"], "secondary.range");
    if (se.contains("steps")) s.steps = integer(se["steps"], "secondary.steps");
    c.secondary = s;
  }

  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    reject_unknown(t,
                   {"precision", "reality_rel", "jump_factor", "jump_floor", "max_refinements", "rank_scale",
                    "diameter_factor", "cluster"},
                   "tolerances");
    auto& tol = c.tolerances;
    if (t.contains("precision")) tol.precision = number(t["precision"], "tolerances.precision");
    if (t.contains("reality_rel")) tol.tracker.reality_rel = number(t["reality_rel"], "tolerances.reality_rel");
    if (t.contains("jump_factor")) tol.tracker.jump_factor = number(t["jump_factor"], "tolerances.jump_factor");
    if (t.contains("jump_floor")) tol.tracker.jump_floor = number(t["jump_floor"], "tolerances.jump_floor");
    if (t.contains("max_refinements")) {
      tol.tracker.max_refinements = integer(t["max_refinements"], "tolerances.max_refinements");
    }
    if (t.contains("rank_scale")) tol.numkit.rank_scale = number(t["rank_scale"], "tolerances.rank_scale");
    if (t.contains("diameter_factor")) {
      tol.numkit.diameter_factor = number(t["diameter_factor"], "tolerances.diameter_factor");
    }
    if (t.contains("cluster")) tol.numkit.cluster = number(t["cluster"], "tolerances.cluster");
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    reject_unknown(o, {"dir", "branches", "report"}, "output");
    if (o.contains("dir")) c.output.dir = text(o["dir"], "output.dir");
    if (o.contains("branches")) c.output.branches = text(o["branches"], "output.branches");
    if (o.contains("report")) c.output.report = text(o["report"], "output.report");
  }

  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string to_json_text(const RunConfig& c, int indent) {
  json doc;
  doc["model"] = std::string(to_string(c.model.kind));
  doc["params"] = params_json(c.model);
  doc["sweep"] = {{"parameter", c.sweep.parameter}, {"range", c.sweep.range}, {"steps", c.sweep.steps}};
  if (c.secondary) {
    doc["secondary"] = {
        {"parameter", c.secondary->parameter}, {"range", c.secondary->range}, {"steps", c.secondary->steps}};
  }
  const auto& t = c.tolerances;
  doc["tolerances"] = {{"precision", t.precision},
                       {"reality_rel", t.tracker.reality_rel},
                       {"jump_factor", t.tracker.jump_factor},
                       {"jump_floor", t.tracker.jump_floor},
                       {"max_refinements", t.tracker.max_refinements},
                       {"rank_scale", t.numkit.rank_scale},
                       {"diameter_factor", t.numkit.diameter_factor},
                       {"cluster", t.numkit.cluster}};
  doc["output"] = {{"dir", c.output.dir}, {"branches", c.output.branches}, {"report", c.output.report}};
  return doc.dump(indent);
}

}  // namespace kreinspec
