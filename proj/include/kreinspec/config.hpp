#pragma once

// Run configuration: model selection, parameters, sweep ranges, tolerances
// and output locations, read from a JSON document.

#include "kreinspec/branch_tracker.hpp"
#include "kreinspec/family.hpp"
#include "kreinspec/numkit.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kreinspec {

enum class ModelKind { TwoByTwo, Toy4, Dynamo, Squire };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view s);

/// Normalized model parameters. Numeric values (integers included) live in
/// `values` with every default filled in; `options` holds the string-valued
/// choices (toy4: base; dynamo: bc, profile).
///
/// toy4 with base "blowup" reads epsilon, delta, t and applies any of
/// x1..z present in `values` on top of the path; base "explicit" uses
/// x1..z directly.
struct ModelSpec {
  ModelKind kind = ModelKind::TwoByTwo;
  std::map<std::string, double> values;
  std::map<std::string, std::string> options;

  double value(const std::string& name) const;
  /// Names accepted as sweep or secondary parameters for this model.
  std::vector<std::string> sweepable() const;
};

struct SweepSpec {
  std::string parameter;
  std::array<double, 2> range{0.0, 1.0};
  int steps = 201;
};

/// Secondary scan for the triple-point search; range[0] is the start and
/// may exceed range[1].
struct SecondarySpec {
  std::string parameter;
  std::array<double, 2> range{0.0, 1.0};
  int steps = 16;
};

struct Tolerances {
  double precision = 1e-10;
  TrackerConfig tracker;
  NumkitTolerances numkit;
};

struct OutputSpec {
  std::string dir = ".";
  std::string branches = "branches.csv";
  std::string report = "ep_report.json";
};

struct RunConfig {
  ModelSpec model;
  SweepSpec sweep;
  std::optional<SecondarySpec> secondary;
  Tolerances tolerances;
  OutputSpec output;

  /// Throws InvalidInput on any inconsistency.
  void validate() const;
};

/// Parses and validates a JSON document. Unknown keys are rejected.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::string& path);

/// Normalized JSON form; parse_run_config(to_json_text(c)) reproduces c.
std::string to_json_text(const RunConfig& config, int indent = 2);

/// Matrix family in `parameter` with every other value taken from `spec`.
MatrixFamily make_family(const ModelSpec& spec, const std::string& parameter);

/// Family in `primary` for each value of `secondary`.
TwoParameterFamily make_two_parameter_family(const ModelSpec& spec, const std::string& primary,
                                             const std::string& secondary);

/// Matrix of the model at the values in `spec`.
Eigen::MatrixXcd model_matrix(const ModelSpec& spec);

}  // namespace kreinspec
