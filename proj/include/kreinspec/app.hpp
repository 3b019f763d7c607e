#pragma once

// Orchestration behind the command-line tool: run a configured sweep, emit
// the branches table and EP report, and run the built-in oracle suites.

#include "kreinspec/branch_tracker.hpp"
#include "kreinspec/config.hpp"

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kreinspec {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid = 2;
inline constexpr int solver = 3;
inline constexpr int ambiguous = 4;
}  // namespace exit_code

/// Exit code for an exception escaping run/verify.
int exit_code_for(const std::exception& e);

struct EpExponent {
  std::optional<double> exponent;  // empty when no usable window exists
  int points = 0;
};

struct RunResult {
  std::vector<SpectralBranch> branches;
  std::vector<ExceptionalPoint> eps;
  std::vector<EpExponent> exponents;  // parallel to eps
  std::optional<TriplePointCandidate> triple_point;
};

RunResult execute(const RunConfig& config);

/// 12 significant digits, rounded; "-0" prints as "0".
std::string format_number(double v);

/// Header `param,branch_id,re,im,is_real`, rows parameter-major then branch_id.
std::string branches_csv(const std::vector<SpectralBranch>& branches);

/// JSON report: tool, version, model, echoed config, EPs and triple point.
std::string ep_report(const RunConfig& config, const RunResult& result);

struct RunOverrides {
  std::optional<int> steps;
  std::optional<double> precision;
  std::optional<std::string> out_dir;
};

/// Loads, overrides, executes and writes both outputs. Diagnostics go to
/// `err` as single lines. Returns the process exit code.
int run_command(const std::string& config_path, const RunOverrides& overrides, std::ostream& out,
                std::ostream& err);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline const std::vector<std::string> kSuites = {"toy-triple-root", "dynamo-constant-alpha",
                                                 "squire-oscillator", "box-exact"};

/// Runs one oracle suite. Throws InvalidInput for unknown suites.
std::vector<CheckResult> run_suite(const std::string& suite);

/// Reads {"suite": name} from the config file, prints one PASS/FAIL line per
/// check and returns 0 iff all pass.
int verify_command(const std::string& config_path, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace kreinspec
