#include "kreinspec/app.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Spectra, branch tracking and exceptional points of parameter-dependent operators"};
  app.set_version_flag("--version", kreinspec::version());
  app.require_subcommand(1);

  std::string run_config;
  kreinspec::RunOverrides overrides;
  int steps = 0;
  double precision = 0.0;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Sweep a configured model and write branches and EP report");
  run->add_option("config", run_config, "JSON run configuration")->required();
  auto* steps_opt = run->add_option("--steps", steps, "Override sweep.steps")->check(CLI::Range(2, 100000000));
  auto* precision_opt =
      run->add_option("--precision", precision, "Override tolerances.precision")->check(CLI::PositiveNumber);
  auto* out_opt = run->add_option("--out-dir", out_dir, "Override output.dir");

  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "Run a built-in oracle suite");
  verify->add_option("config", verify_config, "JSON file naming the suite")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kreinspec::exit_code::invalid;
  }

  if (*run) {
    if (*steps_opt) overrides.steps = steps;
    if (*precision_opt) overrides.precision = precision;
    if (*out_opt) overrides.out_dir = out_dir;
    return kreinspec::run_command(run_config, overrides, std::cout, std::cerr);
  }
  return kreinspec::verify_command(verify_config, std::cout, std::cerr);
}
