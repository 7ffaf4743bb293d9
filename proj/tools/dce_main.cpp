#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "dce/errors.hpp"
#include "dce/scenario.hpp"

namespace {

int dispatch(const std::string& verb, const std::string& config_path,
             const std::string& cmp_a, const std::string& cmp_b,
             const std::string& out_dir, int workers, double tolerance) {
  using namespace dce;
  if (verb == "run") {
    return run_scenario(load_scenario_file(config_path), out_dir, std::cout);
  }
  if (verb == "scan") {
    return scan_scenario(load_scenario_file(config_path), out_dir, workers,
                         std::cout);
  }
  if (verb == "compare") {
    return compare_outputs(cmp_a, cmp_b, tolerance, std::cout);
  }
  return validate_scenario(config_path, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dce: mode mixing and particle creation for a 1-D cavity with moving "
      "boundaries, in flat or static curved exteriors"};
  app.require_subcommand(1);

  std::string out_dir;
  int workers = 0;
  double tolerance = 1e-12;
  app.add_option("--out-dir", out_dir, "override the scenario output directory");
  app.add_option("--workers", workers, "worker threads for scans (0 = automatic)");
  app.add_option("--tolerance", tolerance, "comparison tolerance for `compare`");

  std::string run_config, scan_config, validate_config, cmp_a, cmp_b;
  CLI::App* run = app.add_subcommand("run", "execute the methods in a scenario file");
  run->add_option("config", run_config, "scenario JSON file")->required();
  CLI::App* scan =
      app.add_subcommand("scan", "closed-form drive-frequency scan of |beta|");
  scan->add_option("config", scan_config, "scenario JSON file with a run.scan block")
      ->required();
  CLI::App* compare =
      app.add_subcommand("compare", "compare two run outputs via their manifests");
  compare->add_option("manifest_a", cmp_a, "first manifest.json")->required();
  compare->add_option("manifest_b", cmp_b, "second manifest.json")->required();
  CLI::App* validate =
      app.add_subcommand("validate", "check a scenario file without running it");
  validate->add_option("config", validate_config, "scenario JSON file")->required();
  // let `dce run cfg.json --out-dir X` work: route the app-level options
  // through every subcommand instead of demanding they come first
  for (CLI::App* sub : {run, scan, compare, validate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dce::kExitValidation;
  }

  std::string verb, config_path;
  if (run->parsed()) {
    verb = "run";
    config_path = run_config;
  } else if (scan->parsed()) {
    verb = "scan";
    config_path = scan_config;
  } else if (compare->parsed()) {
    verb = "compare";
  } else {
    verb = "validate";
    config_path = validate_config;
  }

  try {
    return dispatch(verb, config_path, cmp_a, cmp_b, out_dir, workers, tolerance);
  } catch (const dce::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return dce::kExitValidation;
  } catch (const dce::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return dce::kExitNumerical;
  } catch (const dce::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return dce::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dce::kExitNumerical;
  }
}
