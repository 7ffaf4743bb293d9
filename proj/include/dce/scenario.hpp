#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dce/integrator.hpp"
#include "dce/io.hpp"
#include "dce/modes.hpp"
#include "dce/perturbative.hpp"
#include "dce/quadrature.hpp"
#include "dce/scattering.hpp"
#include "dce/spacetime.hpp"
#include "dce/trajectory.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// JSON scenario files describe one complete computation in five blocks:
//
//   spacetime  — {"horizon_radius": rs >= 0}                       (optional, flat default)
//   cavity     — {"x1", "x2", "n_modes"} or {"r0", "L0", "n_modes"}
//                (curved runs require the radial r0/L0 form)
//   trajectory — {"kind": "static" | "oscillating-wall" |
//                 "rigid-translation" | "tabulated", ...}          (optional, static default)
//   run        — methods, integrator controls, quadrature tolerances,
//                optional "scan" block                             (optional)
//   output     — {"dir": path}                                     (optional)
//
// Unknown keys anywhere are errors.  Validation collects every violation
// before failing so a bad file is reported in full.
// ---------------------------------------------------------------------------

struct ScanSpec {
  Real nu_min = 0.0;
  Real nu_max = 0.0;
  int points = 0;
  int m = 1;
  int n = 2;
};

struct ScenarioConfig {
  SchwarzschildSpacetime spacetime{0.0};
  CavityConfig cavity;
  std::optional<Trajectory> trajectory;  // conformal frame, ready to evolve
  std::optional<OscillatingScenario> oscillating;  // set for oscillating-wall runs
  std::vector<std::string> methods;
  IntegrationSettings integration;
  QuadratureSettings quadrature;
  int interior = 0;  // 0 = use n_modes / 2 when reporting residuals
  std::optional<ScanSpec> scan;
  std::string output_dir = ".";
  Json resolved;  // fully resolved config, echoed into the manifest
};

// Parse and validate; throws validation_error listing every violation.
ScenarioConfig load_scenario(const Json& j);
ScenarioConfig load_scenario_file(const std::string& path);

// Execute the methods listed in the scenario, writing per-method transform
// and spectrum files plus manifest.json into the output directory.
// `out_dir_override` (non-empty) replaces the scenario's output dir.
// Returns a process exit code.
int run_scenario(const ScenarioConfig& config, const std::string& out_dir_override,
                 std::ostream& log);

// Closed-form drive-frequency scan (scenario must be oscillating-wall with a
// scan block).  `workers` <= 0 picks a small default.
int scan_scenario(const ScenarioConfig& config, const std::string& out_dir_override,
                  int workers, std::ostream& log);

// Compare two run outputs by their manifests: per-method max-abs transform
// differences and spectrum differences.  Returns kExitOk when everything
// common is within `tolerance`, kExitValidation otherwise.
int compare_outputs(const std::string& manifest_a, const std::string& manifest_b,
                    Real tolerance, std::ostream& log);

// Load, validate, and report on a scenario without running it.
int validate_scenario(const std::string& path, std::ostream& log);

}  // namespace dce
