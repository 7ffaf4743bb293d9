#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dce/errors.hpp"
#include "dce/io.hpp"
#include "dce/scenario.hpp"

using namespace dce;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test case, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("dce_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

Json minimal_flat() {
  return Json{{"cavity", {{"x1", 0.0}, {"x2", 1.0}, {"n_modes", 4}}}};
}

// Expect a validation failure whose message mentions every given fragment.
void expect_violations(const Json& j, const std::vector<std::string>& fragments) {
  try {
    (void)load_scenario(j);
    FAIL_CHECK("expected a validation_error");
  } catch (const validation_error& e) {
    const std::string msg = e.what();
    for (const auto& f : fragments) {
      INFO("message: ", msg);
      CHECK(msg.find(f) != std::string::npos);
    }
  }
}

}  // namespace

TEST_CASE("minimal flat scenario fills in the defaults") {
  ScenarioConfig c = load_scenario(minimal_flat());
  CHECK(c.cavity.x1 == 0.0);  // a wall at the origin is fine in flat space
  CHECK(c.cavity.x2 == 1.0);
  CHECK(c.cavity.n_modes == 4);
  REQUIRE(c.methods.size() == 1);
  CHECK(c.methods[0] == "integrate");
  REQUIRE(c.trajectory.has_value());
  CHECK(c.trajectory->kind() == TrajectoryKind::static_boundaries);
  CHECK(c.trajectory->duration() == 1.0);
  CHECK(!c.oscillating.has_value());
  CHECK(!c.scan.has_value());
  CHECK(c.output_dir == ".");
  CHECK(c.interior == 0);
  CHECK(c.resolved.contains("cavity"));
}

TEST_CASE("full curved scenario resolves every block") {
  Json j = {
      {"spacetime", {{"horizon_radius", 1e-3}}},
      {"cavity", {{"r0", 1.0}, {"L0", 1e-2}, {"n_modes", 6}}},
      {"trajectory",
       {{"kind", "oscillating-wall"}, {"amplitude", 1e-5}, {"nu", 900.0}, {"p", 2}}},
      {"run",
       {{"methods", Json::array({"dyson", "closed-form", "dyson"})},
        {"steps", 256},
        {"integrator", "rk4"},
        {"recompute_couplings", false},
        {"quadrature_rel_tol", 1e-9},
        {"quadrature_abs_tol", 1e-12},
        {"interior", 3}}},
      {"output", {{"dir", "somewhere"}}},
  };
  ScenarioConfig c = load_scenario(j);

  const Real f0 = c.spacetime.lapse(1.0);
  CHECK(c.cavity.x1 ==
        doctest::Approx(c.spacetime.tortoise(1.0)).epsilon(1e-14));
  CHECK(c.cavity.length() == doctest::Approx(1e-2 / f0).epsilon(1e-13));
  REQUIRE(c.trajectory.has_value());
  CHECK(c.trajectory->frame() == TrajectoryFrame::conformal);
  CHECK(std::abs(c.trajectory->length(0.0) - c.cavity.length()) <
        1e-12 * c.cavity.length());
  REQUIRE(c.oscillating.has_value());
  CHECK(c.oscillating->amplitude == 1e-5);
  CHECK(c.oscillating->p == 2);

  REQUIRE(c.methods.size() == 2);  // duplicate collapsed, order kept
  CHECK(c.methods[0] == "dyson");
  CHECK(c.methods[1] == "closed-form");
  CHECK(c.integration.steps == 256);
  CHECK(c.integration.method == IntegrationMethod::rk4);
  CHECK(!c.integration.recompute_couplings);
  CHECK(c.quadrature.rel_tol == 1e-9);
  CHECK(c.quadrature.abs_tol == 1e-12);
  CHECK(c.interior == 3);
  CHECK(c.output_dir == "somewhere");
}

TEST_CASE("scan block parses with defaults") {
  Json j = minimal_flat();
  j["trajectory"] = {{"kind", "oscillating-wall"},
                     {"amplitude", 1e-3},
                     {"nu", 9.0},
                     {"p", 4}};
  j["cavity"] = {{"r0", 1.0}, {"L0", 1.0}, {"n_modes", 4}};
  j["run"] = {{"methods", Json::array({"closed-form"})},
              {"scan", {{"nu_min", 8.0}, {"nu_max", 10.0}, {"points", 5}}}};
  ScenarioConfig c = load_scenario(j);
  REQUIRE(c.scan.has_value());
  CHECK(c.scan->nu_min == 8.0);
  CHECK(c.scan->nu_max == 10.0);
  CHECK(c.scan->points == 5);
  CHECK(c.scan->m == 1);  // defaults
  CHECK(c.scan->n == 2);
}

TEST_CASE("violations are collected and reported together") {
  Json j = minimal_flat();
  j["cavity"]["n_modes"] = 0;                  // bad truncation
  j["run"] = {{"methods", Json::array({"sorcery"})},  // bad method
              {"steps", -1}};                  // bad step count
  expect_violations(j, {"n_modes", "sorcery", "steps"});
}

TEST_CASE("unknown keys are rejected everywhere") {
  Json top = minimal_flat();
  top["extra_block"] = 1;
  expect_violations(top, {"extra_block"});

  Json inner = minimal_flat();
  inner["cavity"]["colour"] = "blue";
  expect_violations(inner, {"colour"});

  Json traj = minimal_flat();
  traj["trajectory"] = {{"kind", "static"}, {"speed", 3.0}};
  expect_violations(traj, {"speed"});
}

TEST_CASE("cross-block consistency rules") {
  // Curved runs need the radial cavity form.
  Json curved = minimal_flat();
  curved["spacetime"] = {{"horizon_radius", 0.1}};
  expect_violations(curved, {"r0"});

  // Left wall must sit outside the horizon.
  Json inside;
  inside["spacetime"] = {{"horizon_radius", 2.0}};
  inside["cavity"] = {{"r0", 1.5}, {"L0", 1.0}, {"n_modes", 4}};
  expect_violations(inside, {"horizon"});

  // Scattering needs rigid motion.
  Json scat = minimal_flat();
  scat["trajectory"] = {{"kind", "oscillating-wall"},
                        {"amplitude", 0.1},
                        {"nu", 2.0},
                        {"p", 1}};
  scat["cavity"] = {{"x1", 0.0}, {"x2", 1.0}, {"n_modes", 4}};
  scat["run"] = {{"methods", Json::array({"scattering"})}};
  expect_violations(scat, {"scattering"});

  // The closed form needs the oscillating drive.
  Json closed = minimal_flat();
  closed["run"] = {{"methods", Json::array({"closed-form"})}};
  expect_violations(closed, {"closed-form"});

  // So does a scan block.
  Json scan = minimal_flat();
  scan["run"] = {{"scan", {{"nu_min", 1.0}, {"nu_max", 2.0}, {"points", 3}}}};
  expect_violations(scan, {"scan"});

  // Curved space restricts the trajectory kinds.
  Json rigid;
  rigid["spacetime"] = {{"horizon_radius", 0.1}};
  rigid["cavity"] = {{"r0", 1.0}, {"L0", 1.0}, {"n_modes", 4}};
  rigid["trajectory"] = {{"kind", "rigid-translation"},
                         {"displacement", 0.1},
                         {"duration", 1.0}};
  expect_violations(rigid, {"rigid-translation"});
}

TEST_CASE("amplitude and drive limits are enforced") {
  Json j = minimal_flat();
  j["cavity"] = {{"r0", 1.0}, {"L0", 1.0}, {"n_modes", 4}};
  j["trajectory"] = {{"kind", "oscillating-wall"},
                     {"amplitude", 1.5},
                     {"nu", 2.0},
                     {"p", 1}};
  expect_violations(j, {"amplitude"});

  j["trajectory"] = {{"kind", "oscillating-wall"},
                     {"amplitude", 0.1},
                     {"nu", -2.0},
                     {"p", 1}};
  expect_violations(j, {"nu"});
}

TEST_CASE("tabulated trajectories parse in flat space only") {
  std::vector<Real> x1(9, 0.0), x2(9, 1.0);
  for (int i = 0; i < 9; ++i) x2[i] += 0.01 * std::sin(kPi * i / 8.0);

  Json j = minimal_flat();
  j["trajectory"] = {{"kind", "tabulated"},
                     {"duration", 2.0},
                     {"x1", x1},
                     {"x2", x2}};
  ScenarioConfig c = load_scenario(j);
  REQUIRE(c.trajectory.has_value());
  CHECK(c.trajectory->kind() == TrajectoryKind::tabulated);
  CHECK(c.trajectory->duration() == 2.0);

  j["spacetime"] = {{"horizon_radius", 0.1}};
  j["cavity"] = {{"r0", 1.0}, {"L0", 1.0}, {"n_modes", 4}};
  expect_violations(j, {"tabulated"});
}

TEST_CASE("scenario files load with the right error taxonomy") {
  TempDir tmp("files");

  CHECK_THROWS_AS((void)load_scenario_file(tmp.file("missing.json")), io_error);

  write_text_file(tmp.file("broken.json"), "{ not json");
  CHECK_THROWS_AS((void)load_scenario_file(tmp.file("broken.json")),
                  validation_error);

  write_json_file(tmp.file("good.json"), minimal_flat());
  ScenarioConfig c = load_scenario_file(tmp.file("good.json"));
  CHECK(c.cavity.n_modes == 4);
}

TEST_CASE("run writes transforms, spectra, and a coherent manifest") {
  TempDir tmp("run");
  Json j = minimal_flat();
  j["cavity"]["n_modes"] = 4;
  j["trajectory"] = {{"kind", "static"}, {"duration", 0.7}};
  j["run"] = {{"methods", Json::array({"integrate", "dyson", "scattering"})}};
  ScenarioConfig c = load_scenario(j);

  std::ostringstream log;
  CHECK(run_scenario(c, tmp.path.string(), log) == kExitOk);

  for (const std::string name : {"integrate", "dyson", "scattering"}) {
    CHECK(fs::exists(tmp.file("transform_" + name + ".json")));
    CHECK(fs::exists(tmp.file("spectrum_" + name + ".csv")));
  }
  const Json manifest = read_json_file(tmp.file("manifest.json"));
  CHECK(manifest.contains("config"));
  CHECK(manifest.contains("tolerances"));
  CHECK(manifest["tool"]["name"] == "dce");

  // All three paths agree on the motionless cavity to roundoff.
  for (const auto& [key, diff] : manifest["results"]["cross_method"].items()) {
    CHECK(diff["max_abs_beta_diff"].get<double>() < 1e-14);
    CHECK(diff["max_abs_alpha_diff"].get<double>() < 1e-12);
  }

  // The still cavity creates no particles.
  const BogoliubovTransform t =
      transform_from_json(read_json_file(tmp.file("transform_integrate.json")));
  CHECK(t.beta.cwiseAbs().maxCoeff() < 1e-15);
  const std::string csv = read_text_file(tmp.file("spectrum_integrate.csv"));
  CHECK(csv.rfind("mode,mean_particles", 0) == 0);
}

TEST_CASE("scan output is deterministic across worker counts") {
  Json j;
  j["cavity"] = {{"r0", 1.0}, {"L0", 1.0}, {"n_modes", 4}};
  j["trajectory"] = {{"kind", "oscillating-wall"},
                     {"amplitude", 1e-3},
                     {"nu", 9.0},
                     {"p", 4}};
  j["run"] = {{"methods", Json::array({"closed-form"})},
              {"scan", {{"nu_min", 8.0}, {"nu_max", 10.0}, {"points", 7}}}};
  ScenarioConfig c = load_scenario(j);

  TempDir a("scan_a"), b("scan_b");
  std::ostringstream log;
  CHECK(scan_scenario(c, a.path.string(), 1, log) == kExitOk);
  CHECK(scan_scenario(c, b.path.string(), 3, log) == kExitOk);

  const std::string csv_a = read_text_file(a.file("scan.csv"));
  const std::string csv_b = read_text_file(b.file("scan.csv"));
  CHECK(csv_a == csv_b);
  CHECK(csv_a.rfind("nu,m,n,abs_beta", 0) == 0);

  const Json manifest = read_json_file(a.file("manifest.json"));
  CHECK(manifest["outputs"]["scan"] == "scan.csv");
  CHECK(manifest["results"]["peak"].contains("nu"));
}

TEST_CASE("comparison verdicts follow the tolerance") {
  TempDir a("cmp_a"), b("cmp_b");
  Json j = minimal_flat();
  j["trajectory"] = {{"kind", "static"}, {"duration", 0.5}};
  j["run"] = {{"methods", Json::array({"integrate", "dyson"})}};
  ScenarioConfig c = load_scenario(j);

  std::ostringstream log;
  REQUIRE(run_scenario(c, a.path.string(), log) == kExitOk);
  REQUIRE(run_scenario(c, b.path.string(), log) == kExitOk);

  CHECK(compare_outputs(a.file("manifest.json"), b.file("manifest.json"), 1e-12,
                        log) == kExitOk);

  // Corrupt one amplitude in run b and the comparison must fail.
  Json t = read_json_file(b.file("transform_dyson.json"));
  t["alpha"]["re"][0] = t["alpha"]["re"][0].get<double>() + 1e-3;
  write_json_file(b.file("transform_dyson.json"), t);
  CHECK(compare_outputs(a.file("manifest.json"), b.file("manifest.json"), 1e-12,
                        log) == kExitValidation);

  // No common methods: nothing to compare is an input error.
  Json scan_manifest;
  scan_manifest["outputs"]["scan"] = "scan.csv";
  write_json_file(b.file("scan_manifest.json"), scan_manifest);
  CHECK_THROWS_AS((void)compare_outputs(a.file("manifest.json"),
                                        b.file("scan_manifest.json"), 1e-12, log),
                  validation_error);
}
