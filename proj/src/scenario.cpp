#include "dce/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <thread>

#include "dce/errors.hpp"

namespace dce {

namespace {

namespace fs = std::filesystem;

const std::set<std::string> kMethods = {"integrate", "dyson", "scattering",
                                        "closed-form"};

// --- validation helpers: collect every violation, then fail once ----------

struct Violations {
  std::vector<std::string> items;
  void add(const std::string& s) { items.push_back(s); }
  void check_done() const {
    if (items.empty()) return;
    std::string joined = "scenario validation failed:";
    for (const auto& s : items) joined += "\n  - " + s;
    throw validation_error(joined);
  }
};

void check_keys(const Json& j, const std::string& block,
                const std::set<std::string>& allowed, Violations& v) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      v.add("unknown key \"" + it.key() + "\" in " + block);
    }
  }
}

bool get_number(const Json& j, const std::string& block, const std::string& key,
                Violations& v, Real& out) {
  if (!j.contains(key)) return false;
  if (!j.at(key).is_number()) {
    v.add(block + "." + key + " must be a number");
    return false;
  }
  out = j.at(key).get<Real>();
  return true;
}

bool get_int(const Json& j, const std::string& block, const std::string& key,
             Violations& v, int& out) {
  if (!j.contains(key)) return false;
  if (!j.at(key).is_number_integer()) {
    v.add(block + "." + key + " must be an integer");
    return false;
  }
  out = j.at(key).get<int>();
  return true;
}

bool get_bool(const Json& j, const std::string& block, const std::string& key,
              Violations& v, bool& out) {
  if (!j.contains(key)) return false;
  if (!j.at(key).is_boolean()) {
    v.add(block + "." + key + " must be a boolean");
    return false;
  }
  out = j.at(key).get<bool>();
  return true;
}

std::vector<Real> get_real_array(const Json& j, const std::string& block,
                                 const std::string& key, Violations& v) {
  std::vector<Real> out;
  if (!j.contains(key)) {
    v.add(block + "." + key + " is required");
    return out;
  }
  if (!j.at(key).is_array()) {
    v.add(block + "." + key + " must be an array of numbers");
    return out;
  }
  for (const auto& e : j.at(key)) {
    if (!e.is_number()) {
      v.add(block + "." + key + " must contain only numbers");
      return {};
    }
    out.push_back(e.get<Real>());
  }
  return out;
}

}  // namespace

ScenarioConfig load_scenario(const Json& root) {
  Violations v;
  if (!root.is_object()) {
    throw validation_error("scenario must be a JSON object");
  }
  check_keys(root, "scenario",
             {"spacetime", "cavity", "trajectory", "run", "output"}, v);

  ScenarioConfig config;
  Json resolved;

  // ---- spacetime ----
  Real horizon = 0.0;
  if (root.contains("spacetime")) {
    const Json& j = root.at("spacetime");
    if (!j.is_object()) {
      v.add("spacetime must be an object");
    } else {
      check_keys(j, "spacetime", {"horizon_radius"}, v);
      get_number(j, "spacetime", "horizon_radius", v, horizon);
      if (horizon < 0.0) v.add("spacetime.horizon_radius must be >= 0");
    }
  }
  if (horizon >= 0.0) config.spacetime = SchwarzschildSpacetime(std::max(horizon, 0.0));
  resolved["spacetime"]["horizon_radius"] = horizon;
  const bool curved = horizon > 0.0;

  // ---- cavity ----
  Real r0 = 0.0, L0 = 0.0, x1 = 0.0, x2 = 0.0;
  bool has_radial = false, has_plain = false;
  int n_modes = 0;
  if (!root.contains("cavity") || !root.at("cavity").is_object()) {
    v.add("cavity block is required and must be an object");
  } else {
    const Json& j = root.at("cavity");
    check_keys(j, "cavity", {"x1", "x2", "r0", "L0", "n_modes"}, v);
    const bool saw_r0 = get_number(j, "cavity", "r0", v, r0);
    const bool saw_L0 = get_number(j, "cavity", "L0", v, L0);
    const bool saw_x1 = get_number(j, "cavity", "x1", v, x1);
    const bool saw_x2 = get_number(j, "cavity", "x2", v, x2);
    if (!get_int(j, "cavity", "n_modes", v, n_modes)) {
      v.add("cavity.n_modes is required");
    } else if (n_modes < 1) {
      v.add("cavity.n_modes must be >= 1");
    }
    has_radial = saw_r0 && saw_L0;
    has_plain = saw_x1 && saw_x2;
    if ((saw_r0 != saw_L0) || (saw_x1 != saw_x2) ||
        (has_radial == has_plain)) {
      v.add("cavity must provide exactly one of {x1, x2} or {r0, L0}");
    } else if (has_plain && curved) {
      v.add("a curved cavity must be given radially as {r0, L0}");
    } else if (has_plain) {
      if (!(x2 > x1)) v.add("cavity needs x2 > x1");
      r0 = x1;
      L0 = x2 - x1;
      has_radial = true;
    } else if (has_radial) {
      if (!(L0 > 0.0)) v.add("cavity.L0 must be > 0");
      if (!(r0 > 0.0)) v.add("cavity.r0 must be > 0");
      if (curved && r0 <= horizon) {
        v.add("cavity.r0 = " + std::to_string(r0) +
              " must exceed the horizon radius " + std::to_string(horizon));
      }
    }
  }
  resolved["cavity"]["r0"] = r0;
  resolved["cavity"]["L0"] = L0;
  resolved["cavity"]["n_modes"] = n_modes;

  // ---- trajectory ----
  std::string kind = "static";
  Real duration = 1.0;
  Real amplitude = 0.0, nu = 0.0, displacement = 0.0;
  int p = 0;
  std::vector<Real> tab_x1, tab_x2;
  if (root.contains("trajectory")) {
    const Json& j = root.at("trajectory");
    if (!j.is_object()) {
      v.add("trajectory must be an object");
    } else {
      if (j.contains("kind")) {
        if (!j.at("kind").is_string()) {
          v.add("trajectory.kind must be a string");
        } else {
          kind = j.at("kind").get<std::string>();
        }
      }
      if (kind == "static") {
        check_keys(j, "trajectory", {"kind", "duration"}, v);
        get_number(j, "trajectory", "duration", v, duration);
        if (!(duration > 0.0)) v.add("trajectory.duration must be > 0");
      } else if (kind == "oscillating-wall") {
        check_keys(j, "trajectory", {"kind", "amplitude", "nu", "p"}, v);
        if (!get_number(j, "trajectory", "amplitude", v, amplitude)) {
          v.add("trajectory.amplitude is required for oscillating-wall");
        }
        if (!get_number(j, "trajectory", "nu", v, nu)) {
          v.add("trajectory.nu is required for oscillating-wall");
        } else if (!(nu > 0.0)) {
          v.add("trajectory.nu must be > 0");
        }
        if (!get_int(j, "trajectory", "p", v, p)) {
          v.add("trajectory.p (number of drive half-periods) is required");
        } else if (p < 1) {
          v.add("trajectory.p must be >= 1");
        }
        if (L0 > 0.0 && !(std::abs(amplitude) < L0)) {
          v.add("trajectory.amplitude must satisfy |amplitude| < cavity.L0");
        }
        if (curved && L0 > 0.0 && r0 + L0 - std::abs(amplitude) <= horizon) {
          v.add("oscillating wall would cross the horizon: r0 + L0 - |amplitude| "
                "must exceed the horizon radius");
        }
      } else if (kind == "rigid-translation") {
        check_keys(j, "trajectory", {"kind", "displacement", "duration"}, v);
        if (!get_number(j, "trajectory", "displacement", v, displacement)) {
          v.add("trajectory.displacement is required for rigid-translation");
        }
        if (!get_number(j, "trajectory", "duration", v, duration)) {
          v.add("trajectory.duration is required for rigid-translation");
        } else if (!(duration > 0.0)) {
          v.add("trajectory.duration must be > 0");
        }
        if (curved && displacement < 0.0 && r0 + displacement <= horizon) {
          v.add("rigid translation would cross the horizon");
        }
      } else if (kind == "tabulated") {
        check_keys(j, "trajectory", {"kind", "duration", "x1", "x2"}, v);
        if (!get_number(j, "trajectory", "duration", v, duration)) {
          v.add("trajectory.duration is required for tabulated");
        } else if (!(duration > 0.0)) {
          v.add("trajectory.duration must be > 0");
        }
        tab_x1 = get_real_array(j, "trajectory", "x1", v);
        tab_x2 = get_real_array(j, "trajectory", "x2", v);
        if (tab_x1.size() != tab_x2.size()) {
          v.add("trajectory.x1 and trajectory.x2 must have the same length");
        } else if (tab_x1.size() < 8 && !tab_x1.empty()) {
          v.add("tabulated trajectories need at least 8 samples");
        }
      } else {
        v.add("unknown trajectory.kind \"" + kind +
              "\" (expected static, oscillating-wall, rigid-translation, or "
              "tabulated)");
      }
    }
  }
  resolved["trajectory"]["kind"] = kind;

  // ---- run ----
  config.methods = {"integrate"};
  bool saw_scan = false;
  ScanSpec scan;
  if (root.contains("run")) {
    const Json& j = root.at("run");
    if (!j.is_object()) {
      v.add("run must be an object");
    } else {
      check_keys(j, "run",
                 {"methods", "steps", "integrator", "recompute_couplings",
                  "quadrature_rel_tol", "quadrature_abs_tol", "interior", "scan"},
                 v);
      if (j.contains("methods")) {
        if (!j.at("methods").is_array()) {
          v.add("run.methods must be an array of strings");
        } else {
          config.methods.clear();
          for (const auto& e : j.at("methods")) {
            if (!e.is_string()) {
              v.add("run.methods must contain only strings");
              continue;
            }
            const std::string name = e.get<std::string>();
            if (!kMethods.count(name)) {
              v.add("unknown method \"" + name +
                    "\" (expected integrate, dyson, scattering, or closed-form)");
              continue;
            }
            if (std::find(config.methods.begin(), config.methods.end(), name) ==
                config.methods.end()) {
              config.methods.push_back(name);
            }
          }
          if (config.methods.empty()) v.add("run.methods must not be empty");
        }
      }
      int steps = config.integration.steps;
      if (get_int(j, "run", "steps", v, steps)) {
        if (steps < 0) {
          v.add("run.steps must be >= 0 (0 = automatic refinement)");
        } else {
          config.integration.steps = steps;
        }
      }
      if (j.contains("integrator")) {
        if (!j.at("integrator").is_string()) {
          v.add("run.integrator must be a string");
        } else {
          const std::string name = j.at("integrator").get<std::string>();
          if (name == "exponential") {
            config.integration.method = IntegrationMethod::exponential_midpoint;
          } else if (name == "rk4") {
            config.integration.method = IntegrationMethod::rk4;
          } else {
            v.add("unknown run.integrator \"" + name +
                  "\" (expected exponential or rk4)");
          }
        }
      }
      get_bool(j, "run", "recompute_couplings", v,
               config.integration.recompute_couplings);
      Real tol = 0.0;
      if (get_number(j, "run", "quadrature_rel_tol", v, tol)) {
        if (!(tol > 0.0)) {
          v.add("run.quadrature_rel_tol must be > 0");
        } else {
          config.quadrature.rel_tol = tol;
        }
      }
      if (get_number(j, "run", "quadrature_abs_tol", v, tol)) {
        if (!(tol > 0.0)) {
          v.add("run.quadrature_abs_tol must be > 0");
        } else {
          config.quadrature.abs_tol = tol;
        }
      }
      int interior = 0;
      if (get_int(j, "run", "interior", v, interior)) {
        if (interior < 0) {
          v.add("run.interior must be >= 0");
        } else {
          config.interior = interior;
        }
      }
      if (j.contains("scan")) {
        const Json& sj = j.at("scan");
        if (!sj.is_object()) {
          v.add("run.scan must be an object");
        } else {
          check_keys(sj, "run.scan", {"nu_min", "nu_max", "points", "m", "n"}, v);
          saw_scan = true;
          bool ok = true;
          ok &= get_number(sj, "run.scan", "nu_min", v, scan.nu_min);
          ok &= get_number(sj, "run.scan", "nu_max", v, scan.nu_max);
          ok &= get_int(sj, "run.scan", "points", v, scan.points);
          if (!ok) v.add("run.scan needs nu_min, nu_max, and points");
          get_int(sj, "run.scan", "m", v, scan.m);
          get_int(sj, "run.scan", "n", v, scan.n);
          if (scan.points < 1) v.add("run.scan.points must be >= 1");
          if (!(scan.nu_min > 0.0) || !(scan.nu_max >= scan.nu_min)) {
            v.add("run.scan needs 0 < nu_min <= nu_max");
          }
          if (scan.m < 1 || scan.n < 1) v.add("run.scan mode indices must be >= 1");
        }
      }
    }
  }

  // ---- output ----
  if (root.contains("output")) {
    const Json& j = root.at("output");
    if (!j.is_object()) {
      v.add("output must be an object");
    } else {
      check_keys(j, "output", {"dir"}, v);
      if (j.contains("dir")) {
        if (!j.at("dir").is_string()) {
          v.add("output.dir must be a string");
        } else {
          config.output_dir = j.at("dir").get<std::string>();
        }
      }
    }
  }

  // ---- cross-block rules ----
  const bool rigid_kind = (kind == "static" || kind == "rigid-translation" ||
                           kind == "tabulated");
  for (const auto& m : config.methods) {
    if (m == "scattering" && !rigid_kind) {
      v.add("method \"scattering\" requires rigid motion (static, "
            "rigid-translation, or length-preserving tabulated); trajectory "
            "kind \"" + kind + "\" changes the cavity length");
    }
    if (m == "closed-form" && kind != "oscillating-wall") {
      v.add("method \"closed-form\" requires trajectory.kind oscillating-wall");
    }
  }
  if (saw_scan && kind != "oscillating-wall") {
    v.add("run.scan requires trajectory.kind oscillating-wall");
  }
  if (curved && (kind == "rigid-translation" || kind == "tabulated")) {
    v.add("rigid-translation and tabulated programs are defined in the "
          "conformal frame; curved runs support static and oscillating-wall");
  }

  v.check_done();

  // ---- construct the resolved objects (validated above) ----
  // (The flat chart has no redshift, and flat cavities may start at x1 <= 0
  // where lapse() has no meaning.)
  const Real f0 = curved ? config.spacetime.lapse(r0) : 1.0;
  config.cavity.x1 = curved ? config.spacetime.tortoise(r0) : r0;
  config.cavity.x2 = config.cavity.x1 + L0 / f0;
  config.cavity.n_modes = n_modes;
  config.cavity.validate();

  if (kind == "static") {
    config.trajectory = Trajectory::static_boundaries(
        config.cavity.x1, config.cavity.x2, duration);
    resolved["trajectory"]["duration"] = duration;
  } else if (kind == "oscillating-wall") {
    OscillatingScenario scn;
    scn.r0 = r0;
    scn.L0 = L0;
    scn.amplitude = amplitude;
    scn.nu = nu;
    scn.p = p;
    scn.validate();
    config.oscillating = scn;
    config.trajectory = scenario_trajectory(scn, config.spacetime);
    resolved["trajectory"]["amplitude"] = amplitude;
    resolved["trajectory"]["nu"] = nu;
    resolved["trajectory"]["p"] = p;
    resolved["trajectory"]["duration"] = scn.duration();
  } else if (kind == "rigid-translation") {
    config.trajectory = Trajectory::rigid_translation(
        config.cavity.x1, config.cavity.length(), displacement, duration);
    resolved["trajectory"]["displacement"] = displacement;
    resolved["trajectory"]["duration"] = duration;
  } else {  // tabulated
    config.trajectory =
        Trajectory::tabulated(std::move(tab_x1), std::move(tab_x2), duration);
    resolved["trajectory"]["duration"] = duration;
    resolved["trajectory"]["samples"] =
        static_cast<int>(root.at("trajectory").at("x1").size());
  }

  if (saw_scan) config.scan = scan;

  resolved["run"]["methods"] = config.methods;
  resolved["run"]["steps"] = config.integration.steps;
  resolved["run"]["integrator"] =
      config.integration.method == IntegrationMethod::exponential_midpoint
          ? "exponential"
          : "rk4";
  resolved["run"]["recompute_couplings"] = config.integration.recompute_couplings;
  resolved["run"]["quadrature_rel_tol"] = config.quadrature.rel_tol;
  resolved["run"]["quadrature_abs_tol"] = config.quadrature.abs_tol;
  resolved["run"]["interior"] = config.interior;
  if (saw_scan) {
    resolved["run"]["scan"] = {{"nu_min", scan.nu_min}, {"nu_max", scan.nu_max},
                               {"points", scan.points}, {"m", scan.m},
                               {"n", scan.n}};
  }
  resolved["output"]["dir"] = config.output_dir;
  config.resolved = std::move(resolved);
  return config;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  return load_scenario(read_json_file(path));
}

namespace {

int effective_interior(const ScenarioConfig& config) {
  if (config.interior > 0) return std::min(config.interior, config.cavity.n_modes);
  return std::max(1, config.cavity.n_modes / 2);
}

Json tolerances_json(const ScenarioConfig& config) {
  Json j;
  j["quadrature_rel_tol"] = config.quadrature.rel_tol;
  j["quadrature_abs_tol"] = config.quadrature.abs_tol;
  j["integration_tolerance"] = config.integration.tolerance;
  return j;
}

Json tool_json() {
  Json j;
  j["name"] = "dce";
  j["version"] = "0.1.0";
  return j;
}

BogoliubovTransform closed_form_transform(const ScenarioConfig& config) {
  const OscillatingScenario& scn = *config.oscillating;
  const int n = config.cavity.n_modes;
  BogoliubovTransform t;
  t.alpha = ComplexMatrix::Zero(n, n);
  t.beta = ComplexMatrix::Zero(n, n);
  const Real T = scn.duration();
  for (int m = 1; m <= n; ++m) {
    const Real wm = scenario_mode_frequency(scn, config.spacetime, m);
    t.alpha(m - 1, m - 1) = std::exp(Complex{0.0, wm * T});
    for (int k = 1; k <= n; ++k) {
      t.beta(m - 1, k - 1) = oscillating_beta_closed_form(
          scn, config.spacetime, m, k, /*resonant_branch=*/true);
    }
  }
  return t;
}

}  // namespace

int run_scenario(const ScenarioConfig& config, const std::string& out_dir_override,
                 std::ostream& log) {
  const std::string dir =
      out_dir_override.empty() ? config.output_dir : out_dir_override;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory " + dir + ": " + ec.message());

  const Trajectory& traj = *config.trajectory;
  const int interior = effective_interior(config);

  struct MethodOutput {
    std::string name;
    BogoliubovTransform transform;
    Json extra;
  };
  std::vector<MethodOutput> outputs;

  Json results;
  results["warnings"] = Json::array();
  for (const auto& method : config.methods) {
    MethodOutput mo;
    mo.name = method;
    if (method == "integrate") {
      IntegrationResult r =
          integrate_transform(traj, config.cavity, config.integration);
      auto [r1, r2] = identity_residuals(r.transform, interior);
      mo.transform = std::move(r.transform);
      mo.extra["steps_used"] = r.steps_used;
      mo.extra["r1"] = r1;
      mo.extra["r2"] = r2;
      log << "method=integrate steps=" << r.steps_used
          << " r1=" << format_double(r1) << " r2=" << format_double(r2) << "\n";
    } else if (method == "dyson") {
      PerturbativeResult r = dyson_transform(traj, config.cavity, config.quadrature);
      auto [r1, r2] = identity_residuals(r.transform, interior);
      mo.transform = std::move(r.transform);
      mo.extra["r1"] = r1;
      mo.extra["r2"] = r2;
      mo.extra["epsilon"] = r.epsilon;
      mo.extra["max_speed"] = r.max_speed;
      mo.extra["quadrature_error"] = r.quadrature_error;
      for (const auto& wmsg : r.warnings) {
        results["warnings"].push_back("dyson: " + wmsg);
        log << "warning: " << wmsg << "\n";
      }
      log << "method=dyson r1=" << format_double(r1)
          << " r2=" << format_double(r2)
          << " quadrature_error=" << format_double(r.quadrature_error) << "\n";
    } else if (method == "scattering") {
      mo.transform = scattering_transform(traj, config.cavity, config.quadrature);
      auto [r1, r2] = identity_residuals(mo.transform, interior);
      mo.extra["r1"] = r1;
      mo.extra["r2"] = r2;
      log << "method=scattering r1=" << format_double(r1)
          << " r2=" << format_double(r2) << "\n";
    } else if (method == "closed-form") {
      if (!config.oscillating) {
        throw validation_error("closed-form method needs an oscillating-wall scenario");
      }
      mo.transform = closed_form_transform(config);
      mo.extra["note"] =
          "alpha holds free phases only; beta carries the first-order result";
      log << "method=closed-form max|beta|="
          << format_double(mo.transform.beta.cwiseAbs().maxCoeff()) << "\n";
    }
    outputs.push_back(std::move(mo));
  }

  Json manifest;
  manifest["config"] = config.resolved;
  manifest["tool"] = tool_json();
  manifest["tolerances"] = tolerances_json(config);
  manifest["interior"] = interior;
  Json method_files;
  for (const auto& mo : outputs) {
    const std::string tpath = "transform_" + mo.name + ".json";
    const std::string spath = "spectrum_" + mo.name + ".csv";
    write_json_file((fs::path(dir) / tpath).string(), transform_to_json(mo.transform));
    write_text_file((fs::path(dir) / spath).string(), spectrum_csv(mo.transform));
    Json entry;
    entry["transform"] = tpath;
    entry["spectrum"] = spath;
    for (auto it = mo.extra.begin(); it != mo.extra.end(); ++it) {
      entry[it.key()] = it.value();
    }
    method_files[mo.name] = std::move(entry);
  }
  manifest["outputs"] = std::move(method_files);

  // Cross-method agreement, every unordered pair.
  Json cross;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    for (std::size_t k = i + 1; k < outputs.size(); ++k) {
      const auto& a = outputs[i];
      const auto& b = outputs[k];
      const Real dbeta = (a.transform.beta - b.transform.beta).cwiseAbs().maxCoeff();
      const Real dalpha =
          (a.transform.alpha - b.transform.alpha).cwiseAbs().maxCoeff();
      const std::string key = a.name + "_vs_" + b.name;
      cross[key]["max_abs_beta_diff"] = dbeta;
      cross[key]["max_abs_alpha_diff"] = dalpha;
      log << "cross " << key << " max|dbeta|=" << format_double(dbeta)
          << " max|dalpha|=" << format_double(dalpha) << "\n";
    }
  }
  manifest["results"] = results;
  manifest["results"]["cross_method"] = std::move(cross);

  write_json_file((fs::path(dir) / "manifest.json").string(), manifest);
  log << "wrote " << (fs::path(dir) / "manifest.json").string() << "\n";
  return kExitOk;
}

int scan_scenario(const ScenarioConfig& config, const std::string& out_dir_override,
                  int workers, std::ostream& log) {
  if (!config.oscillating || !config.scan) {
    throw validation_error(
        "scan needs an oscillating-wall trajectory and a run.scan block");
  }
  const std::string dir =
      out_dir_override.empty() ? config.output_dir : out_dir_override;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory " + dir + ": " + ec.message());

  const ScanSpec& spec = *config.scan;
  std::vector<Real> grid(spec.points);
  for (int i = 0; i < spec.points; ++i) {
    grid[i] = spec.points == 1
                  ? spec.nu_min
                  : spec.nu_min + (spec.nu_max - spec.nu_min) * i / (spec.points - 1);
  }

  // Rows are computed independently and stored by index, so the worker count
  // never changes the output.
  const OscillatingScenario base = *config.oscillating;
  const SchwarzschildSpacetime st = config.spacetime;
  std::vector<ScanRow> rows(grid.size());
  int n_workers = workers > 0 ? workers : static_cast<int>(
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8u));
  n_workers = std::min<int>(n_workers, static_cast<int>(grid.size()));
  auto work = [&](int start) {
    for (std::size_t i = start; i < grid.size(); i += n_workers) {
      std::vector<ScanRow> one =
          resonance_scan(base, st, {grid[i]}, spec.m, spec.n);
      rows[i] = one.front();
    }
  };
  if (n_workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }

  std::string csv = "nu,m,n,abs_beta,re_beta,im_beta,branch\n";
  std::size_t peak = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ScanRow& r = rows[i];
    csv += format_double(r.nu);
    csv += ',';
    csv += std::to_string(r.m);
    csv += ',';
    csv += std::to_string(r.n);
    csv += ',';
    csv += format_double(std::abs(r.beta));
    csv += ',';
    csv += format_double(r.beta.real());
    csv += ',';
    csv += format_double(r.beta.imag());
    csv += ',';
    csv += r.branch;
    csv += '\n';
    if (std::abs(r.beta) > std::abs(rows[peak].beta)) peak = i;
  }
  write_text_file((fs::path(dir) / "scan.csv").string(), csv);

  Json manifest;
  manifest["config"] = config.resolved;
  manifest["tool"] = tool_json();
  manifest["tolerances"] = tolerances_json(config);
  manifest["outputs"]["scan"] = "scan.csv";
  manifest["results"]["peak"]["nu"] = rows[peak].nu;
  manifest["results"]["peak"]["abs_beta"] = std::abs(rows[peak].beta);
  manifest["results"]["peak"]["branch"] = rows[peak].branch;
  write_json_file((fs::path(dir) / "manifest.json").string(), manifest);

  log << "scan points=" << rows.size() << " peak |beta|="
      << format_double(std::abs(rows[peak].beta)) << " at nu="
      << format_double(rows[peak].nu) << " (" << rows[peak].branch << ")\n";
  log << "wrote " << (fs::path(dir) / "scan.csv").string() << "\n";
  return kExitOk;
}

int compare_outputs(const std::string& manifest_a, const std::string& manifest_b,
                    Real tolerance, std::ostream& log) {
  const Json ma = read_json_file(manifest_a);
  const Json mb = read_json_file(manifest_b);
  if (!ma.contains("outputs") || !mb.contains("outputs")) {
    throw validation_error("both manifests need an outputs section");
  }
  const fs::path dir_a = fs::path(manifest_a).parent_path();
  const fs::path dir_b = fs::path(manifest_b).parent_path();

  bool any_common = false;
  Real worst = 0.0;
  for (auto it = ma.at("outputs").begin(); it != ma.at("outputs").end(); ++it) {
    const std::string& method = it.key();
    if (!mb.at("outputs").contains(method)) continue;
    if (!it.value().is_object() || !it.value().contains("transform")) continue;
    any_common = true;
    const std::string fa =
        (dir_a / it.value().at("transform").get<std::string>()).string();
    const std::string fb =
        (dir_b / mb.at("outputs").at(method).at("transform").get<std::string>())
            .string();
    const BogoliubovTransform ta = transform_from_json(read_json_file(fa));
    const BogoliubovTransform tb = transform_from_json(read_json_file(fb));
    if (ta.size() != tb.size()) {
      throw validation_error("method " + method +
                             ": transforms have different sizes (" +
                             std::to_string(ta.size()) + " vs " +
                             std::to_string(tb.size()) + ")");
    }
    const Real dalpha = (ta.alpha - tb.alpha).cwiseAbs().maxCoeff();
    const Real dbeta = (ta.beta - tb.beta).cwiseAbs().maxCoeff();
    const RealVector na = vacuum_particle_numbers(ta);
    const RealVector nb = vacuum_particle_numbers(tb);
    const Real dnum = (na - nb).cwiseAbs().maxCoeff();
    worst = std::max({worst, dalpha, dbeta});
    log << "method=" << method << " max|dalpha|=" << format_double(dalpha)
        << " max|dbeta|=" << format_double(dbeta)
        << " max|dnumber|=" << format_double(dnum) << "\n";
  }
  if (!any_common) {
    throw validation_error("the two manifests share no comparable methods");
  }
  if (worst <= tolerance) {
    log << "within tolerance " << format_double(tolerance) << "\n";
    return kExitOk;
  }
  log << "difference " << format_double(worst) << " exceeds tolerance "
      << format_double(tolerance) << "\n";
  return kExitValidation;
}

int validate_scenario(const std::string& path, std::ostream& log) {
  const ScenarioConfig config = load_scenario_file(path);
  const Trajectory& traj = *config.trajectory;
  const TrajectoryReport report = traj.validate();
  log << "scenario OK: " << path << "\n";
  log << "  methods:";
  for (const auto& m : config.methods) log << ' ' << m;
  log << "\n";
  log << "  duration=" << format_double(traj.duration())
      << " max_speed=" << format_double(report.max_speed)
      << " min_length=" << format_double(report.min_length) << "\n";
  if (!report.ok()) {
    std::string joined = "trajectory violates physical constraints:";
    for (const auto& s : report.violations) joined += "\n  - " + s;
    throw validation_error(joined);
  }
  if (config.oscillating) {
    const Real eps = config.oscillating->epsilon();
    if (eps > 0.1) {
      log << "  warning: drive amplitude is " << format_double(eps)
          << " of the cavity length; first-order methods degrade beyond ~0.1\n";
    }
  }
  return kExitOk;
}

}  // namespace dce
