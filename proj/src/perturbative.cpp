#include "dce/perturbative.hpp"

#include <cmath>
#include <map>
#include <string>

#include "dce/errors.hpp"

namespace dce {

namespace {

// eta(z) = (e^z - 1)/z, analytic everywhere; series near 0 keeps the
// removable point (and its neighbourhood) at full precision.
Complex eta(Complex z) {
  if (std::abs(z) < 1e-4) {
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
  }
  return (std::exp(z) - 1.0) / z;
}

// E(sigma) = Integral_0^T e^{-i sigma t} dt = T * eta(-i sigma T).
Complex phase_window(Real sigma, Real T) {
  return T * eta(Complex{0.0, -sigma * T});
}

bool boundary_moves(const Trajectory& traj, int boundary) {
  for (int i = 0; i <= 128; ++i) {
    const Real t = traj.duration() * i / 128.0;
    if (traj.velocity(boundary, t) != 0.0) return true;
  }
  return false;
}

}  // namespace

PerturbativeResult dyson_transform(const Trajectory& trajectory,
                                   const CavityConfig& config,
                                   const QuadratureSettings& quadrature) {
  config.validate();
  if (trajectory.frame() != TrajectoryFrame::conformal) {
    throw validation_error(
        "first-order transform needs a conformal-frame trajectory; convert the "
        "radial program first");
  }
  const Real L0 = config.length();
  const Real tol0 = 1e-9 * L0;
  if (std::abs(trajectory.position(1, 0.0) - config.x1) > tol0 ||
      std::abs(trajectory.position(2, 0.0) - config.x2) > tol0) {
    throw validation_error(
        "trajectory must start on the cavity boundaries the mode basis is "
        "built from");
  }

  const int n = config.n_modes;
  const Real T = trajectory.duration();
  const RealVector w = mode_frequencies(config);
  const CouplingMatrices coupling = coupling_matrices(config);
  const Real hint_base = trajectory.characteristic_frequency();

  // The equally spaced frequency ladder makes every oscillatory integral a
  // function of an integer difference/sum of mode indices; cache by that
  // integer.  (The ladder is exact for this basis; the guard below protects
  // against future basis changes.)
  const Real w1 = w(0);
  bool ladder = true;
  for (int m = 2; m <= n; ++m) {
    if (std::abs(w(m - 1) - m * w1) > 1e-12 * w(m - 1)) {
      ladder = false;
      break;
    }
  }

  PerturbativeResult out;
  out.transform.alpha = ComplexMatrix::Zero(n, n);
  out.transform.beta = ComplexMatrix::Zero(n, n);

  struct BoundaryIntegrals {
    bool active = false;
    std::map<long, QuadratureResult> by_multiple;  // ladder case
    std::map<std::pair<int, int>, QuadratureResult> minus_by_pair, plus_by_pair;
  };
  BoundaryIntegrals integrals[2];

  for (int j = 0; j < 2; ++j) {
    const int boundary = j + 1;
    if (!boundary_moves(trajectory, boundary)) continue;
    integrals[j].active = true;
    auto velocity_integral = [&](Real sigma) {
      auto f = [&trajectory, boundary, sigma](Real t) {
        return std::exp(Complex{0.0, -sigma * t}) *
               trajectory.velocity(boundary, t);
      };
      return integrate_gk(f, 0.0, T, quadrature,
                          std::abs(sigma) + hint_base);
    };
    if (ladder) {
      for (long k = -(n - 1); k <= 2 * n; ++k) {
        integrals[j].by_multiple[k] = velocity_integral(k * w1);
      }
    } else {
      for (int m = 1; m <= n; ++m) {
        for (int nn = 1; nn <= n; ++nn) {
          integrals[j].minus_by_pair[{m, nn}] =
              velocity_integral(w(m - 1) - w(nn - 1));
          integrals[j].plus_by_pair[{m, nn}] =
              velocity_integral(w(m - 1) + w(nn - 1));
        }
      }
    }
  }

  // Accumulated detuning from the instantaneous length.
  QuadratureResult length_shift;
  if (integrals[0].active || integrals[1].active) {
    auto f = [&trajectory, L0](Real t) {
      return Complex{trajectory.length(t) - L0, 0.0};
    };
    length_shift = integrate_gk(f, 0.0, T, quadrature, hint_base);
  }

  Real worst_error = 0.0;
  for (int m = 1; m <= n; ++m) {
    const Complex row_phase = std::exp(Complex{0.0, w(m - 1) * T});
    const Real phi_m = -(w(m - 1) / L0) * length_shift.value.real();
    const Real phi_err = (w(m - 1) / L0) * length_shift.error_estimate;
    for (int nn = 1; nn <= n; ++nn) {
      Complex alpha_acc{0.0, 0.0};
      Complex beta_acc{0.0, 0.0};
      Real err_alpha = 0.0, err_beta = 0.0;
      for (int j = 0; j < 2; ++j) {
        if (!integrals[j].active) continue;
        const RealMatrix& a = (j == 0) ? coupling.a1 : coupling.a2;
        const RealMatrix& b = (j == 0) ? coupling.b1 : coupling.b2;
        QuadratureResult iminus, iplus;
        if (ladder) {
          iminus = integrals[j].by_multiple.at(m - nn);
          iplus = integrals[j].by_multiple.at(m + nn);
        } else {
          iminus = integrals[j].minus_by_pair.at({m, nn});
          iplus = integrals[j].plus_by_pair.at({m, nn});
        }
        alpha_acc += a(m - 1, nn - 1) * iminus.value;
        beta_acc += b(m - 1, nn - 1) * iplus.value;
        err_alpha += std::abs(a(m - 1, nn - 1)) * iminus.error_estimate;
        err_beta += std::abs(b(m - 1, nn - 1)) * iplus.error_estimate;
      }
      if (m == nn) {
        alpha_acc += Complex{1.0, phi_m};
        err_alpha += phi_err;
      }
      out.transform.alpha(m - 1, nn - 1) = row_phase * alpha_acc;
      out.transform.beta(m - 1, nn - 1) = row_phase * beta_acc;
      worst_error = std::max({worst_error, err_alpha, err_beta});
    }
  }
  out.quadrature_error = worst_error;

  // Diagnostics: boundary speeds and the displacement scale.
  const TrajectoryReport report = trajectory.validate(1001);
  out.max_speed = report.max_speed;
  Real max_disp = 0.0;
  const Real x10 = trajectory.position(1, 0.0);
  const Real x20 = trajectory.position(2, 0.0);
  for (int i = 0; i <= 500; ++i) {
    const Real t = T * i / 500.0;
    max_disp = std::max(max_disp, std::abs(trajectory.position(1, t) - x10));
    max_disp = std::max(max_disp, std::abs(trajectory.position(2, t) - x20));
  }
  out.epsilon = max_disp / L0;
  if (out.epsilon > 0.1) {
    out.warnings.push_back(
        "boundary displacement is " + std::to_string(out.epsilon) +
        " of the cavity length; first-order results degrade beyond ~0.1");
  }
  if (out.max_speed > 0.1) {
    out.warnings.push_back("boundary speed reaches " +
                           std::to_string(out.max_speed) +
                           "; first-order results degrade beyond ~0.1");
  }
  if (!report.ok()) {
    for (const auto& v : report.violations) out.warnings.push_back(v);
  }
  return out;
}

void OscillatingScenario::validate() const {
  if (!(r0 > 0.0) || !std::isfinite(r0)) {
    throw validation_error("scenario needs r0 > 0");
  }
  if (!(L0 > 0.0) || !std::isfinite(L0)) {
    throw validation_error("scenario needs L0 > 0");
  }
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw validation_error("scenario needs nu > 0");
  }
  if (!(std::abs(amplitude) < L0)) {
    throw validation_error("scenario needs |amplitude| < L0");
  }
  if (p < 1) {
    throw validation_error("scenario needs at least one drive half-period (p >= 1)");
  }
}

Real scenario_mode_frequency(const OscillatingScenario& scenario,
                             const SchwarzschildSpacetime& spacetime, int m) {
  scenario.validate();
  if (m < 1) throw validation_error("mode index must be >= 1");
  const Real f0 = spacetime.lapse(scenario.r0);
  return f0 * m * kPi / scenario.L0;
}

Complex oscillating_beta_closed_form(const OscillatingScenario& scenario,
                                     const SchwarzschildSpacetime& spacetime,
                                     int m, int n, bool resonant_branch,
                                     Real drive_duration) {
  scenario.validate();
  if (m < 1 || n < 1) throw validation_error("mode indices must be >= 1");
  const Real f0 = spacetime.lapse(scenario.r0);
  const Real fL = spacetime.lapse(scenario.r0 + scenario.L0);
  const Real wm = f0 * m * kPi / scenario.L0;
  const Real wn = f0 * n * kPi / scenario.L0;
  const Real w = wm + wn;
  const Real nu = scenario.nu;
  const Real T = drive_duration >= 0.0 ? drive_duration : scenario.duration();
  const Real rs = spacetime.horizon_radius();
  const Real R = scenario.r0 + scenario.L0;

  if (!resonant_branch) {
    if (std::abs(nu - w) < kResonanceWindow * nu ||
        std::abs(nu - 0.5 * w) < kResonanceWindow * nu) {
      throw validation_error(
          "drive sits on a removable resonance of the closed form; pass "
          "resonant_branch = true to evaluate the limit");
    }
  }

  // Assembled from the elementary windows E(sigma); each resonance is a
  // removable point of E handled inside phase_window, so one expression is
  // uniformly accurate on and off resonance.
  const Complex ewT = std::exp(Complex{0.0, w * T});
  const Complex j_int =
      0.5 * (phase_window(w - nu, T) + phase_window(w + nu, T));
  const Complex term1 = ewT * j_int / w;

  Complex term2{0.0, 0.0};
  if (rs > 0.0) {
    const Complex k_int = (phase_window(w - 2.0 * nu, T) -
                           phase_window(w + 2.0 * nu, T)) /
                          Complex{0.0, 2.0};
    term2 = -(scenario.amplitude * rs / (2.0 * R * R)) * ewT * k_int / w;
  }

  const Complex tail_phase = std::exp(Complex{0.0, -wn * T});
  return tail_phase * scenario.epsilon() * nu * std::sqrt(wm * wn) * (f0 / fL) *
         (term1 + term2);
}

Real resonant_pair_number(const OscillatingScenario& scenario,
                          const SchwarzschildSpacetime& spacetime, int q, int r,
                          int m, int n) {
  scenario.validate();
  if (q < 1 || r < 1 || m < 1 || n < 1) {
    throw validation_error("mode indices must be >= 1");
  }
  if (m + n != q + r) return 0.0;
  const Real rs = spacetime.horizon_radius();
  const Real w1 = scenario_mode_frequency(scenario, spacetime, 1);
  const Real x = scenario.epsilon() * w1 * scenario.duration();
  const Real redshift = 1.0 - 2.0 * scenario.L0 * rs / (scenario.r0 * scenario.r0);
  return 0.25 * redshift * m * n * x * x;
}

Complex subharmonic_beta(const OscillatingScenario& scenario,
                         const SchwarzschildSpacetime& spacetime, int q, int r) {
  scenario.validate();
  if (q < 1 || r < 1) throw validation_error("mode indices must be >= 1");
  const Real f0 = spacetime.lapse(scenario.r0);
  const Real fL = spacetime.lapse(scenario.r0 + scenario.L0);
  const Real wq = f0 * q * kPi / scenario.L0;
  const Real wr = f0 * r * kPi / scenario.L0;
  const Real half = 0.5 * (wq + wr);
  if (std::abs(scenario.nu - half) > 1e-6 * half) {
    throw validation_error(
        "half-frequency formula needs nu = (w_q + w_r)/2 for the chosen modes");
  }
  const Real rs = spacetime.horizon_radius();
  const Real R = scenario.r0 + scenario.L0;
  const Real T = scenario.duration();
  const Real eps = scenario.epsilon();
  const Real parity = (scenario.p % 2 == 0) ? 0.0 : 2.0;  // 1 - (-1)^p
  const Real bracket = -(2.0 / 3.0) * parity / (f0 * (q + r)) +
                       eps * (kPi / 8.0) * rs * T / (R * R);
  const Complex phase = std::exp(Complex{0.0, -wq * T});
  return phase * Complex{0.0, 1.0} * eps * std::sqrt(Real(q) * Real(r)) *
         (f0 * f0 / fL) * bracket;
}

std::vector<ScanRow> resonance_scan(const OscillatingScenario& scenario,
                                    const SchwarzschildSpacetime& spacetime,
                                    const std::vector<Real>& nu_grid, int m, int n) {
  scenario.validate();
  if (m < 1 || n < 1) throw validation_error("mode indices must be >= 1");
  if (nu_grid.empty()) throw validation_error("scan grid must not be empty");
  const Real w = scenario_mode_frequency(scenario, spacetime, m) +
                 scenario_mode_frequency(scenario, spacetime, n);
  const Real T = scenario.duration();
  std::vector<ScanRow> rows;
  rows.reserve(nu_grid.size());
  for (Real nu : nu_grid) {
    if (!(nu > 0.0)) throw validation_error("scan frequencies must be positive");
    OscillatingScenario point = scenario;
    point.nu = nu;
    ScanRow row;
    row.nu = nu;
    row.m = m;
    row.n = n;
    row.beta = oscillating_beta_closed_form(point, spacetime, m, n,
                                            /*resonant_branch=*/true, T);
    if (std::abs(nu - w) < 1e-6 * w) {
      row.branch = "pair-resonance";
    } else if (std::abs(nu - 0.5 * w) < 1e-6 * w) {
      row.branch = "half-frequency";
    } else {
      row.branch = "off-resonance";
    }
    rows.push_back(row);
  }
  return rows;
}

Trajectory scenario_trajectory(const OscillatingScenario& scenario,
                               const SchwarzschildSpacetime& spacetime) {
  scenario.validate();
  const Real T = scenario.duration();
  if (spacetime.is_flat()) {
    return Trajectory::oscillating_wall(scenario.r0, scenario.L0,
                                        scenario.amplitude, scenario.nu, T,
                                        TrajectoryFrame::conformal);
  }
  const Real f0 = spacetime.lapse(scenario.r0);
  Trajectory radial = Trajectory::oscillating_wall(
      scenario.r0, scenario.L0, scenario.amplitude, scenario.nu, T,
      TrajectoryFrame::radial);
  return radial_to_conformal_rebased(spacetime, radial, scenario.L0 / f0);
}

CavityConfig scenario_cavity(const OscillatingScenario& scenario,
                             const SchwarzschildSpacetime& spacetime, int n_modes) {
  scenario.validate();
  CavityConfig config;
  config.x1 = spacetime.is_flat() ? scenario.r0 : spacetime.tortoise(scenario.r0);
  const Real f0 = spacetime.lapse(scenario.r0);
  config.x2 = config.x1 + scenario.L0 / f0;
  config.n_modes = n_modes;
  config.validate();
  return config;
}

}  // namespace dce
