#include "dce/scattering.hpp"

#include <cmath>
#include <map>
#include <string>

#include "dce/errors.hpp"

namespace dce {

namespace {

bool left_boundary_moves(const Trajectory& traj) {
  for (int i = 0; i <= 128; ++i) {
    const Real t = traj.duration() * i / 128.0;
    if (traj.velocity(1, t) != 0.0) return true;
  }
  return false;
}

}  // namespace

ScatteringState evolve_scattering(const Trajectory& trajectory,
                                  const CavityConfig& config,
                                  const QuadratureSettings& quadrature) {
  config.validate();
  if (trajectory.frame() != TrajectoryFrame::conformal) {
    throw validation_error(
        "scattering evolution needs a conformal-frame trajectory");
  }
  if (!trajectory.is_rigid()) {
    throw validation_error(
        "scattering evolution applies to rigid motion only (constant cavity "
        "length); this trajectory changes the length");
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

  ScatteringState state;
  state.time = T;
  state.q = ComplexMatrix::Zero(n, n);
  state.q_dot = ComplexMatrix::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    const Complex ph = std::exp(Complex{0.0, -w(m) * T});
    state.q(m, m) = ph;
    state.q_dot(m, m) = Complex{0.0, -w(m)} * ph;
  }

  if (!left_boundary_moves(trajectory)) {
    return state;  // no offset, free evolution only
  }

  // The rate form of dQ1 needs the motion to have stopped at T.
  Real vel_scale = 0.0;
  for (int i = 0; i <= 256; ++i) {
    vel_scale = std::max(vel_scale,
                         std::abs(trajectory.velocity(1, T * i / 256.0)));
  }
  if (std::abs(trajectory.velocity(1, T)) > 1e-8 * std::max(Real(1.0), vel_scale)) {
    throw validation_error(
        "scattering extraction needs zero boundary velocity at the final time");
  }

  const CouplingMatrices coupling = coupling_matrices(config);
  const Real hint_base = trajectory.characteristic_frequency();

  // Offset rate du/dt = -v1(t); its oscillatory integrals over the frequency
  // ladder, cached by integer multiples of w_1 (exact for this basis).
  const Real w1 = w(0);
  bool ladder = true;
  for (int m = 2; m <= n; ++m) {
    if (std::abs(w(m - 1) - m * w1) > 1e-12 * w(m - 1)) {
      ladder = false;
      break;
    }
  }
  auto offset_integral = [&](Real sigma) {
    auto f = [&trajectory, sigma](Real s) {
      return std::exp(Complex{0.0, -sigma * s}) * (-trajectory.velocity(1, s));
    };
    return integrate_gk(f, 0.0, T, quadrature, std::abs(sigma) + hint_base).value;
  };
  std::map<long, Complex> by_multiple;
  if (ladder) {
    for (long k = -(n - 1); k <= 2 * n; ++k) {
      by_multiple[k] = offset_integral(k * w1);
    }
  }

  for (int m = 1; m <= n; ++m) {
    for (int nn = 1; nn <= n; ++nn) {
      const Real gmn = coupling.g(m - 1, nn - 1);
      if (gmn == 0.0) continue;  // includes the whole m+n even lattice
      const Real wm = w(m - 1);
      const Real wn = w(nn - 1);
      Complex phi_minus, phi_plus;
      if (ladder) {
        phi_minus = by_multiple.at(m - nn);
        phi_plus = by_multiple.at(m + nn);
      } else {
        phi_minus = offset_integral(wm - wn);
        phi_plus = offset_integral(wm + wn);
      }
      const Complex en = std::exp(Complex{0.0, -wn * T});
      const Complex ep = std::exp(Complex{0.0, wn * T});
      state.q(m - 1, nn - 1) +=
          gmn * ((wm + wn) * en * phi_minus - (wm - wn) * ep * phi_plus);
      state.q_dot(m - 1, nn - 1) +=
          Complex{0.0, -wn} * gmn *
          ((wm + wn) * en * phi_minus + (wm - wn) * ep * phi_plus);
    }
  }
  return state;
}

BogoliubovTransform extract_coefficients(const ScatteringState& state,
                                         const RealVector& frequencies) {
  const int n = static_cast<int>(frequencies.size());
  if (state.q.rows() != n || state.q.cols() != n || state.q_dot.rows() != n ||
      state.q_dot.cols() != n) {
    throw validation_error(
        "scattering state and frequency ladder have mismatched sizes");
  }
  const Real T = state.time;
  BogoliubovTransform out;
  out.alpha = ComplexMatrix::Zero(n, n);
  out.beta = ComplexMatrix::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    const Complex row_phase = std::exp(Complex{0.0, frequencies(m) * T});
    for (int nn = 0; nn < n; ++nn) {
      const Real wn = frequencies(nn);
      const Complex en = std::exp(Complex{0.0, wn * T});
      const Complex q = state.q(m, nn);
      const Complex qd = state.q_dot(m, nn);
      const Complex alpha_t = en * (q + Complex{0.0, 1.0} * qd / wn) * 0.5;
      const Complex beta_t =
          std::conj(en) * (q - Complex{0.0, 1.0} * qd / wn) * 0.5;
      out.alpha(m, nn) = row_phase * alpha_t;
      out.beta(m, nn) = row_phase * beta_t;
    }
  }
  return out;
}

BogoliubovTransform scattering_transform(const Trajectory& trajectory,
                                         const CavityConfig& config,
                                         const QuadratureSettings& quadrature) {
  const ScatteringState state = evolve_scattering(trajectory, config, quadrature);
  return extract_coefficients(state, mode_frequencies(config));
}

Real verify_g_relation(const CavityConfig& config) {
  config.validate();
  const CouplingMatrices c = coupling_matrices(config);
  const RealVector w = mode_frequencies(config);
  Real worst = 0.0;
  for (int m = 0; m < config.n_modes; ++m) {
    for (int n = 0; n < config.n_modes; ++n) {
      if (m == n) continue;
      const Real from_a = -(c.a1(m, n) + c.a2(m, n)) / (w(m) + w(n));
      const Real from_b = (c.b1(m, n) + c.b2(m, n)) / (w(m) - w(n));
      worst = std::max(worst, std::abs(c.g(m, n) - from_a));
      worst = std::max(worst, std::abs(c.g(m, n) - from_b));
    }
  }
  return worst;
}

}  // namespace dce
