#include "dce/integrator.hpp"

#include <cmath>
#include <string>

#include "dce/errors.hpp"
#include "dce/expm.hpp"

namespace dce {

namespace {

// One evaluation context: everything fixed over a run.
struct System {
  const Trajectory* traj = nullptr;
  CavityConfig config;
  RealVector omega0;
  CouplingMatrices coupling;
  Real L0 = 0.0;
  bool recompute = false;

  // Generator blocks at time t: P into `p`, Q into `q`.
  void blocks(Real t, ComplexMatrix& p, ComplexMatrix& q) const {
    const int n = config.n_modes;
    const Real v1 = traj->velocity(1, t);
    const Real v2 = traj->velocity(2, t);
    Real scale = 1.0;
    if (recompute) {
      scale = L0 / traj->length(t);  // every coupling and frequency is ~ 1/L
    }
    RealMatrix preal = (v1 * coupling.a1 + v2 * coupling.a2) * scale;
    RealMatrix qreal = (v1 * coupling.b1 + v2 * coupling.b2) * scale;
    p = preal.cast<Complex>();
    q = qreal.cast<Complex>();
    for (int i = 0; i < n; ++i) {
      p(i, i) += Complex{0.0, omega0(i) * scale};
    }
  }

  // Full 2n x 2n generator for exponential stepping.
  ComplexMatrix generator(Real t) const {
    const int n = config.n_modes;
    ComplexMatrix p, q;
    blocks(t, p, q);
    ComplexMatrix g = ComplexMatrix::Zero(2 * n, 2 * n);
    g.topLeftCorner(n, n) = p;
    g.topRightCorner(n, n) = q;
    g.bottomLeftCorner(n, n) = q.conjugate();
    g.bottomRightCorner(n, n) = p.conjugate();
    return g;
  }
};

// Apply the top block row of a structured propagator U = exp(h G) to the
// running transform: alpha' = U11 alpha + U12 conj(beta), and likewise for
// beta.  Writing the update this way keeps the conjugate block structure
// exact by construction.
void apply_propagator(const ComplexMatrix& u, BogoliubovTransform& s) {
  const int n = s.size();
  const auto u11 = u.topLeftCorner(n, n);
  const auto u12 = u.topRightCorner(n, n);
  ComplexMatrix alpha = u11 * s.alpha + u12 * s.beta.conjugate();
  ComplexMatrix beta = u11 * s.beta + u12 * s.alpha.conjugate();
  s.alpha = std::move(alpha);
  s.beta = std::move(beta);
}

BogoliubovTransform run_exponential(const System& sys, int steps) {
  const Real T = sys.traj->duration();
  const Real h = T / steps;
  BogoliubovTransform s = identity_transform(sys.config.n_modes);
  for (int k = 0; k < steps; ++k) {
    const Real t = k * h;
    // Richardson-combined midpoint exponentials: two half steps evaluated at
    // their own midpoints against one full step, eliminating the leading
    // error term (fourth order overall).
    const ComplexMatrix ua = matrix_exponential(0.5 * h * sys.generator(t + 0.25 * h));
    const ComplexMatrix ub = matrix_exponential(0.5 * h * sys.generator(t + 0.75 * h));
    const ComplexMatrix uf = matrix_exponential(h * sys.generator(t + 0.5 * h));
    const ComplexMatrix u = (4.0 * (ub * ua) - uf) / 3.0;
    apply_propagator(u, s);
  }
  return s;
}

BogoliubovTransform run_rk4(const System& sys, int steps) {
  const int n = sys.config.n_modes;
  const Real T = sys.traj->duration();
  const Real h = T / steps;
  ComplexMatrix alpha = ComplexMatrix::Identity(n, n);
  ComplexMatrix beta = ComplexMatrix::Zero(n, n);

  ComplexMatrix p, q;
  auto deriv = [&sys, &p, &q](Real t, const ComplexMatrix& a, const ComplexMatrix& b,
                              ComplexMatrix& da, ComplexMatrix& db) {
    sys.blocks(t, p, q);
    da = p * a + q * b.conjugate();
    db = p * b + q * a.conjugate();
  };

  ComplexMatrix k1a(n, n), k1b(n, n), k2a(n, n), k2b(n, n);
  ComplexMatrix k3a(n, n), k3b(n, n), k4a(n, n), k4b(n, n);
  for (int k = 0; k < steps; ++k) {
    const Real t = k * h;
    deriv(t, alpha, beta, k1a, k1b);
    deriv(t + 0.5 * h, alpha + 0.5 * h * k1a, beta + 0.5 * h * k1b, k2a, k2b);
    deriv(t + 0.5 * h, alpha + 0.5 * h * k2a, beta + 0.5 * h * k2b, k3a, k3b);
    deriv(t + h, alpha + h * k3a, beta + h * k3b, k4a, k4b);
    alpha += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    beta += (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
  }
  BogoliubovTransform s;
  s.alpha = std::move(alpha);
  s.beta = std::move(beta);
  return s;
}

BogoliubovTransform run_once(const System& sys, int steps,
                             IntegrationMethod method) {
  if (method == IntegrationMethod::exponential_midpoint) {
    return run_exponential(sys, steps);
  }
  return run_rk4(sys, steps);
}

Real transform_distance(const BogoliubovTransform& x, const BogoliubovTransform& y) {
  return std::max((x.alpha - y.alpha).cwiseAbs().maxCoeff(),
                  (x.beta - y.beta).cwiseAbs().maxCoeff());
}

}  // namespace

IntegrationResult integrate_transform(const Trajectory& trajectory,
                                      const CavityConfig& config,
                                      const IntegrationSettings& settings) {
  config.validate();
  if (trajectory.frame() != TrajectoryFrame::conformal) {
    throw validation_error(
        "integration needs a conformal-frame trajectory; convert the radial "
        "program first");
  }
  const Real L0 = config.length();
  const Real tol0 = 1e-9 * L0;
  if (std::abs(trajectory.position(1, 0.0) - config.x1) > tol0 ||
      std::abs(trajectory.position(2, 0.0) - config.x2) > tol0) {
    throw validation_error(
        "trajectory must start on the cavity boundaries the mode basis is "
        "built from");
  }
  if (settings.steps < 0) {
    throw validation_error("step count must be >= 0 (0 = automatic)");
  }

  System sys;
  sys.traj = &trajectory;
  sys.config = config;
  sys.omega0 = mode_frequencies(config);
  sys.coupling = coupling_matrices(config);
  sys.L0 = L0;
  sys.recompute = settings.recompute_couplings;

  IntegrationResult out;
  if (settings.steps > 0) {
    out.transform = run_once(sys, settings.steps, settings.method);
    out.steps_used = settings.steps;
  } else {
    int steps = 64;
    BogoliubovTransform current = run_once(sys, steps, settings.method);
    while (true) {
      if (2 * steps > settings.max_steps) {
        throw numerical_error(
            "step refinement exceeded " + std::to_string(settings.max_steps) +
            " steps without meeting tolerance " +
            std::to_string(settings.tolerance));
      }
      BogoliubovTransform finer = run_once(sys, 2 * steps, settings.method);
      const Real change = transform_distance(current, finer);
      current = std::move(finer);
      steps *= 2;
      if (change <= settings.tolerance) break;
    }
    out.transform = std::move(current);
    out.steps_used = steps;
  }

  const int interior = std::max(1, config.n_modes / 2);
  auto [r1, r2] = identity_residuals(out.transform, interior);
  out.r1 = r1;
  out.r2 = r2;
  return out;
}

ConvergenceReport convergence_study(const Trajectory& trajectory,
                                    const CavityConfig& base_config,
                                    const std::vector<int>& n_modes_list,
                                    const std::vector<int>& steps_list,
                                    Real tolerance,
                                    const IntegrationSettings& settings) {
  if (n_modes_list.empty() || steps_list.empty()) {
    throw validation_error("convergence study needs at least one truncation and "
                           "one step count");
  }
  for (int n : n_modes_list) {
    if (n < 1) throw validation_error("truncation sizes must be >= 1");
  }
  for (int s : steps_list) {
    if (s < 1) throw validation_error("step counts must be >= 1");
  }

  // Reference entry: dominant pair-creation amplitude of the largest
  // truncation at the finest step count.
  std::vector<std::vector<BogoliubovTransform>> grid;
  grid.reserve(n_modes_list.size());
  for (int n : n_modes_list) {
    CavityConfig config = base_config;
    config.n_modes = n;
    std::vector<BogoliubovTransform> row;
    row.reserve(steps_list.size());
    for (int steps : steps_list) {
      IntegrationSettings local = settings;
      local.steps = steps;
      row.push_back(integrate_transform(trajectory, config, local).transform);
    }
    grid.push_back(std::move(row));
  }

  const BogoliubovTransform& reference = grid.back().back();
  int rm = 0, rn = 0;
  reference.beta.cwiseAbs().maxCoeff(&rm, &rn);

  ConvergenceReport report;
  report.reference_m = rm + 1;
  report.reference_n = rn + 1;
  for (std::size_t i = 0; i < n_modes_list.size(); ++i) {
    for (std::size_t j = 0; j < steps_list.size(); ++j) {
      const BogoliubovTransform& t = grid[i][j];
      ConvergenceRow row;
      row.n_modes = n_modes_list[i];
      row.steps = steps_list[j];
      row.tracked_beta_abs =
          (rm < t.beta.rows() && rn < t.beta.cols()) ? std::abs(t.beta(rm, rn)) : 0.0;
      const int interior = std::max(1, row.n_modes / 2);
      auto [r1, r2] = identity_residuals(t, interior);
      row.r1 = r1;
      row.r2 = r2;
      report.rows.push_back(row);
    }
  }

  if (n_modes_list.size() >= 2) {
    const auto& prev = grid[n_modes_list.size() - 2].back();
    const Real last =
        (rm < prev.beta.rows() && rn < prev.beta.cols()) ? std::abs(prev.beta(rm, rn)) : 0.0;
    const Real fin = std::abs(reference.beta(rm, rn));
    const Real denom = std::max(fin, Real(1e-300));
    report.final_change = std::abs(fin - last) / denom;
  } else {
    report.final_change = 0.0;
  }
  report.converged = report.final_change <= tolerance;
  return report;
}

}  // namespace dce
