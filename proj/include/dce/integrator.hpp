#pragma once

#include <vector>

#include "dce/modes.hpp"
#include "dce/symplectic.hpp"
#include "dce/trajectory.hpp"
#include "dce/types.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Direct integration of the mode-evolution system
//
//   d/dt [alpha]   [ P(t)  Q(t) ] [alpha]
//        [beta ] = [            ] [beta ]      (conjugate structure implied)
//
// with P = i diag(omega) + v1 a1 + v2 a2 and Q = v1 b1 + v2 b2, where v_j is
// the velocity of boundary j and a/b are the boundary-coupling matrices.
// The generator satisfies the canonical-structure identity exactly, even
// truncated, so exponential stepping preserves the two transform relations
// to machine precision at any step size; step size only controls accuracy.
// ---------------------------------------------------------------------------

enum class IntegrationMethod {
  exponential_midpoint,  // 4th order: Richardson-combined exponential steps
  rk4,                   // classical Runge-Kutta, structure preserved only approximately
};

struct IntegrationSettings {
  // Fixed step count; 0 requests automatic refinement (double the count until
  // the transform stops changing by more than `tolerance`).
  int steps = 0;
  Real tolerance = 1e-9;
  int max_steps = 1 << 18;
  IntegrationMethod method = IntegrationMethod::exponential_midpoint;
  // Refresh frequencies and couplings from the instantaneous cavity length
  // (they all scale as 1/L, so the refresh is an exact rescale); when false
  // they stay frozen at the t = 0 cavity.
  bool recompute_couplings = true;
};

struct IntegrationResult {
  BogoliubovTransform transform;
  Real r1 = 0.0;  // canonical-structure residuals on the interior block
  Real r2 = 0.0;
  int steps_used = 0;
};

// Evolve the identity transform through the trajectory (conformal frame
// required).  The cavity config fixes the t = 0 mode basis and truncation.
IntegrationResult integrate_transform(const Trajectory& trajectory,
                                      const CavityConfig& config,
                                      const IntegrationSettings& settings = {});

// ---------------------------------------------------------------------------
// Joint refinement report over truncation sizes and step counts, tracking
// one (the globally dominant) pair-creation amplitude.
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  int n_modes = 0;
  int steps = 0;
  Real tracked_beta_abs = 0.0;  // |beta| at the reference entry
  Real r1 = 0.0, r2 = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  int reference_m = 0, reference_n = 0;  // 1-based entry being tracked
  Real final_change = 0.0;  // relative change across the last two truncations
  bool converged = false;   // final_change <= tolerance
};

ConvergenceReport convergence_study(const Trajectory& trajectory,
                                    const CavityConfig& base_config,
                                    const std::vector<int>& n_modes_list,
                                    const std::vector<int>& steps_list,
                                    Real tolerance,
                                    const IntegrationSettings& settings = {});

}  // namespace dce
