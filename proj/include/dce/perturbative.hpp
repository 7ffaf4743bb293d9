#pragma once

#include <string>
#include <vector>

#include "dce/modes.hpp"
#include "dce/quadrature.hpp"
#include "dce/spacetime.hpp"
#include "dce/symplectic.hpp"
#include "dce/trajectory.hpp"
#include "dce/types.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// First-order (in boundary displacement) evaluation of the evolution, plus
// closed-form results for the sinusoidally driven cavity.
//
// For a conformal-frame trajectory with velocities v1, v2 and duration T,
// the first-order transform is assembled from oscillatory time integrals
//   Iminus[j](m,n) = Integral_0^T e^{-i(w_m - w_n)t} v_j(t) dt
//   Iplus [j](m,n) = Integral_0^T e^{-i(w_m + w_n)t} v_j(t) dt
// as
//   alpha[m,n] = e^{i w_m T} ( delta_mn (1 + i Phi_m) + sum_j aj[m,n] Iminus[j] )
//   beta [m,n] = e^{i w_m T}   sum_j bj[m,n] Iplus[j]
// where Phi_m = -(w_m / L0) Integral_0^T (L(t) - L0) dt is the accumulated
// detuning of mode m from the instantaneous cavity length.
// ---------------------------------------------------------------------------

struct PerturbativeResult {
  BogoliubovTransform transform;
  Real max_speed = 0.0;         // largest boundary speed encountered
  Real epsilon = 0.0;           // largest boundary displacement / base length
  Real quadrature_error = 0.0;  // worst-case propagated quadrature error bound
  std::vector<std::string> warnings;
};

// First-order transform for any conformal-frame trajectory.  Radial-frame
// input is a validation_error (convert first).
PerturbativeResult dyson_transform(const Trajectory& trajectory,
                                   const CavityConfig& config,
                                   const QuadratureSettings& quadrature = {});

// ---------------------------------------------------------------------------
// Sinusoidally driven cavity in a static exterior geometry (flat when the
// horizon radius is zero): left wall fixed at radius r0, right wall at
// r0 + L0 + A sin(nu t).  With f0 = f(r0), fL = f(r0 + L0), the natural
// ladder is w0_m = f0 m pi / L0, and runs are taken over T = p pi / nu.
// ---------------------------------------------------------------------------

struct OscillatingScenario {
  Real r0 = 1.0;       // left wall radius (any positive value in flat space)
  Real L0 = 1.0;       // radial base length
  Real amplitude = 0.0;  // A
  Real nu = 1.0;       // drive angular frequency
  int p = 1;           // half-periods of drive: duration T = p pi / nu

  Real duration() const { return p * kPi / nu; }
  Real epsilon() const { return amplitude / L0; }
  void validate() const;
};

// Ladder frequency w0_m of the scenario's cavity.
Real scenario_mode_frequency(const OscillatingScenario& scenario,
                             const SchwarzschildSpacetime& spacetime, int m);

// Closed-form first-order beta[m,n] for the driven cavity, valid for any
// drive frequency, including exactly on the two special drives
//   nu = w0_m + w0_n        (pair resonance)
//   nu = (w0_m + w0_n)/2    (curvature-enabled half-frequency resonance)
// where the naive expression degenerates to 0/0.  Within `kResonanceWindow`
// (relative) of either special drive the caller must acknowledge the
// removable limit by passing resonant_branch = true; otherwise a
// validation_error points at the limit evaluation.  `drive_duration`
// overrides the scenario duration when >= 0 (used by frequency scans that
// hold T fixed while varying nu).
Complex oscillating_beta_closed_form(const OscillatingScenario& scenario,
                                     const SchwarzschildSpacetime& spacetime,
                                     int m, int n, bool resonant_branch = false,
                                     Real drive_duration = -1.0);

inline constexpr Real kResonanceWindow = 1e-9;

// Mean particle number created in mode m when the drive sits exactly on a
// pair resonance nu = w0_q + w0_r (to first order, for m + n = q + r pairs):
//   |beta[m,n]|^2 = (1/4) (1 - 2 L0 rs / r0^2) m n (eps w0_1 T)^2
// Returns zero for pairs off the resonant anti-diagonal.
Real resonant_pair_number(const OscillatingScenario& scenario,
                          const SchwarzschildSpacetime& spacetime, int q, int r,
                          int m, int n);

// Closed-form beta[q,r] for the half-frequency drive nu = (w0_q + w0_r)/2,
// where pair creation is driven jointly by the parametric term (odd p only)
// and the curvature gradient across the cavity (any p, vanishes in flat
// space).
Complex subharmonic_beta(const OscillatingScenario& scenario,
                         const SchwarzschildSpacetime& spacetime, int q, int r);

// Scan |beta[m,n]| of the closed form over a drive-frequency grid at fixed
// duration (the scenario's own duration).  Each row labels the nearest
// special drive within kResonanceWindow * 1e3 (for presentation only).
struct ScanRow {
  Real nu = 0.0;
  int m = 0;
  int n = 0;
  Complex beta{0.0, 0.0};
  std::string branch;  // "pair-resonance", "half-frequency", "off-resonance"
};

std::vector<ScanRow> resonance_scan(const OscillatingScenario& scenario,
                                    const SchwarzschildSpacetime& spacetime,
                                    const std::vector<Real>& nu_grid, int m, int n);

// Build the conformal-frame trajectory the scenario describes: exact
// straightened motion of the oscillating wall, presented on the base length
// L0 / f0 so the mode ladder matches w0_m.  In flat space this is just the
// oscillating trajectory itself.
Trajectory scenario_trajectory(const OscillatingScenario& scenario,
                               const SchwarzschildSpacetime& spacetime);

// Matching cavity (left wall at the straightened left-boundary position).
CavityConfig scenario_cavity(const OscillatingScenario& scenario,
                             const SchwarzschildSpacetime& spacetime, int n_modes);

}  // namespace dce
