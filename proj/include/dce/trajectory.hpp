#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dce/spacetime.hpp"
#include "dce/types.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Boundary motion programs.  A Trajectory holds the positions of the two
// cavity ends as functions of time on [0, duration], with first and second
// time derivatives, in one of two frames:
//   * conformal — positions are straight-line coordinates of the wave
//     problem; this is the frame every evolution method consumes.
//   * radial    — positions are area-radius coordinates of a curved
//     exterior; convert with radial_to_conformal before evolving.
// ---------------------------------------------------------------------------

enum class TrajectoryKind {
  static_boundaries,   // both ends fixed
  oscillating_wall,    // left end fixed, right end r0 + L0 + A sin(nu t)
  rigid_translation,   // both ends translate together by a smooth ramp
  tabulated,           // sampled positions, cubic-spline interpolated
};

enum class TrajectoryFrame { conformal, radial };

std::string to_string(TrajectoryKind kind);

struct TrajectoryReport {
  Real max_speed = 0.0;   // largest |velocity| over both boundaries
  Real min_length = 0.0;  // smallest cavity length encountered
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

class Trajectory {
 public:
  // Factories.  Every factory validates its arguments (durations and lengths
  // positive, finite parameters) and throws validation_error on bad input.
  static Trajectory static_boundaries(Real x1, Real x2, Real duration,
                                      TrajectoryFrame frame = TrajectoryFrame::conformal);
  // Right wall r0 + L0 + A sin(nu t), left wall fixed at r0.
  static Trajectory oscillating_wall(Real r0, Real L0, Real amplitude, Real nu,
                                     Real duration,
                                     TrajectoryFrame frame = TrajectoryFrame::conformal);
  // Both walls shifted by displacement * ramp(t/duration) where ramp is the
  // quintic smoothstep (zero velocity and acceleration at both ends).
  static Trajectory rigid_translation(Real x1_start, Real length, Real displacement,
                                      Real duration,
                                      TrajectoryFrame frame = TrajectoryFrame::conformal);
  // Uniformly sampled positions on [0, duration] (first sample at t = 0,
  // last at t = duration, at least 8 samples), interpolated by a cubic
  // spline clamped to zero end velocities.
  static Trajectory tabulated(std::vector<Real> x1_samples,
                              std::vector<Real> x2_samples, Real duration,
                              TrajectoryFrame frame = TrajectoryFrame::conformal);

  TrajectoryKind kind() const;
  TrajectoryFrame frame() const;
  Real duration() const;

  // boundary is 1 (left) or 2 (right); t must lie in [0, duration] up to a
  // tiny tolerance.
  Real position(int boundary, Real t) const;
  Real velocity(int boundary, Real t) const;
  Real acceleration(int boundary, Real t) const;
  Real length(Real t) const;

  // Largest angular frequency present in the motion, used to seed
  // oscillatory quadrature.  Zero for motionless programs.
  Real characteristic_frequency() const;

  // True if the two ends keep their separation constant (sampled check for
  // tabulated programs, exact for the others).
  bool is_rigid() const;

  // Scan the program for physical violations: boundary speeds >= 1 (in the
  // conformal frame, where 1 is the wave speed) and non-positive lengths.
  TrajectoryReport validate(int samples = 2001) const;

  struct Impl;

 private:
  explicit Trajectory(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;

  friend Trajectory radial_to_conformal(const SchwarzschildSpacetime&,
                                        const Trajectory&);
  friend Trajectory radial_to_conformal_rebased(const SchwarzschildSpacetime&,
                                                const Trajectory&, Real);
};

// Map a radial-frame trajectory through the straightening coordinate of the
// given geometry: positions x = x(r), velocities dx/dt = (dr/dt)/f, and the
// matching second derivative.  A conformal-frame input must be flat-space
// trivial (it is returned unchanged); a flat geometry maps radial positions
// through the identity.  The result is tagged conformal.
Trajectory radial_to_conformal(const SchwarzschildSpacetime& spacetime,
                               const Trajectory& radial);

// Same, then shift the right boundary by a constant so the cavity length at
// t = 0 equals `base_length` while the motion (velocities, accelerations)
// is untouched.  Used to present curved cavities on the frequency ladder
// omega_m = m pi / base_length.
Trajectory radial_to_conformal_rebased(const SchwarzschildSpacetime& spacetime,
                                       const Trajectory& radial, Real base_length);

}  // namespace dce
