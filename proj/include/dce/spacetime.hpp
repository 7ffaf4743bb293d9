#pragma once

#include "dce/types.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Static spherically symmetric exterior geometry with line element
//   ds^2 = -f(r) dt^2 + dr^2/f(r),   f(r) = 1 - r_horizon / r,
// restricted to the radial sector used by the cavity model.  The coordinate
//   x(r) = r + r_horizon * ln((r - r_horizon)/r_horizon)
// straightens radial light rays, so a 1+1 field problem between two radial
// boundaries becomes a flat-looking problem on the x axis.  The flat limit is
// r_horizon = 0, where x(r) = r and f = 1 identically.
// ---------------------------------------------------------------------------

class SchwarzschildSpacetime {
 public:
  // horizon_radius == 0 constructs flat spacetime; negative values are invalid.
  explicit SchwarzschildSpacetime(Real horizon_radius = 0.0);

  Real horizon_radius() const { return rs_; }
  bool is_flat() const { return rs_ == 0.0; }

  // f(r); requires r > horizon (except in the flat case, where any r > 0 works).
  Real lapse(Real r) const;

  // df/dr.
  Real lapse_derivative(Real r) const;

  // x(r) above.  Monotonic on (horizon, infinity), with x -> -infinity at the
  // horizon and x ~ r far away.
  Real tortoise(Real r) const;

  // Inverse of tortoise(): bracketed Newton iteration with bisection
  // safeguard, converging to machine precision.  Throws numerical_error if
  // the iteration cap is reached.
  Real radius_from_tortoise(Real x) const;

  // Proper time of a static observer at radius r_observer after coordinate
  // time t: tau = sqrt(f(r_observer)) * t.
  Real proper_time(Real r_observer, Real coordinate_time) const;

  // d x / d t along a radial path r(t) with dr/dt = radial_velocity:
  // dx/dt = (dr/dt)/f(r).
  Real conformal_velocity(Real r, Real radial_velocity) const;

  // Second derivative of x along the path:
  // d2x/dt2 = a/f - v^2 f'(r) / f^2  with a = d2r/dt2, v = dr/dt.
  Real conformal_acceleration(Real r, Real radial_velocity,
                              Real radial_acceleration) const;

 private:
  void require_exterior(Real r) const;
  Real rs_;
};

}  // namespace dce
