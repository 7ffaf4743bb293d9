#include "dce/spacetime.hpp"

#include <cmath>
#include <string>

#include "dce/errors.hpp"

namespace dce {

SchwarzschildSpacetime::SchwarzschildSpacetime(Real horizon_radius)
    : rs_(horizon_radius) {
  if (!(horizon_radius >= 0.0) || !std::isfinite(horizon_radius)) {
    throw validation_error("horizon radius must be finite and >= 0, got " +
                           std::to_string(horizon_radius));
  }
}

void SchwarzschildSpacetime::require_exterior(Real r) const {
  if (!(r > rs_) || !std::isfinite(r)) {
    throw validation_error("radius " + std::to_string(r) +
                           " is not outside the horizon radius " +
                           std::to_string(rs_));
  }
}

Real SchwarzschildSpacetime::lapse(Real r) const {
  require_exterior(r);
  if (rs_ == 0.0) return 1.0;
  return 1.0 - rs_ / r;
}

Real SchwarzschildSpacetime::lapse_derivative(Real r) const {
  require_exterior(r);
  if (rs_ == 0.0) return 0.0;
  return rs_ / (r * r);
}

Real SchwarzschildSpacetime::tortoise(Real r) const {
  require_exterior(r);
  if (rs_ == 0.0) return r;
  return r + rs_ * std::log((r - rs_) / rs_);
}

Real SchwarzschildSpacetime::radius_from_tortoise(Real x) const {
  if (!std::isfinite(x)) throw validation_error("tortoise coordinate must be finite");
  if (rs_ == 0.0) {
    if (!(x > 0.0)) {
      throw validation_error("flat-space radius must be positive, got " +
                             std::to_string(x));
    }
    return x;
  }

  // Bracket the root.  x(r) is monotonically increasing, x(2 rs) = 2 rs, and
  // x < r for r < ... ; grow the bracket exponentially from simple guesses.
  Real lo = rs_ * (1.0 + 1e-14);
  Real hi = std::max(2.0 * rs_, x > 0.0 ? 2.0 * x : 2.0 * rs_);
  for (int i = 0; i < 2000 && tortoise(hi) < x; ++i) hi *= 2.0;
  if (tortoise(hi) < x) throw numerical_error("tortoise inversion failed to bracket above");
  // Below: approach the horizon until x(lo) <= x.
  for (int i = 0; i < 20000 && tortoise(lo) > x; ++i) {
    lo = rs_ + (lo - rs_) * 0.25;
    if (lo - rs_ < 1e-300) break;
  }
  if (tortoise(lo) > x) throw numerical_error("tortoise inversion failed to bracket below");

  // Newton with bisection fallback; dx/dr = 1/f(r).
  Real r = std::min(std::max(x, lo), hi);
  if (!(r > lo && r < hi)) r = 0.5 * (lo + hi);
  const Real tol = 1e-14 * std::max(1.0, std::abs(x));
  for (int iter = 0; iter < 200; ++iter) {
    const Real fx = tortoise(r) - x;
    if (fx > 0.0) {
      hi = r;
    } else {
      lo = r;
    }
    const Real deriv = 1.0 / lapse(r);
    Real step = fx / deriv;
    Real next = r - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // safeguard
    if (std::abs(next - r) <= tol) return next;
    r = next;
  }
  throw numerical_error("tortoise inversion did not converge for x = " +
                        std::to_string(x));
}

Real SchwarzschildSpacetime::proper_time(Real r_observer, Real coordinate_time) const {
  return std::sqrt(lapse(r_observer)) * coordinate_time;
}

Real SchwarzschildSpacetime::conformal_velocity(Real r, Real radial_velocity) const {
  return radial_velocity / lapse(r);
}

Real SchwarzschildSpacetime::conformal_acceleration(Real r, Real radial_velocity,
                                                    Real radial_acceleration) const {
  const Real f = lapse(r);
  const Real fp = lapse_derivative(r);
  return radial_acceleration / f - radial_velocity * radial_velocity * fp / (f * f);
}

}  // namespace dce
