#include "dce/trajectory.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <variant>

#include "dce/errors.hpp"

namespace dce {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<Real>;

struct StaticParams {
  Real x1 = 0.0;
  Real x2 = 0.0;
};

struct OscillatingParams {
  Real r0 = 0.0;
  Real L0 = 0.0;
  Real amplitude = 0.0;
  Real nu = 0.0;
};

struct RigidParams {
  Real x1 = 0.0;
  Real length = 0.0;
  Real displacement = 0.0;
};

struct TabulatedParams {
  std::shared_ptr<const Spline> x1;
  std::shared_ptr<const Spline> x2;
};

// A radial-frame trajectory pushed through the straightening coordinate,
// with an optional constant shift of the right boundary.
struct ConvertedParams {
  std::shared_ptr<const Trajectory::Impl> base;
  SchwarzschildSpacetime spacetime{0.0};
  Real offset2 = 0.0;
};

using Params = std::variant<StaticParams, OscillatingParams, RigidParams,
                            TabulatedParams, ConvertedParams>;

void require_finite(Real v, const char* name) {
  if (!std::isfinite(v)) {
    throw validation_error(std::string("trajectory parameter ") + name +
                           " must be finite");
  }
}

// Quintic smoothstep: ramp(0) = 0, ramp(1) = 1, zero first and second
// derivatives at both ends.
Real ramp(Real u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
Real ramp_d(Real u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }
Real ramp_dd(Real u) { return u * (60.0 + u * (-180.0 + 120.0 * u)); }

}  // namespace

struct Trajectory::Impl {
  TrajectoryKind kind = TrajectoryKind::static_boundaries;
  TrajectoryFrame frame = TrajectoryFrame::conformal;
  Real duration = 0.0;
  Params params;

  enum class Derivative { position, velocity, acceleration };

  Real clamp_time(Real t) const {
    const Real slack = 1e-9 * std::max(Real(1.0), duration);
    if (t < -slack || t > duration + slack) {
      throw validation_error("time " + std::to_string(t) +
                             " outside trajectory domain [0, " +
                             std::to_string(duration) + "]");
    }
    return std::min(std::max(t, Real(0.0)), duration);
  }

  Real eval(int boundary, Real t_in, Derivative which) const {
    if (boundary != 1 && boundary != 2) {
      throw validation_error("boundary index must be 1 or 2, got " +
                             std::to_string(boundary));
    }
    const Real t = clamp_time(t_in);
    switch (kind) {
      case TrajectoryKind::static_boundaries: {
        const auto& p = std::get<StaticParams>(params);
        if (which == Derivative::position) return boundary == 1 ? p.x1 : p.x2;
        return 0.0;
      }
      case TrajectoryKind::oscillating_wall: {
        const auto& p = std::get<OscillatingParams>(params);
        if (boundary == 1) {
          return which == Derivative::position ? p.r0 : 0.0;
        }
        switch (which) {
          case Derivative::position:
            return p.r0 + p.L0 + p.amplitude * std::sin(p.nu * t);
          case Derivative::velocity:
            return p.amplitude * p.nu * std::cos(p.nu * t);
          case Derivative::acceleration:
            return -p.amplitude * p.nu * p.nu * std::sin(p.nu * t);
        }
        break;
      }
      case TrajectoryKind::rigid_translation: {
        const auto& p = std::get<RigidParams>(params);
        const Real base = (boundary == 1) ? p.x1 : p.x1 + p.length;
        const Real u = t / duration;
        switch (which) {
          case Derivative::position:
            return base + p.displacement * ramp(u);
          case Derivative::velocity:
            return p.displacement * ramp_d(u) / duration;
          case Derivative::acceleration:
            return p.displacement * ramp_dd(u) / (duration * duration);
        }
        break;
      }
      case TrajectoryKind::tabulated: {
        const auto& p = std::get<TabulatedParams>(params);
        const Spline& s = (boundary == 1) ? *p.x1 : *p.x2;
        switch (which) {
          case Derivative::position:
            return s(t);
          case Derivative::velocity:
            return s.prime(t);
          case Derivative::acceleration:
            return s.double_prime(t);
        }
        break;
      }
    }
    throw validation_error("unhandled trajectory evaluation");
  }
};

namespace {

// Converted trajectories need their own evaluation; they are stored as a
// distinct Impl whose params hold the base program and the geometry.
Real eval_converted(const Trajectory::Impl& impl, int boundary, Real t,
                    Trajectory::Impl::Derivative which) {
  const auto& p = std::get<ConvertedParams>(impl.params);
  const auto& st = p.spacetime;
  const Real r = p.base->eval(boundary, t, Trajectory::Impl::Derivative::position);
  switch (which) {
    case Trajectory::Impl::Derivative::position: {
      Real x = st.tortoise(r);
      if (boundary == 2) x += p.offset2;
      return x;
    }
    case Trajectory::Impl::Derivative::velocity: {
      const Real v = p.base->eval(boundary, t, Trajectory::Impl::Derivative::velocity);
      return st.conformal_velocity(r, v);
    }
    case Trajectory::Impl::Derivative::acceleration: {
      const Real v = p.base->eval(boundary, t, Trajectory::Impl::Derivative::velocity);
      const Real a =
          p.base->eval(boundary, t, Trajectory::Impl::Derivative::acceleration);
      return st.conformal_acceleration(r, v, a);
    }
  }
  throw validation_error("unhandled converted-trajectory evaluation");
}

}  // namespace

Trajectory::Trajectory(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Trajectory Trajectory::static_boundaries(Real x1, Real x2, Real duration,
                                         TrajectoryFrame frame) {
  require_finite(x1, "x1");
  require_finite(x2, "x2");
  require_finite(duration, "duration");
  if (!(x2 > x1)) throw validation_error("static boundaries need x2 > x1");
  if (!(duration > 0.0)) throw validation_error("duration must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = TrajectoryKind::static_boundaries;
  impl->frame = frame;
  impl->duration = duration;
  impl->params = StaticParams{x1, x2};
  return Trajectory(impl);
}

Trajectory Trajectory::oscillating_wall(Real r0, Real L0, Real amplitude, Real nu,
                                        Real duration, TrajectoryFrame frame) {
  require_finite(r0, "r0");
  require_finite(L0, "L0");
  require_finite(amplitude, "amplitude");
  require_finite(nu, "nu");
  require_finite(duration, "duration");
  if (!(L0 > 0.0)) throw validation_error("base length L0 must be positive");
  if (!(duration > 0.0)) throw validation_error("duration must be positive");
  if (!(nu > 0.0)) throw validation_error("drive frequency nu must be positive");
  if (!(std::abs(amplitude) < L0)) {
    throw validation_error("oscillation amplitude must satisfy |A| < L0");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = TrajectoryKind::oscillating_wall;
  impl->frame = frame;
  impl->duration = duration;
  impl->params = OscillatingParams{r0, L0, amplitude, nu};
  return Trajectory(impl);
}

Trajectory Trajectory::rigid_translation(Real x1_start, Real length,
                                         Real displacement, Real duration,
                                         TrajectoryFrame frame) {
  require_finite(x1_start, "x1_start");
  require_finite(length, "length");
  require_finite(displacement, "displacement");
  require_finite(duration, "duration");
  if (!(length > 0.0)) throw validation_error("cavity length must be positive");
  if (!(duration > 0.0)) throw validation_error("duration must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = TrajectoryKind::rigid_translation;
  impl->frame = frame;
  impl->duration = duration;
  impl->params = RigidParams{x1_start, length, displacement};
  return Trajectory(impl);
}

Trajectory Trajectory::tabulated(std::vector<Real> x1_samples,
                                 std::vector<Real> x2_samples, Real duration,
                                 TrajectoryFrame frame) {
  require_finite(duration, "duration");
  if (!(duration > 0.0)) throw validation_error("duration must be positive");
  if (x1_samples.size() != x2_samples.size()) {
    throw validation_error("tabulated boundaries need equally many samples");
  }
  if (x1_samples.size() < 8) {
    throw validation_error("tabulated trajectories need at least 8 samples");
  }
  for (Real v : x1_samples) require_finite(v, "x1 sample");
  for (Real v : x2_samples) require_finite(v, "x2 sample");
  const Real h = duration / static_cast<Real>(x1_samples.size() - 1);
  // Clamp both end velocities to zero so evolutions start and stop cleanly.
  auto s1 = std::make_shared<Spline>(x1_samples.begin(), x1_samples.end(), 0.0, h,
                                     0.0, 0.0);
  auto s2 = std::make_shared<Spline>(x2_samples.begin(), x2_samples.end(), 0.0, h,
                                     0.0, 0.0);
  auto impl = std::make_shared<Impl>();
  impl->kind = TrajectoryKind::tabulated;
  impl->frame = frame;
  impl->duration = duration;
  impl->params = TabulatedParams{std::move(s1), std::move(s2)};
  return Trajectory(impl);
}

TrajectoryKind Trajectory::kind() const { return impl_->kind; }

TrajectoryFrame Trajectory::frame() const { return impl_->frame; }

Real Trajectory::duration() const { return impl_->duration; }

Real Trajectory::position(int boundary, Real t) const {
  if (std::holds_alternative<ConvertedParams>(impl_->params)) {
    return eval_converted(*impl_, boundary, impl_->clamp_time(t),
                          Impl::Derivative::position);
  }
  return impl_->eval(boundary, t, Impl::Derivative::position);
}

Real Trajectory::velocity(int boundary, Real t) const {
  if (std::holds_alternative<ConvertedParams>(impl_->params)) {
    return eval_converted(*impl_, boundary, impl_->clamp_time(t),
                          Impl::Derivative::velocity);
  }
  return impl_->eval(boundary, t, Impl::Derivative::velocity);
}

Real Trajectory::acceleration(int boundary, Real t) const {
  if (std::holds_alternative<ConvertedParams>(impl_->params)) {
    return eval_converted(*impl_, boundary, impl_->clamp_time(t),
                          Impl::Derivative::acceleration);
  }
  return impl_->eval(boundary, t, Impl::Derivative::acceleration);
}

Real Trajectory::length(Real t) const { return position(2, t) - position(1, t); }

Real Trajectory::characteristic_frequency() const {
  if (std::holds_alternative<ConvertedParams>(impl_->params)) {
    // Straightening the coordinate rescales velocities but not time, so the
    // base program's frequency content carries over.
    const auto& p = std::get<ConvertedParams>(impl_->params);
    return Trajectory(p.base).characteristic_frequency();
  }
  switch (impl_->kind) {
    case TrajectoryKind::static_boundaries:
      return 0.0;
    case TrajectoryKind::oscillating_wall:
      return std::get<OscillatingParams>(impl_->params).nu;
    case TrajectoryKind::rigid_translation:
      // The smooth ramp concentrates its spectrum below a few cycles per
      // duration.
      return 4.0 * kPi / impl_->duration;
    case TrajectoryKind::tabulated:
      return 16.0 * kPi / impl_->duration;
  }
  return 0.0;
}

bool Trajectory::is_rigid() const {
  if (!std::holds_alternative<ConvertedParams>(impl_->params)) {
    switch (impl_->kind) {
      case TrajectoryKind::static_boundaries:
      case TrajectoryKind::rigid_translation:
        return true;
      case TrajectoryKind::oscillating_wall:
        return std::get<OscillatingParams>(impl_->params).amplitude == 0.0;
      case TrajectoryKind::tabulated:
        break;
    }
  }
  // Sampled check for tabulated and converted programs.
  const Real base = length(0.0);
  for (int i = 0; i <= 200; ++i) {
    const Real t = impl_->duration * i / 200.0;
    if (std::abs(length(t) - base) > 1e-12 * std::max(Real(1.0), std::abs(base))) {
      return false;
    }
  }
  return true;
}

TrajectoryReport Trajectory::validate(int samples) const {
  if (samples < 2) throw validation_error("validate needs at least 2 samples");
  TrajectoryReport report;
  report.min_length = length(0.0);
  bool superluminal = false;
  bool collapsed = false;
  Real worst_speed_time = 0.0;
  Real worst_length_time = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Real t = impl_->duration * i / (samples - 1);
    for (int b = 1; b <= 2; ++b) {
      const Real speed = std::abs(velocity(b, t));
      if (speed > report.max_speed) {
        report.max_speed = speed;
        worst_speed_time = t;
      }
    }
    const Real len = length(t);
    if (len < report.min_length) {
      report.min_length = len;
      worst_length_time = t;
    }
  }
  if (frame() == TrajectoryFrame::conformal && report.max_speed >= 1.0) {
    superluminal = true;
  }
  if (report.min_length <= 0.0) collapsed = true;
  if (superluminal) {
    report.violations.push_back("boundary speed reaches " +
                                std::to_string(report.max_speed) + " at t = " +
                                std::to_string(worst_speed_time) +
                                " (must stay below 1)");
  }
  if (collapsed) {
    report.violations.push_back("cavity length reaches " +
                                std::to_string(report.min_length) + " at t = " +
                                std::to_string(worst_length_time) +
                                " (must stay positive)");
  }
  return report;
}

namespace {

std::shared_ptr<const Trajectory::Impl> converted_impl(
    const SchwarzschildSpacetime& spacetime,
    std::shared_ptr<const Trajectory::Impl> base, Real offset2) {
  auto impl = std::make_shared<Trajectory::Impl>();
  impl->kind = base->kind;
  impl->frame = TrajectoryFrame::conformal;
  impl->duration = base->duration;
  impl->params = ConvertedParams{std::move(base), spacetime, offset2};
  return impl;
}

}  // namespace

Trajectory radial_to_conformal(const SchwarzschildSpacetime& spacetime,
                               const Trajectory& radial) {
  if (radial.frame() == TrajectoryFrame::conformal) return radial;
  // Probe a sample of times so a program dipping inside the horizon fails
  // here, with a clear message, rather than mid-evolution.
  for (int i = 0; i <= 64; ++i) {
    const Real t = radial.duration() * i / 64.0;
    spacetime.lapse(radial.position(1, t));
    spacetime.lapse(radial.position(2, t));
  }
  return Trajectory(converted_impl(spacetime, radial.impl_, 0.0));
}

Trajectory radial_to_conformal_rebased(const SchwarzschildSpacetime& spacetime,
                                       const Trajectory& radial, Real base_length) {
  if (!(base_length > 0.0)) {
    throw validation_error("rebased length must be positive");
  }
  if (radial.frame() == TrajectoryFrame::conformal) {
    throw validation_error(
        "rebasing applies to radial-frame trajectories; this one is already "
        "conformal");
  }
  Trajectory converted = radial_to_conformal(spacetime, radial);
  const Real exact0 = converted.length(0.0);
  return Trajectory(
      converted_impl(spacetime, radial.impl_, base_length - exact0));
}

}  // namespace dce
