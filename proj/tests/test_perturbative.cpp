#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "dce/errors.hpp"
#include "dce/perturbative.hpp"
#include "dce/spacetime.hpp"
#include "dce/symplectic.hpp"
#include "dce/trajectory.hpp"

using namespace dce;

namespace {

CavityConfig unit_cavity(int n) {
  CavityConfig c;
  c.x1 = 0.0;
  c.x2 = 1.0;
  c.n_modes = n;
  return c;
}

// Driven flat cavity with left wall at x = r0, used by the closed-form tests.
OscillatingScenario flat_drive(Real amplitude, Real nu, int p) {
  OscillatingScenario s;
  s.r0 = 1.0;
  s.L0 = 1.0;
  s.amplitude = amplitude;
  s.nu = nu;
  s.p = p;
  return s;
}

Real max_beta_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("still cavity reduces to free phase evolution") {
  CavityConfig c = unit_cavity(6);
  const Real T = 0.7;
  Trajectory traj = Trajectory::static_boundaries(c.x1, c.x2, T);
  PerturbativeResult r = dyson_transform(traj, c);

  BogoliubovTransform free = phase_evolution(mode_frequencies(c), T);
  CHECK(max_beta_diff(r.transform.alpha, free.alpha) < 1e-15);
  CHECK(r.transform.beta.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.epsilon == 0.0);
  CHECK(r.max_speed == 0.0);
  CHECK(r.warnings.empty());
}

TEST_CASE("first-order defect shrinks quadratically with the displacement") {
  // The transform is exact to first order in the boundary displacement, so
  // the canonical-relation residual is O(eps^2): halving the displacement
  // must shrink it by ~4.
  CavityConfig c = unit_cavity(20);
  const Real T = 4.0;
  auto residual = [&](Real d) {
    Trajectory traj = Trajectory::rigid_translation(c.x1, c.length(), d, T);
    PerturbativeResult r = dyson_transform(traj, c);
    auto [r1, r2] = identity_residuals(r.transform, 10);
    return std::max(r1, r2);
  };
  const Real full = residual(1e-3);
  const Real half = residual(0.5e-3);
  CHECK(full < 5e-6);
  const Real ratio = full / half;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("closed form matches the numerical first order off resonance") {
  // Flat cavity driven away from every resonance: the closed form and the
  // quadrature-based evaluation must agree essentially to roundoff.
  OscillatingScenario scn = flat_drive(1e-3, 2.6, 20);
  SchwarzschildSpacetime flat(0.0);
  const int n_modes = 6;

  Trajectory traj = scenario_trajectory(scn, flat);
  CavityConfig cavity = scenario_cavity(scn, flat, n_modes);
  PerturbativeResult dyson = dyson_transform(traj, cavity);

  Real worst = 0.0;
  for (int m = 1; m <= n_modes; ++m) {
    for (int n = 1; n <= n_modes; ++n) {
      const Complex closed = oscillating_beta_closed_form(scn, flat, m, n);
      worst = std::max(worst, std::abs(dyson.transform.beta(m - 1, n - 1) - closed));
    }
  }
  CHECK(worst < 1e-10);
  CHECK(worst <= std::max(1e-12, 10.0 * dyson.quadrature_error));
}

TEST_CASE("closed form matches the numerical first order at a non-integer phase") {
  // Drive at nu = w1 for one full period 2 pi (not a half-period multiple of
  // the drive), exercising the drive_duration override on the (1,1) entry,
  // which sits exactly on the half-frequency limit nu = (w1 + w1)/2.
  OscillatingScenario scn = flat_drive(1e-3, kPi, 1);
  SchwarzschildSpacetime flat(0.0);
  const Real T = 2.0 * kPi;

  Trajectory traj = Trajectory::oscillating_wall(scn.r0, scn.L0, scn.amplitude,
                                                 scn.nu, T);
  CavityConfig cavity = scenario_cavity(scn, flat, 3);
  PerturbativeResult dyson = dyson_transform(traj, cavity);

  const Complex closed = oscillating_beta_closed_form(
      scn, flat, 1, 1, /*resonant_branch=*/true, /*drive_duration=*/T);
  CHECK(std::abs(dyson.transform.beta(0, 0) - closed) < 1e-8);
  // Secular growth dominates at this drive: |beta11| ~ eps w1 T / 2.
  CHECK(std::abs(closed) ==
        doctest::Approx(0.5 * 1e-3 * kPi * T).epsilon(0.2));
}

TEST_CASE("resonant drives require acknowledging the removable limit") {
  SchwarzschildSpacetime flat(0.0);
  const Real w12 = 3.0 * kPi;  // w1 + w2 of the unit flat cavity

  // Exactly on the pair resonance, and just inside the guard window.
  OscillatingScenario on = flat_drive(1e-3, w12, 200);
  CHECK_THROWS_AS((void)oscillating_beta_closed_form(on, flat, 1, 2),
                  validation_error);
  CHECK_NOTHROW((void)oscillating_beta_closed_form(on, flat, 1, 2, true));

  OscillatingScenario near = flat_drive(1e-3, w12 * (1.0 + 1e-10), 200);
  CHECK_THROWS_AS((void)oscillating_beta_closed_form(near, flat, 1, 2),
                  validation_error);

  // Outside the window both branches evaluate, and other entries of the
  // on-resonance scenario never needed the flag.
  OscillatingScenario off = flat_drive(1e-3, w12 * (1.0 + 1e-6), 200);
  CHECK_NOTHROW((void)oscillating_beta_closed_form(off, flat, 1, 2));
  CHECK_NOTHROW((void)oscillating_beta_closed_form(on, flat, 1, 3));
}

TEST_CASE("closed form is continuous across the resonance window") {
  // Hold the duration fixed and step the drive 1e-4 off the pair resonance:
  // the magnitude must move by O((detuning * T)^2 / 24), far under 0.1%.
  SchwarzschildSpacetime flat(0.0);
  const Real w12 = 3.0 * kPi;
  OscillatingScenario on = flat_drive(1e-3, w12, 200);
  const Real T = on.duration();

  const Real exact =
      std::abs(oscillating_beta_closed_form(on, flat, 1, 2, true, T));
  for (Real shift : {1e-4, -1e-4}) {
    OscillatingScenario near = flat_drive(1e-3, w12 * (1.0 + shift), 200);
    const Real nearby =
        std::abs(oscillating_beta_closed_form(near, flat, 1, 2, false, T));
    CHECK(std::abs(nearby - exact) / exact < 1e-3);
  }
}

TEST_CASE("pair resonance reproduces the quadratic growth law") {
  SchwarzschildSpacetime flat(0.0);
  OscillatingScenario scn = flat_drive(1e-3, 3.0 * kPi, 200);

  const Complex beta = oscillating_beta_closed_form(scn, flat, 1, 2, true);
  const Real predicted = resonant_pair_number(scn, flat, 1, 2, 1, 2);
  CHECK(std::norm(beta) == doctest::Approx(predicted).epsilon(1e-12));

  // Off the resonant anti-diagonal the growth law gives zero.
  CHECK(resonant_pair_number(scn, flat, 1, 2, 1, 1) == 0.0);
  CHECK(resonant_pair_number(scn, flat, 1, 2, 2, 2) == 0.0);

  // Frozen hand value: eps = 1e-3, w1 = pi, T = 100 gives
  // 0.25 * 1 * 2 * (eps w1 T)^2.
  OscillatingScenario hand = flat_drive(1e-3, 3.0 * kPi, 300);  // T = 100
  CHECK(resonant_pair_number(hand, flat, 1, 2, 1, 2) ==
        doctest::Approx(0.04934802200544679).epsilon(1e-13));
}

TEST_CASE("first-order transform obeys the index-swap phase symmetry") {
  // For any first-order transform, e^{-i w_m T} beta[m,n] is symmetric in
  // (m, n).  The rigid translation excites many pairs at once.
  CavityConfig c = unit_cavity(8);
  const Real T = 2.0;
  Trajectory traj = Trajectory::rigid_translation(c.x1, c.length(), 0.01, T);
  PerturbativeResult r = dyson_transform(traj, c);
  const RealVector w = mode_frequencies(c);

  Real worst = 0.0;
  for (int m = 0; m < 8; ++m) {
    for (int n = 0; n < 8; ++n) {
      const Complex lhs = std::exp(Complex{0.0, -w(m) * T}) * r.transform.beta(m, n);
      const Complex rhs = std::exp(Complex{0.0, -w(n) * T}) * r.transform.beta(n, m);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("half-frequency drive matches the general closed form") {
  SchwarzschildSpacetime flat(0.0);

  // Odd half-period count: the parametric term drives the pair.
  OscillatingScenario odd = flat_drive(1e-3, 1.5 * kPi, 9);
  const Complex general =
      oscillating_beta_closed_form(odd, flat, 1, 2, /*resonant_branch=*/true);
  const Complex special = subharmonic_beta(odd, flat, 1, 2);
  CHECK(std::abs(general - special) < 1e-8 * std::abs(general));
  // Hand value: |beta| = eps * sqrt(2) * 4/9.
  CHECK(std::abs(special) ==
        doctest::Approx(1e-3 * std::sqrt(2.0) * 4.0 / 9.0).epsilon(1e-12));

  // Even half-period count in curved space: only the curvature term remains.
  SchwarzschildSpacetime curved(1.0);
  OscillatingScenario sub;
  sub.r0 = 3.0;
  sub.L0 = 1.0;
  sub.amplitude = 0.2;
  sub.nu = kPi;  // (w01 + w02) / 2 at f0 = 2/3
  sub.p = 300;
  const Complex cg = oscillating_beta_closed_form(sub, curved, 1, 2, true);
  const Complex cs = subharmonic_beta(sub, curved, 1, 2);
  CHECK(std::abs(cg - cs) < 1e-8 * std::abs(cg));
  CHECK(std::abs(cs) > 0.1);  // strong effect at this drive

  // In flat space the even-p drive creates nothing.
  OscillatingScenario flat_even = flat_drive(1e-3, 1.5 * kPi, 8);
  CHECK(std::abs(subharmonic_beta(flat_even, flat, 1, 2)) == 0.0);

  // The helper insists on the half-frequency drive.
  OscillatingScenario wrong = flat_drive(1e-3, 1.6 * kPi, 9);
  CHECK_THROWS_AS((void)subharmonic_beta(wrong, flat, 1, 2), validation_error);
}

TEST_CASE("frequency scan labels the special drives and holds T fixed") {
  SchwarzschildSpacetime flat(0.0);
  OscillatingScenario scn = flat_drive(1e-3, 3.0 * kPi, 4);
  const std::vector<Real> grid = {2.6, 1.5 * kPi, 3.0 * kPi};
  const auto rows = resonance_scan(scn, flat, grid, 1, 2);

  REQUIRE(rows.size() == 3);
  CHECK(rows[0].branch == "off-resonance");
  CHECK(rows[1].branch == "half-frequency");
  CHECK(rows[2].branch == "pair-resonance");
  for (const auto& row : rows) {
    CHECK(row.m == 1);
    CHECK(row.n == 2);
  }

  // Every row equals a direct call at the scenario's fixed duration.
  const Real T = scn.duration();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    OscillatingScenario at = scn;
    at.nu = grid[i];
    const Complex direct = oscillating_beta_closed_form(at, flat, 1, 2, true, T);
    CHECK(std::abs(rows[i].beta - direct) <= 1e-15);
  }
}

TEST_CASE("redshift factors carry through the curved closed form") {
  // Cavity deep enough in the gravitational well that the wall-to-wall
  // redshift matters.  The first-order numerical evaluation works on the
  // exact straightened trajectory; the closed form keeps the curvature
  // correction only to leading order in the drive and drops the local
  // redshift of the wall rate, so a relative gap of order (1/fL - 1) ~ 1.7%
  // is expected here.  The check bounds it at 5%.
  SchwarzschildSpacetime curved(0.02);
  OscillatingScenario scn;
  scn.r0 = 1.0;
  scn.L0 = 0.2;
  scn.amplitude = 0.004;  // eps = 0.02
  scn.p = 40;             // even: curvature term only
  const Real f0 = curved.lapse(scn.r0);
  scn.nu = 0.5 * 3.0 * f0 * kPi / scn.L0;  // half-frequency for (1,2)

  Trajectory traj = scenario_trajectory(scn, curved);
  CavityConfig cavity = scenario_cavity(scn, curved, 4);
  PerturbativeResult dyson = dyson_transform(traj, cavity);

  const Complex closed = oscillating_beta_closed_form(scn, curved, 1, 2, true);
  const Real rel =
      std::abs(dyson.transform.beta(0, 1) - closed) / std::abs(closed);
  CHECK(rel < 0.05);
  // Pin the convention: the leading-order bookkeeping genuinely differs from
  // the exact-trajectory evaluation at this depth, so the gap must not be
  // numerically empty either.
  CHECK(rel > 1e-3);
}

TEST_CASE("scenario helpers agree with each other") {
  SchwarzschildSpacetime curved(1e-3);
  OscillatingScenario scn;
  scn.r0 = 1.0;
  scn.L0 = 1e-2;
  scn.amplitude = 1e-5;
  scn.nu = 100.0;
  scn.p = 2;

  const Real f0 = curved.lapse(scn.r0);
  CHECK(scenario_mode_frequency(scn, curved, 1) ==
        doctest::Approx(f0 * kPi / scn.L0).epsilon(1e-15));
  CHECK(scenario_mode_frequency(scn, curved, 3) ==
        doctest::Approx(3.0 * f0 * kPi / scn.L0).epsilon(1e-15));

  // The straightened cavity reproduces the same ladder.
  CavityConfig cavity = scenario_cavity(scn, curved, 4);
  CHECK(mode_frequency(cavity, 2) ==
        doctest::Approx(scenario_mode_frequency(scn, curved, 2)).epsilon(1e-13));
  CHECK(cavity.x1 == doctest::Approx(curved.tortoise(scn.r0)).epsilon(1e-15));

  // The trajectory starts exactly on the cavity and keeps its base length.
  Trajectory traj = scenario_trajectory(scn, curved);
  CHECK(traj.frame() == TrajectoryFrame::conformal);
  CHECK(std::abs(traj.position(1, 0.0) - cavity.x1) < 1e-12 * cavity.length());
  CHECK(std::abs(traj.length(0.0) - cavity.length()) < 1e-12 * cavity.length());
  CHECK(traj.duration() == doctest::Approx(scn.duration()).epsilon(1e-15));
}

TEST_CASE("perturbative input contracts") {
  CavityConfig c = unit_cavity(4);

  // Radial-frame input must be converted first.
  Trajectory radial =
      Trajectory::static_boundaries(2.0, 3.0, 1.0, TrajectoryFrame::radial);
  CHECK_THROWS_AS((void)dyson_transform(radial, c), validation_error);

  // The trajectory must start on the cavity the mode basis is built from.
  Trajectory shifted = Trajectory::static_boundaries(0.3, 1.3, 1.0);
  CHECK_THROWS_AS((void)dyson_transform(shifted, c), validation_error);

  // Large drives are flagged, not rejected.
  Trajectory big = Trajectory::oscillating_wall(0.0, 1.0, 0.15, 3.0, 2.0);
  PerturbativeResult r = dyson_transform(big, c);
  CHECK(r.epsilon > 0.1);
  CHECK(!r.warnings.empty());

  // Scenario validation.
  OscillatingScenario bad = flat_drive(1e-3, 3.0, 1);
  bad.r0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), validation_error);
  OscillatingScenario wide = flat_drive(1.5, 3.0, 1);  // |A| >= L0
  CHECK_THROWS_AS(wide.validate(), validation_error);
  OscillatingScenario none = flat_drive(1e-3, 3.0, 0);  // p < 1
  CHECK_THROWS_AS(none.validate(), validation_error);
}
