#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dce/errors.hpp"
#include "dce/perturbative.hpp"
#include "dce/scattering.hpp"
#include "dce/symplectic.hpp"
#include "dce/trajectory.hpp"
#include "oracles.hpp"

using namespace dce;

namespace {

CavityConfig make_cavity(Real x1, Real length, int n) {
  CavityConfig c;
  c.x1 = x1;
  c.x2 = x1 + length;
  c.n_modes = n;
  return c;
}

}  // namespace

TEST_CASE("still cavity scatters into pure phases") {
  CavityConfig c = make_cavity(0.0, 1.0, 8);
  const Real T = 0.7;
  Trajectory traj = Trajectory::static_boundaries(c.x1, c.x2, T);
  BogoliubovTransform s = scattering_transform(traj, c);

  CHECK(s.beta.cwiseAbs().maxCoeff() < 1e-15);
  BogoliubovTransform free = phase_evolution(mode_frequencies(c), T);
  CHECK((s.alpha - free.alpha).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("rigid translation matches a brute-force mode-by-mode solve") {
  CavityConfig c = make_cavity(0.0, 1.0, 6);
  const Real T = 2.0;
  Trajectory traj = Trajectory::rigid_translation(c.x1, c.length(), 0.02, T);

  BogoliubovTransform lib = scattering_transform(traj, c);
  oracles::ForcedModeSolution sol =
      oracles::brute_force_rigid_modes(traj, c, 20000);
  BogoliubovTransform ref = oracles::extract_like_library(sol, c, T);

  CHECK((lib.alpha - ref.alpha).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((lib.beta - ref.beta).cwiseAbs().maxCoeff() < 1e-8);

  // The transform is built to first order in the displacement, so its
  // canonical defect is quadratic: small here, fourfold smaller when the
  // walls move half as far.
  auto [r1, r2] = identity_residuals(lib, 3);
  CHECK(r1 < 1e-2);
  CHECK(r2 < 1e-2);
  Trajectory softer = Trajectory::rigid_translation(c.x1, c.length(), 0.01, T);
  auto [s1, s2] = identity_residuals(scattering_transform(softer, c), 3);
  CHECK(r1 / s1 > 3.5);
  CHECK(r1 / s1 < 4.5);
}

TEST_CASE("rigid translation agrees with the first-order evaluation") {
  CavityConfig c = make_cavity(0.0, 1.0, 8);
  const Real T = 2.0;
  Trajectory traj = Trajectory::rigid_translation(c.x1, c.length(), 0.02, T);

  BogoliubovTransform scat = scattering_transform(traj, c);
  BogoliubovTransform dyson = dyson_transform(traj, c).transform;
  CHECK((scat.alpha - dyson.alpha).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((scat.beta - dyson.beta).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("shifted, stretched cavity agrees with the first-order evaluation") {
  // Non-unit length and a left wall below the origin exercise every 1/L
  // scaling in the couplings.
  CavityConfig c = make_cavity(-0.5, 2.0, 6);
  const Real T = 1.5;
  Trajectory traj = Trajectory::rigid_translation(c.x1, c.length(), 0.01, T);

  BogoliubovTransform scat = scattering_transform(traj, c);
  BogoliubovTransform dyson = dyson_transform(traj, c).transform;
  CHECK((scat.alpha - dyson.alpha).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((scat.beta - dyson.beta).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("parity-forbidden pairs stay exactly empty") {
  // The gradient overlap vanishes when m + n is even, so those pairs pick
  // up no correction at all: off-diagonal entries are exact zeros and the
  // diagonal pair-creation entries cancel identically in the extraction.
  CavityConfig c = make_cavity(0.0, 1.0, 6);
  Trajectory traj = Trajectory::rigid_translation(c.x1, c.length(), 0.03, 2.0);
  BogoliubovTransform s = scattering_transform(traj, c);

  for (int m = 1; m <= 6; ++m) {
    for (int n = 1; n <= 6; ++n) {
      if ((m + n) % 2 != 0) continue;
      if (m == n) {
        CHECK(std::abs(s.beta(m - 1, n - 1)) < 1e-15);
      } else {
        CHECK(std::abs(s.beta(m - 1, n - 1)) == 0.0);
        CHECK(std::abs(s.alpha(m - 1, n - 1)) == 0.0);
      }
    }
  }
}

TEST_CASE("gradient overlaps tie exactly to the boundary couplings") {
  CHECK(verify_g_relation(make_cavity(0.0, 1.0, 10)) < 1e-13);
  CHECK(verify_g_relation(make_cavity(1.5, 0.25, 12)) < 1e-12);
}

TEST_CASE("scattering input contracts") {
  CavityConfig c = make_cavity(0.0, 1.0, 4);

  // The co-moving picture only exists for rigid motion.
  Trajectory osc = Trajectory::oscillating_wall(0.0, 1.0, 0.01, 3.0, 2.0);
  CHECK_THROWS_AS((void)scattering_transform(osc, c), validation_error);

  // Radial-frame programs must be converted first.
  Trajectory radial =
      Trajectory::static_boundaries(2.0, 3.0, 1.0, TrajectoryFrame::radial);
  CHECK_THROWS_AS((void)scattering_transform(radial, c), validation_error);

  // The trajectory must start on the configured cavity.
  Trajectory shifted = Trajectory::rigid_translation(0.5, 1.0, 0.01, 1.0);
  CHECK_THROWS_AS((void)scattering_transform(shifted, c), validation_error);
}
