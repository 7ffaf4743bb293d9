#pragma once

#include <functional>
#include <vector>

#include "dce/types.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Numerical integration over finite intervals.
//
// Two entry points:
//   * integrate_gl   — fixed composite Gauss–Legendre rule; cheap, no error
//                      estimate; used where the panel count is chosen from
//                      known smoothness (e.g. mode-overlap integrals).
//   * integrate_gk   — globally adaptive Gauss–Kronrod 7/15 with an error
//                      estimate; used for time integrals of oscillatory
//                      boundary velocities, where an `oscillation_hint`
//                      (highest angular frequency present) seeds the initial
//                      subdivision with roughly two periods per panel.
//
// Both are deterministic: subdivision order, tie-breaking, and the final
// left-to-right summation are fixed functions of the input.
// ---------------------------------------------------------------------------

struct QuadratureResult {
  Complex value{0.0, 0.0};
  Real error_estimate = 0.0;  // absolute, from Kronrod/Gauss differences
  int panels = 0;             // number of leaf intervals summed
};

struct QuadratureSettings {
  Real rel_tol = 1e-10;
  Real abs_tol = 1e-13;
  int max_panels = 20000;  // adaptive subdivision cap; exceeding it is a numerical_error
};

// Nodes/weights of the n-point Gauss–Legendre rule on [-1, 1], computed by
// Newton iteration on the Legendre polynomial and cached per order.
const std::vector<Real>& gauss_legendre_nodes(int n);
const std::vector<Real>& gauss_legendre_weights(int n);

// Composite fixed-order Gauss–Legendre integration of f over [a, b].
Complex integrate_gl(const std::function<Complex(Real)>& f, Real a, Real b,
                     int panels, int nodes_per_panel = 12);

// Adaptive Gauss–Kronrod 7/15 integration of f over [a, b].
// `oscillation_hint` is the largest angular frequency expected in f (0 if
// unknown); it only affects the initial panel count, never correctness.
QuadratureResult integrate_gk(const std::function<Complex(Real)>& f, Real a,
                              Real b, const QuadratureSettings& settings,
                              Real oscillation_hint = 0.0);

}  // namespace dce
