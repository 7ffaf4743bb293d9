#pragma once

#include "dce/modes.hpp"
#include "dce/quadrature.hpp"
#include "dce/symplectic.hpp"
#include "dce/trajectory.hpp"
#include "dce/types.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Rigid-cavity evolution in the co-moving picture.  When the two ends move
// together (constant length L), the problem maps to a fixed cavity with an
// offset u(t) = -x1(t) entering only through its rate.  Expanding the
// evolved mode m over the fixed basis n gives coefficients
//   Q[m,n](t) = e^{-i w_m t} delta_mn + Q1[m,n](t),
// and to first order in the offset, with Phi∓ = Integral_0^T
// e^{-i(w_m ∓ w_n)s} du/ds ds, the end values are
//   Q1[m,n](T)  = g[m,n] ( (w_m+w_n) e^{-i w_n T} Phi- - (w_m-w_n) e^{+i w_n T} Phi+ )
//   dQ1[m,n](T) = -i w_n g[m,n] ( (w_m+w_n) e^{-i w_n T} Phi- + (w_m-w_n) e^{+i w_n T} Phi+ )
// (the rate form of dQ1 assumes the motion has stopped at T).  Projecting
// (Q, dQ) onto e^{∓ i w_n t} waves yields the transform.
// ---------------------------------------------------------------------------

struct ScatteringState {
  ComplexMatrix q;      // expansion coefficients at the final time
  ComplexMatrix q_dot;  // their time derivative at the final time
  Real time = 0.0;
};

// Evolve through a rigid conformal-frame trajectory.  Non-rigid input (the
// sampled length varies) or nonzero final velocity is a validation_error.
ScatteringState evolve_scattering(const Trajectory& trajectory,
                                  const CavityConfig& config,
                                  const QuadratureSettings& quadrature = {});

// Match (q, q_dot) onto positive/negative frequency waves of the fixed
// basis and undo the free phases, producing the same transform convention
// as the other evaluation paths.
BogoliubovTransform extract_coefficients(const ScatteringState& state,
                                         const RealVector& frequencies);

// Convenience: evolve + extract.
BogoliubovTransform scattering_transform(const Trajectory& trajectory,
                                         const CavityConfig& config,
                                         const QuadratureSettings& quadrature = {});

// Max-abs residual of the two exact relations tying the gradient overlaps g
// to the boundary couplings:
//   g[m,n] = -(a1+a2)[m,n] / (w_m + w_n) = (b1+b2)[m,n] / (w_m - w_n),  m != n.
Real verify_g_relation(const CavityConfig& config);

}  // namespace dce
