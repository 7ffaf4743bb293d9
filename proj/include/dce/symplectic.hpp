#pragma once

#include <utility>

#include "dce/types.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Linear canonical (two-block) transformations between mode bases:
//
//   S = [ alpha  beta  ]
//       [ beta*  alpha* ]
//
// acting on (annihilation, creation) column stacks.  A physical evolution
// satisfies, for each truncation,
//   alpha alpha^dag - beta beta^dag = I     (unitarity-like relation)
//   alpha beta^T    - beta alpha^T  = 0     (symmetry relation)
// and beta encodes pair creation: starting from vacuum, the mean particle
// number in mode m is sum_n |beta[n, m]|^2 (note: sum over the FIRST index,
// i.e. column m of beta).
// ---------------------------------------------------------------------------

struct BogoliubovTransform {
  ComplexMatrix alpha;
  ComplexMatrix beta;

  int size() const { return static_cast<int>(alpha.rows()); }
  void validate_shapes() const;  // square, equal sizes
};

// Identity transform of size n.
BogoliubovTransform identity_transform(int n);

// Free phase evolution over time t: alpha = diag(e^{+i omega_m t}), beta = 0.
BogoliubovTransform phase_evolution(const RealVector& frequencies, Real t);

// Composition second∘first (apply `first`, then `second`):
//   alpha = alpha2 alpha1 + beta2 beta1^*
//   beta  = alpha2 beta1  + beta2 alpha1^*
BogoliubovTransform compose(const BogoliubovTransform& second,
                            const BogoliubovTransform& first);

// Inverse obtained from the canonical structure (no matrix solve):
//   alpha_inv = alpha^dag,  beta_inv = -beta^T.
BogoliubovTransform structure_inverse(const BogoliubovTransform& t);

// Max-abs residuals of the two defining relations, restricted to the leading
// `interior` x `interior` block — the modes far from the truncation edge,
// which are the ones a finite basis can get right.  interior <= 0 or
// > size uses the full matrix.
std::pair<Real, Real> identity_residuals(const BogoliubovTransform& t,
                                         int interior = 0);

// Mean particle number per mode from vacuum: n_m = sum_k |beta[k, m]|^2.
RealVector vacuum_particle_numbers(const BogoliubovTransform& t);

}  // namespace dce
