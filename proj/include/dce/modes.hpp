#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dce/types.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Instantaneous standing-wave basis of a 1-D cavity [x1, x2] with perfectly
// reflecting ends, and the boundary-coupling matrices that drive mode mixing
// and pair creation when the ends move.
//
// Basis convention (mode indices are 1-based in formulas, 0-based in
// storage): with L = x2 - x1 and omega_m = m*pi/L,
//   phi_m(x, t) = (1/sqrt(m*pi)) * exp(-i omega_m t) * sin(omega_m (x - x1)),
// orthonormal under the sesquilinear product
//   (f, g) = -i Integral_x1^x2 [ f * d_t g^* - g^* * d_t f ] dx.
// ---------------------------------------------------------------------------

struct CavityConfig {
  Real x1 = 0.0;   // left boundary
  Real x2 = 1.0;   // right boundary
  int n_modes = 0; // truncation size N

  Real length() const { return x2 - x1; }
  void validate() const;  // throws validation_error on x2 <= x1 or n_modes < 1
};

// omega_m = m*pi/L for 1-based mode index m.
Real mode_frequency(const CavityConfig& config, int m);

// Diagonal frequency matrix omega = diag(omega_1..omega_N).
RealVector mode_frequencies(const CavityConfig& config);

// A mode (or any field configuration) sampled as a (value, time-derivative)
// pair on a fixed spatial domain; the product above only needs these two
// slices at one instant.
struct FieldSlice {
  std::function<Complex(Real)> value;
  std::function<Complex(Real)> tderiv;
  Real x_lo = 0.0;
  Real x_hi = 0.0;
};

// Standing-wave mode functions of the cavity at t = 0.
FieldSlice mode_slice(const CavityConfig& config, int m);

// Sesquilinear product of two slices over their (common) domain, evaluated
// with composite Gauss-Legendre quadrature.  Mismatched domains are a
// validation_error.  `panels` should resolve the fastest oscillation; the
// helper below picks a safe count from the cavity truncation.
Complex inner_product(const FieldSlice& f, const FieldSlice& g, int panels);
int inner_product_panels(const CavityConfig& config);

// Boundary-coupling matrices (all N x N, real, zero diagonal where noted):
//   a1, a2 — frequency-mixing couplings attached to the velocities of the
//            left (a1) and right (a2) boundary; antisymmetric combination,
//            zero diagonal.
//   b1, b2 — pair-creation couplings for the same boundaries; b1+b2 is
//            symmetric.
//   g      — dimensionless overlap of a mode with the gradient of another,
//            used by the scattering picture; zero diagonal, vanishes for
//            m+n even.
// Closed forms (1-based indices, L = cavity length, s = (-1)^(m+n)):
//   a1[m,n] =  s * sqrt(omega_m omega_n) / (L (omega_m - omega_n)),  m != n
//   a2[m,n] = -    sqrt(omega_m omega_n) / (L (omega_m - omega_n)),  m != n
//   b1[m,n] = -s * sqrt(omega_m omega_n) / (L (omega_m + omega_n))
//   b2[m,n] = +    sqrt(omega_m omega_n) / (L (omega_m + omega_n))
//   g[m,n]  = sqrt(m n) (1 - s) / ((m+n)(m-n) pi),                   m != n
// They satisfy, exactly in exact arithmetic,
//   g[m,n] = -(a1+a2)[m,n] / (omega_m + omega_n)
//          =  (b1+b2)[m,n] / (omega_m - omega_n)   (m != n).
struct CouplingMatrices {
  RealMatrix a1, a2, b1, b2, g;
};

CouplingMatrices coupling_matrices(const CavityConfig& config);

// Independent check of the closed forms: rebuild each matrix from numerical
// quadrature of boundary-derivative products of the mode functions
// (finite-difference in the boundary position, Gauss-Legendre in x), and
// report max-abs deviations.  The quadrature estimates carry an overall
// orientation fixed by the evolution convention used throughout (see
// implementation note); the comparison accounts for it.
struct CouplingResidualReport {
  Real a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0, g = 0.0;
  std::vector<std::string> failed;  // names of matrices over tolerance
  Real max_residual() const;
  bool ok() const { return failed.empty(); }
};

CouplingResidualReport verify_coupling_against_quadrature(
    const CavityConfig& config, Real tolerance);

}  // namespace dce
