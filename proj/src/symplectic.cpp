#include "dce/symplectic.hpp"

#include <cmath>
#include <string>

#include "dce/errors.hpp"

namespace dce {

void BogoliubovTransform::validate_shapes() const {
  if (alpha.rows() != alpha.cols() || beta.rows() != beta.cols() ||
      alpha.rows() != beta.rows()) {
    throw validation_error("transform blocks must be square and equally sized (got " +
                           std::to_string(alpha.rows()) + "x" +
                           std::to_string(alpha.cols()) + " and " +
                           std::to_string(beta.rows()) + "x" +
                           std::to_string(beta.cols()) + ")");
  }
}

BogoliubovTransform identity_transform(int n) {
  if (n < 1) throw validation_error("transform size must be >= 1");
  BogoliubovTransform t;
  t.alpha = ComplexMatrix::Identity(n, n);
  t.beta = ComplexMatrix::Zero(n, n);
  return t;
}

BogoliubovTransform phase_evolution(const RealVector& frequencies, Real t) {
  const int n = static_cast<int>(frequencies.size());
  if (n < 1) throw validation_error("phase_evolution needs at least one frequency");
  BogoliubovTransform out;
  out.alpha = ComplexMatrix::Zero(n, n);
  out.beta = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    out.alpha(i, i) = std::exp(Complex{0.0, frequencies(i) * t});
  }
  return out;
}

BogoliubovTransform compose(const BogoliubovTransform& second,
                            const BogoliubovTransform& first) {
  second.validate_shapes();
  first.validate_shapes();
  if (second.size() != first.size()) {
    throw validation_error("cannot compose transforms of different sizes");
  }
  BogoliubovTransform out;
  out.alpha = second.alpha * first.alpha + second.beta * first.beta.conjugate();
  out.beta = second.alpha * first.beta + second.beta * first.alpha.conjugate();
  return out;
}

BogoliubovTransform structure_inverse(const BogoliubovTransform& t) {
  t.validate_shapes();
  BogoliubovTransform out;
  out.alpha = t.alpha.adjoint();
  out.beta = -t.beta.transpose();
  return out;
}

std::pair<Real, Real> identity_residuals(const BogoliubovTransform& t,
                                         int interior) {
  t.validate_shapes();
  const int n = t.size();
  int k = interior;
  if (k <= 0 || k > n) k = n;
  const ComplexMatrix r1 = t.alpha * t.alpha.adjoint() -
                           t.beta * t.beta.adjoint() -
                           ComplexMatrix::Identity(n, n);
  const ComplexMatrix r2 =
      t.alpha * t.beta.transpose() - t.beta * t.alpha.transpose();
  const Real res1 = r1.topLeftCorner(k, k).cwiseAbs().maxCoeff();
  const Real res2 = r2.topLeftCorner(k, k).cwiseAbs().maxCoeff();
  return {res1, res2};
}

RealVector vacuum_particle_numbers(const BogoliubovTransform& t) {
  t.validate_shapes();
  const int n = t.size();
  RealVector numbers(n);
  for (int m = 0; m < n; ++m) {
    numbers(m) = t.beta.col(m).squaredNorm();
  }
  return numbers;
}

}  // namespace dce
