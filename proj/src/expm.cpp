#include "dce/expm.hpp"

#include <cmath>

#include "dce/errors.hpp"

namespace dce {

namespace {

// Padé(13,13) coefficients and the associated scaling threshold for the
// 1-norm (the standard choice that keeps the approximant at machine
// accuracy without needless squarings).
constexpr Real kTheta13 = 5.371920351148152;
constexpr Real kB[14] = {64764752532480000.0, 32382376266240000.0,
                         7771770303897600.0,  1187353796428800.0,
                         129060195264000.0,   10559470521600.0,
                         670442572800.0,      33522128640.0,
                         1323241920.0,        40840800.0,
                         960960.0,            16380.0,
                         182.0,               1.0};

bool strictly_diagonal(const ComplexMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j && a(i, j) != Complex{0.0, 0.0}) return false;
    }
  }
  return true;
}

Real one_norm(const ComplexMatrix& a) {
  Real best = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Real col = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) col += std::abs(a(i, j));
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw validation_error("matrix_exponential: matrix must be square");
  }
  const Eigen::Index n = a.rows();
  if (n == 0) return a;

  if (strictly_diagonal(a)) {
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = std::exp(a(i, i));
    return out;
  }

  const Real norm = one_norm(a);
  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  const Real scale = std::ldexp(1.0, -squarings);
  ComplexMatrix as = a * scale;

  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = as * as;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a2 * a4;

  ComplexMatrix u = as * (a6 * (kB[13] * a6 + kB[11] * a4 + kB[9] * a2) +
                          kB[7] * a6 + kB[5] * a4 + kB[3] * a2 + kB[1] * eye);
  ComplexMatrix v = a6 * (kB[12] * a6 + kB[10] * a4 + kB[8] * a2) +
                    kB[6] * a6 + kB[4] * a4 + kB[2] * a2 + kB[0] * eye;

  Eigen::PartialPivLU<ComplexMatrix> lu(v - u);
  ComplexMatrix r = lu.solve(v + u);

  for (int s = 0; s < squarings; ++s) r = r * r;
  if (!r.allFinite()) {
    throw numerical_error("matrix_exponential produced non-finite entries");
  }
  return r;
}

}  // namespace dce
