#pragma once

#include "dce/types.hpp"

namespace dce {

// Matrix exponential of a complex square matrix via Padé(13,13) with
// scaling-and-squaring.  A strictly diagonal input takes an elementwise-exp
// fast path, which keeps block-diagonal generators exactly block-diagonal
// (no fill-in from roundoff) — that is what makes motionless evolutions
// reproduce pure phases to machine precision.
ComplexMatrix matrix_exponential(const ComplexMatrix& a);

}  // namespace dce
