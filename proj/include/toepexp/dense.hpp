#pragma once

#include "toepexp/common.hpp"

namespace toepexp::dense {

// Dense O(n^3) helpers behind the verification oracles. None of these are used
// on the fast path of the exponential solver.

/// Inverse by partial-pivoting LU; real arithmetic when the input has no
/// imaginary part.
CMatrix inverse(const CMatrix& m);

/// Solution of m x = b by partial-pivoting LU.
CVector solve(const CMatrix& m, const CVector& b);

/// Maximum absolute column sum.
double one_norm(const CMatrix& m);

/// Largest singular value. Full SVD for n <= 256, otherwise Lanczos on M^H M
/// with full reorthogonalization, run until the Ritz value settles to 1e-13.
double two_norm(const CMatrix& m);

/// ||m||_1 * ||m^{-1}||_1.
double condition_1norm(const CMatrix& m);

}  // namespace toepexp::dense
