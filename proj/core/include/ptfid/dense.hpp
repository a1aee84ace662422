#pragma once

#include "ptfid/common.hpp"

#include <vector>

namespace ptfid::dense {

/// Largest dimension accepted by dense eigen-decompositions.
inline constexpr Index kMaxDenseDim = 20000;

struct RightEigen {
  CVector values;
  CMatrix vectors;  // columns, unit 2-norm
};

/// Eigenvalues of a general complex matrix (LAPACK zgeev, no vectors).
CVector eigenvalues(const CMatrix& a);

/// Eigenvalues and right eigenvectors of a general complex matrix.
RightEigen eigen_right(const CMatrix& a);

/// LU factorization of A - shift (LAPACK zgetrf) for repeated solves with
/// A - shift and its plain transpose.
class ShiftedLU {
 public:
  ShiftedLU(const CMatrix& a, cplx shift);
  [[nodiscard]] CMatrix solve(const CMatrix& b) const;
  [[nodiscard]] CMatrix solve_transposed(const CMatrix& b) const;

 private:
  CMatrix lu_;
  std::vector<int> ipiv_;
};

/// Sorts indices by (Re, Im) ascending.
std::vector<Index> order_by_real_then_imag(const CVector& values);

}  // namespace ptfid::dense
