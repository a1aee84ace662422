#pragma once

#include "ptfid/common.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace ptfid {

/// Complex symmetric (M = M^T, unconjugated) sparse matrix.
class SparseComplexSymmetricMatrix {
 public:
  struct Entry {
    Index row;
    Index col;
    cplx value;
  };

  SparseComplexSymmetricMatrix() = default;

  /// Builds from entries with row <= col; each off-diagonal entry is mirrored.
  /// Duplicate positions are summed.
  static SparseComplexSymmetricMatrix from_upper(Index dim, const std::vector<Entry>& upper);

  [[nodiscard]] Index dim() const { return mat_.rows(); }
  [[nodiscard]] Index nonzeros() const { return mat_.nonZeros(); }
  void apply(const CVector& x, CVector& y) const { y.noalias() = mat_ * x; }
  [[nodiscard]] CMatrix to_dense() const { return CMatrix(mat_); }
  [[nodiscard]] cplx trace() const { return mat_.diagonal().sum(); }
  [[nodiscard]] bool is_hermitian() const;
  [[nodiscard]] const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& matrix() const { return mat_; }

 private:
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> mat_;
};

}  // namespace ptfid
