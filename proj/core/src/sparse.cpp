#include "ptfid/sparse.hpp"

namespace ptfid {

SparseComplexSymmetricMatrix SparseComplexSymmetricMatrix::from_upper(
    Index dim, const std::vector<Entry>& upper) {
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(2 * upper.size());
  for (const auto& e : upper) {
    if (e.row > e.col || e.row < 0 || e.col >= dim)
      throw std::invalid_argument("from_upper: entry outside the upper triangle");
    trip.emplace_back(e.row, e.col, e.value);
    if (e.row != e.col) trip.emplace_back(e.col, e.row, e.value);
  }
  SparseComplexSymmetricMatrix m;
  m.mat_.resize(dim, dim);
  m.mat_.setFromTriplets(trip.begin(), trip.end());
  m.mat_.makeCompressed();
  return m;
}

bool SparseComplexSymmetricMatrix::is_hermitian() const {
  // Symmetric by construction, so Hermitian iff every stored value is real.
  for (Index k = 0; k < mat_.outerSize(); ++k) {
    for (decltype(mat_)::InnerIterator it(mat_, k); it; ++it) {
      if (it.value().imag() != 0.0) return false;
    }
  }
  return true;
}

}  // namespace ptfid
