#include "ptfid/dense.hpp"

#include <lapacke.h>

#include <algorithm>
#include <numeric>
#include <string>

namespace ptfid {

cplx fix_gauge(CVector& v) {
  if (v.size() == 0) return {1.0, 0.0};
  Index imax = 0;
  double best = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double m = std::norm(v[i]);
    if (m > best * (1.0 + 1e-12)) {
      best = m;
      imax = i;
    }
  }
  if (best == 0.0) return {1.0, 0.0};
  const cplx phase = std::conj(v[imax]) / std::abs(v[imax]);
  v *= phase;
  v[imax] = cplx(v[imax].real(), 0.0);
  return phase;
}

std::string_view version() noexcept { return PTFID_VERSION; }

namespace dense {
namespace {

void check_dim(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("dense eigensolver: matrix is not square");
  if (a.rows() > kMaxDenseDim) {
    throw DimTooLarge("dense eigensolver: dim " + std::to_string(a.rows()) + " exceeds " +
                      std::to_string(kMaxDenseDim));
  }
  if (!a.allFinite()) throw std::invalid_argument("dense eigensolver: non-finite entries");
}

lapack_complex_double* as_lapack(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

}  // namespace

CVector eigenvalues(const CMatrix& a) {
  check_dim(a);
  const auto n = static_cast<lapack_int>(a.rows());
  CVector w(n);
  if (n == 0) return w;
  CMatrix work = a;
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, as_lapack(work.data()), n,
                                        as_lapack(w.data()), nullptr, n, nullptr, n);
  if (info != 0) throw NoConvergence("zgeev failed with info=" + std::to_string(info));
  return w;
}

RightEigen eigen_right(const CMatrix& a) {
  check_dim(a);
  const auto n = static_cast<lapack_int>(a.rows());
  RightEigen out{CVector(n), CMatrix(n, n)};
  if (n == 0) return out;
  CMatrix work = a;
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, as_lapack(work.data()), n,
                    as_lapack(out.values.data()), nullptr, n, as_lapack(out.vectors.data()), n);
  if (info != 0) throw NoConvergence("zgeev failed with info=" + std::to_string(info));
  return out;
}

static_assert(sizeof(lapack_int) == sizeof(int));

ShiftedLU::ShiftedLU(const CMatrix& a, cplx shift) : lu_(a) {
  check_dim(a);
  lu_.diagonal().array() -= shift;
  const auto n = static_cast<lapack_int>(a.rows());
  ipiv_.resize(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, as_lapack(lu_.data()), n, ipiv_.data());
  if (info < 0) throw std::invalid_argument("zgetrf: bad argument " + std::to_string(-info));
  if (info > 0) throw DefectiveMatrix("shift coincides with an eigenvalue to machine precision");
}

namespace {

CMatrix lu_solve(const CMatrix& lu, const std::vector<int>& ipiv, const CMatrix& b, char trans) {
  if (b.rows() != lu.rows()) throw DimensionMismatch("ShiftedLU: right-hand side has wrong size");
  CMatrix x = b;
  const auto n = static_cast<lapack_int>(lu.rows());
  const lapack_int info =
      LAPACKE_zgetrs(LAPACK_COL_MAJOR, trans, n, static_cast<lapack_int>(x.cols()),
                     as_lapack(const_cast<cplx*>(lu.data())), n, ipiv.data(), as_lapack(x.data()), n);
  if (info != 0) throw std::invalid_argument("zgetrs failed with info=" + std::to_string(info));
  return x;
}

}  // namespace

CMatrix ShiftedLU::solve(const CMatrix& b) const { return lu_solve(lu_, ipiv_, b, 'N'); }
CMatrix ShiftedLU::solve_transposed(const CMatrix& b) const { return lu_solve(lu_, ipiv_, b, 'T'); }

std::vector<Index> order_by_real_then_imag(const CVector& values) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index i, Index j) {
    if (values[i].real() != values[j].real()) return values[i].real() < values[j].real();
    return values[i].imag() < values[j].imag();
  });
  return idx;
}

}  // namespace dense
}  // namespace ptfid
