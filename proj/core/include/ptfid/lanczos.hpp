#pragma once

#include "ptfid/common.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ptfid {

/// y = A x for a complex symmetric A.
using LinearOperator = std::function<void(const CVector& x, CVector& y)>;

struct LanczosOptions {
  int max_iter = 5000;          // total matvecs over all restarts
  int max_krylov = 60;          // first-cycle basis size; doubles on restart
  double tol_resid = 1e-10;     // ||Hx - Ex|| with ||x|| = 1
  double breakdown_guard = 1e-14;
  int restart_max = 5;          // random restarts after quasi-null breakdown
  std::uint64_t seed = 12345;
  double memory_budget = 2e9;   // bytes; caps the Krylov basis for large dims
  double tie_tol = 1e-8;        // relative Re band treated as a tie
};

struct LanczosResult {
  cplx eigenvalue;
  CVector right;  // unit 2-norm, gauge fixed; the left covector is right^T
  double residual = 0.0;
  int iterations = 0;
  int restarts = 0;
};

/// Smallest-Re eigenpair of a complex symmetric operator. Ties in Re go to
/// the member with larger Im, so the +Im member of a PT pair is returned.
LanczosResult complex_symmetric_lanczos(const LinearOperator& apply, Index dim,
                                        const LanczosOptions& opt = {},
                                        const std::optional<CVector>& start = std::nullopt);

/// One Lanczos run restricted to the bilinear complement of `locked`.
LanczosResult lanczos_run(const LinearOperator& apply, Index dim, const LanczosOptions& opt,
                          const std::optional<CVector>& start,
                          const std::vector<CVector>& locked);

}  // namespace ptfid
