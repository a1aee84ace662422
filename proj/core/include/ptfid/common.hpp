#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptfid {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

/// Base of every error the toolkit throws. `kind()` is the stable name used
/// in per-point error columns of sweep output.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual std::string_view kind() const noexcept { return "Error"; }
};

#define PTFID_DEFINE_ERROR(Name)                                                   \
  class Name : public Error {                                                      \
   public:                                                                         \
    using Error::Error;                                                            \
    [[nodiscard]] std::string_view kind() const noexcept override { return #Name; } \
  }

// biortho-core
PTFID_DEFINE_ERROR(DefectiveMatrix);
PTFID_DEFINE_ERROR(AmbiguousPairing);
PTFID_DEFINE_ERROR(UnpairableSpectrum);
PTFID_DEFINE_ERROR(NotBroken);
PTFID_DEFINE_ERROR(QuasiNullBreakdown);
PTFID_DEFINE_ERROR(NoConvergence);
PTFID_DEFINE_ERROR(DimTooLarge);
// fidelity
PTFID_DEFINE_ERROR(DimensionMismatch);
PTFID_DEFINE_ERROR(DegenerateDenominator);
PTFID_DEFINE_ERROR(PartnerMismatch);
PTFID_DEFINE_ERROR(NoTransition);
// ssh-model
PTFID_DEFINE_ERROR(AtExceptionalMomentum);
PTFID_DEFINE_ERROR(BrokenBranchZeroU);
PTFID_DEFINE_ERROR(GridCrossesEP);
// xxz-model
PTFID_DEFINE_ERROR(OddL);
PTFID_DEFINE_ERROR(BasisCapExceeded);
PTFID_DEFINE_ERROR(InsufficientSizes);
// scan-cli
PTFID_DEFINE_ERROR(ConfigError);

#undef PTFID_DEFINE_ERROR

/// PT class of a single eigenstate: real eigenvalue or member of a conjugate pair.
enum class PtClass { unbroken, broken };

[[nodiscard]] constexpr std::string_view to_string(PtClass c) noexcept {
  return c == PtClass::unbroken ? "unbroken" : "broken";
}

/// Unconjugated bilinear form a^T b.
[[nodiscard]] inline cplx bilinear(const CVector& a, const CVector& b) {
  return (a.array() * b.array()).sum();
}

/// Conventional inner product <a|b> = a^H b.
[[nodiscard]] inline cplx inner(const CVector& a, const CVector& b) { return a.dot(b); }

/// Rotates `v` so its largest-magnitude component is real and positive.
/// Returns the unit phase that was applied.
cplx fix_gauge(CVector& v);

[[nodiscard]] std::string_view version() noexcept;

}  // namespace ptfid
