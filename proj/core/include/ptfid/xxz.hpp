#pragma once

#include "ptfid/biortho.hpp"
#include "ptfid/common.hpp"
#include "ptfid/fidelity.hpp"
#include "ptfid/fit.hpp"
#include "ptfid/lanczos.hpp"
#include "ptfid/sparse.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ptfid::xxz {

/// Periodic chain sum_j (sx sx + sy sy + Jz sz sz) + i gamma sum_j (sz_{2j-1} - sz_{2j})
/// in Pauli matrices. Bit b of a configuration is site b + 1.
struct XxzParams {
  double Jz = 1.0;
  double gamma = 0.0;
  int L = 12;
};

inline constexpr std::uint64_t kDenseCap = 184756;     // C(20, 10)
inline constexpr std::uint64_t kLanczosCap = 40116600;  // C(28, 14)

void validate(const XxzParams& p);

/// C(L, L/2) without building anything.
std::uint64_t m0_dimension(int L);

/// Zero-magnetization configurations in increasing numeric order.
class M0Basis {
 public:
  M0Basis() = default;
  M0Basis(int L, std::uint64_t cap);

  [[nodiscard]] int L() const { return L_; }
  [[nodiscard]] Index size() const { return static_cast<Index>(states_.size()); }
  [[nodiscard]] std::uint32_t state(Index i) const { return states_[static_cast<std::size_t>(i)]; }
  /// Position of a zero-magnetization configuration (combinatorial rank).
  [[nodiscard]] Index index(std::uint32_t s) const;

 private:
  int L_ = 0;
  std::vector<std::uint32_t> states_;
  std::vector<std::vector<std::uint64_t>> binom_;
};

M0Basis build_m0_basis(int L, std::uint64_t cap = kLanczosCap);

SparseComplexSymmetricMatrix build_hamiltonian(const XxzParams& p, const M0Basis& basis);
SparseComplexSymmetricMatrix build_hamiltonian(const XxzParams& p,
                                               std::uint64_t cap = kLanczosCap);

/// Row-sum bound on ||H||.
double norm_estimate(const XxzParams& p);
/// |Im E| below this counts as real.
double tol_real(const XxzParams& p);

struct GroundState {
  cplx energy;
  CVector right;  // unit norm
  CVector left;   // covector, left^T right = 1
  PtClass pt = PtClass::unbroken;
  int iterations = 0;
  double residual = 0.0;
};

GroundState ground_state(const XxzParams& p, const LanczosOptions& opt = {},
                         const std::optional<CVector>& start = std::nullopt);
/// Dense biorthogonal reference; selects the ground state by the same rule.
GroundState ground_state_dense(const XxzParams& p);

enum class Direction { gamma, Jz };
[[nodiscard]] std::string_view to_string(Direction d) noexcept;

XxzParams shifted(const XxzParams& p, Direction d, double value);

struct ScanOptions {
  LanczosOptions lanczos;
  bool track = false;  // seed each point with the previous point's vector
};

/// Metricized fidelity between ground states at lambda and lambda + epsilon.
std::vector<FidelityRecord> fidelity_scan(const XxzParams& p, Direction d,
                                          const std::vector<double>& grid, double epsilon,
                                          const ScanOptions& opt = {});

CVector full_sector_spectrum(const XxzParams& p);

/// PT class of the ground state, for bisection along gamma or Jz.
PtClass ground_class(const XxzParams& p, const LanczosOptions& opt = {});

fit::Bracket locate_ep(const XxzParams& p, Direction d, double lo, double hi, double width,
                       const LanczosOptions& opt = {});

struct SizeSeries {
  int L = 0;
  std::vector<double> x;
  std::vector<double> y;  // e.g. Re chi / L
};

struct PeakExtrapolation {
  std::vector<int> sizes;
  std::vector<fit::Peak> peaks;
  fit::PolyFit position_fit;
  std::vector<double> height_slopes;  // log-log slopes of peak height vs L
};

PeakExtrapolation peak_and_extrapolate(const std::vector<SizeSeries>& series, int fit_degree = 2);

}  // namespace ptfid::xxz
