#include "ptfid/xxz.hpp"

#include "ptfid/dense.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

namespace ptfid::xxz {

void validate(const XxzParams& p) {
  if (p.L % 2 != 0) throw OddL("L = " + std::to_string(p.L) + " is odd");
  if (p.L < 4 || p.L > 32) throw std::invalid_argument("xxz: L must lie in [4, 32]");
  if (!std::isfinite(p.Jz) || !std::isfinite(p.gamma))
    throw std::invalid_argument("xxz: non-finite parameter");
}

std::uint64_t m0_dimension(int L) {
  if (L % 2 != 0) throw OddL("L = " + std::to_string(L) + " is odd");
  if (L < 0 || L > 62) throw std::invalid_argument("xxz: L out of range");
  std::uint64_t c = 1;
  for (int i = 1; i <= L / 2; ++i) c = c * static_cast<std::uint64_t>(L / 2 + i) / i;
  return c;
}

M0Basis::M0Basis(int L, std::uint64_t cap) : L_(L) {
  validate({0.0, 0.0, L});
  const std::uint64_t dim = m0_dimension(L);
  if (dim > cap)
    throw BasisCapExceeded("M=0 sector of L = " + std::to_string(L) + " has " +
                           std::to_string(dim) + " states, cap is " + std::to_string(cap));
  binom_.assign(static_cast<std::size_t>(L + 1), std::vector<std::uint64_t>(L / 2 + 2, 0));
  for (int n = 0; n <= L; ++n) {
    binom_[n][0] = 1;
    for (int k = 1; k <= std::min(n, L / 2 + 1); ++k)
      binom_[n][k] = binom_[n - 1][k - 1] + (k <= n - 1 ? binom_[n - 1][k] : 0);
  }
  states_.reserve(dim);
  // Gosper's hack enumerates fixed-popcount words in increasing order.
  std::uint64_t s = (std::uint64_t{1} << (L / 2)) - 1;
  const std::uint64_t end = std::uint64_t{1} << L;
  while (s < end) {
    states_.push_back(static_cast<std::uint32_t>(s));
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
}

Index M0Basis::index(std::uint32_t s) const {
  std::uint64_t rank = 0;
  int i = 1;
  while (s != 0) {
    const int pos = std::countr_zero(s);
    rank += binom_[static_cast<std::size_t>(pos)][static_cast<std::size_t>(i)];
    s &= s - 1;
    ++i;
  }
  return static_cast<Index>(rank);
}

M0Basis build_m0_basis(int L, std::uint64_t cap) { return M0Basis(L, cap); }

SparseComplexSymmetricMatrix build_hamiltonian(const XxzParams& p, const M0Basis& basis) {
  validate(p);
  if (basis.L() != p.L) throw DimensionMismatch("basis built for a different L");
  const int L = p.L;
  std::vector<SparseComplexSymmetricMatrix::Entry> entries;
  entries.reserve(static_cast<std::size_t>(basis.size()) * static_cast<std::size_t>(L / 2 + 1));
  for (Index i = 0; i < basis.size(); ++i) {
    const std::uint32_t s = basis.state(i);
    double ising = 0.0, stagger = 0.0;
    for (int j = 0; j < L; ++j) {
      const int jn = (j + 1) % L;
      const double sj = (s >> j) & 1u ? 1.0 : -1.0;
      const double sn = (s >> jn) & 1u ? 1.0 : -1.0;
      ising += sj * sn;
      // Even bits are the odd sites of the chain.
      stagger += (j % 2 == 0 ? sj : -sj);
      if (sj != sn) {
        const std::uint32_t t = s ^ ((1u << j) | (1u << jn));
        const Index k = basis.index(t);
        if (k > i) entries.push_back({i, k, cplx(2.0, 0.0)});
      }
    }
    entries.push_back({i, i, cplx(p.Jz * ising, p.gamma * stagger)});
  }
  return SparseComplexSymmetricMatrix::from_upper(basis.size(), entries);
}

SparseComplexSymmetricMatrix build_hamiltonian(const XxzParams& p, std::uint64_t cap) {
  return build_hamiltonian(p, build_m0_basis(p.L, cap));
}

double norm_estimate(const XxzParams& p) {
  return p.L * (2.0 + std::abs(p.Jz) + std::abs(p.gamma));
}

double tol_real(const XxzParams& p) { return 1e-10 * norm_estimate(p); }

GroundState ground_state(const XxzParams& p, const LanczosOptions& opt,
                         const std::optional<CVector>& start) {
  const auto h = build_hamiltonian(p);
  const LanczosResult r = complex_symmetric_lanczos(
      [&h](const CVector& x, CVector& y) { h.apply(x, y); }, h.dim(), opt, start);
  GroundState g;
  g.energy = r.eigenvalue;
  g.right = r.right;
  // Complex symmetry: the left covector is the transpose of the right vector.
  g.left = r.right / bilinear(r.right, r.right);
  g.pt = std::abs(r.eigenvalue.imag()) < tol_real(p) ? PtClass::unbroken : PtClass::broken;
  g.iterations = r.iterations;
  g.residual = r.residual;
  return g;
}

GroundState ground_state_dense(const XxzParams& p) {
  const CMatrix h = build_hamiltonian(p, kDenseCap).to_dense();
  const CVector ev = dense::eigenvalues(h);
  const Index g0 = select_ground(ev);
  const double scale = spectral_scale(h, ev);
  const double tol = EigOptions{}.tol_pair_rel * scale;
  Index near = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i] - ev[g0]) <= tol) ++near;

  GroundState g;
  if (near > 1) {
    // Degenerate ground level: pair the whole spectrum.
    EigOptions eo;
    eo.allow_degenerate = true;
    const auto es = biorthogonal_eig(h, eo);
    const Index k = select_ground(es.eigenvalues);
    g.energy = es.eigenvalues[k];
    g.right = es.right.col(k);
    g.left = es.left.col(k);
  } else {
    // Inverse iteration on H and H^T with one factorization; the offset is
    // far below the distance to any other eigenvalue.
    const dense::ShiftedLU lu(h, ev[g0] + cplx(1e-13 * scale, 1e-13 * scale));
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> nd;
    CVector r(h.rows()), l(h.rows());
    for (Index i = 0; i < h.rows(); ++i) {
      r[i] = cplx(nd(rng), nd(rng));
      l[i] = cplx(nd(rng), nd(rng));
    }
    for (int it = 0; it < 3; ++it) {
      r = lu.solve(r).normalized();
      l = lu.solve_transposed(l).normalized();
    }
    fix_gauge(r);
    const cplx lr = bilinear(l, r);
    if (std::abs(lr) < EigOptions{}.ep_guard) throw DefectiveMatrix("ground state at an exceptional point");
    l /= lr;
    g.energy = bilinear(l, h * r);
    g.right = r;
    g.left = l;
  }
  g.pt = std::abs(g.energy.imag()) < tol_real(p) ? PtClass::unbroken : PtClass::broken;
  return g;
}

std::string_view to_string(Direction d) noexcept { return d == Direction::gamma ? "gamma" : "Jz"; }

XxzParams shifted(const XxzParams& p, Direction d, double value) {
  XxzParams q = p;
  (d == Direction::gamma ? q.gamma : q.Jz) = value;
  return q;
}

std::vector<FidelityRecord> fidelity_scan(const XxzParams& p, Direction d,
                                          const std::vector<double>& grid, double epsilon,
                                          const ScanOptions& opt) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("scan grid must be sorted");
  std::vector<FidelityRecord> out;
  std::optional<CVector> seed;
  for (double lam : grid) {
    const GroundState a = ground_state(shifted(p, d, lam), opt.lanczos, opt.track ? seed : std::nullopt);
    const GroundState b = ground_state(shifted(p, d, lam + epsilon), opt.lanczos, a.right);
    FidelityRecord rec;
    rec.lambda = lam;
    rec.epsilon = epsilon;
    rec.F = metricized_fidelity(a.left, a.right, b.left, b.right);
    rec.chi_fd = chi_finite_difference(rec.F, epsilon);
    rec.pt_a = a.pt;
    rec.pt_b = b.pt;
    out.push_back(rec);
    seed = a.right;
  }
  return out;
}

CVector full_sector_spectrum(const XxzParams& p) {
  return dense_full_spectrum(build_hamiltonian(p, kDenseCap).to_dense());
}

PtClass ground_class(const XxzParams& p, const LanczosOptions& opt) {
  return ground_state(p, opt).pt;
}

fit::Bracket locate_ep(const XxzParams& p, Direction d, double lo, double hi, double width,
                       const LanczosOptions& opt) {
  return fit::bisect_transition(
      [&](double x) { return ground_class(shifted(p, d, x), opt); }, lo, hi, width);
}

PeakExtrapolation peak_and_extrapolate(const std::vector<SizeSeries>& series, int fit_degree) {
  if (series.size() < 3)
    throw InsufficientSizes("need at least 3 system sizes, got " + std::to_string(series.size()));
  std::vector<SizeSeries> sorted = series;
  std::sort(sorted.begin(), sorted.end(),
            [](const SizeSeries& a, const SizeSeries& b) { return a.L < b.L; });
  PeakExtrapolation out;
  std::vector<double> positions, heights, sizes_d;
  for (const auto& s : sorted) {
    const fit::Peak pk = fit::locate_peak(s.x, s.y);
    out.sizes.push_back(s.L);
    out.peaks.push_back(pk);
    positions.push_back(pk.position);
    heights.push_back(pk.height);
    sizes_d.push_back(s.L);
  }
  out.position_fit = fit::extrapolate_in_inverse_size(out.sizes, positions, fit_degree);
  out.height_slopes = fit::loglog_slopes(sizes_d, heights);
  return out;
}

}  // namespace ptfid::xxz
