#include "ptfid/lanczos.hpp"

#include "ptfid/biortho.hpp"
#include "ptfid/dense.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace ptfid {
namespace {

CVector random_vector(Index dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = dist(rng);
    const double im = dist(rng);
    v[i] = cplx(re, im);
  }
  return v;
}

// w -= Q (Q^T w) over the first m columns, as two matrix-vector products.
void project_out(CVector& w, const CMatrix& q, Index m) {
  const CVector c = q.leftCols(m).transpose() * w;
  w.noalias() -= q.leftCols(m) * c;
}

void project_locked(CVector& w, const std::vector<CVector>& locked,
                    const std::vector<cplx>& self) {
  for (std::size_t i = 0; i < locked.size(); ++i)
    w -= (bilinear(locked[i], w) / self[i]) * locked[i];
}

struct Ritz {
  cplx theta;
  CVector y;
};

Ritz target_ritz(const std::vector<cplx>& alpha, const std::vector<cplx>& beta, Index m,
                 double tie_tol) {
  CMatrix t = CMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  const auto eig = dense::eigen_right(t);
  const Index k = select_ground(eig.values, tie_tol);
  return {eig.values[k], eig.vectors.col(k)};
}

}  // namespace

LanczosResult lanczos_run(const LinearOperator& apply, Index dim, const LanczosOptions& opt,
                          const std::optional<CVector>& start,
                          const std::vector<CVector>& locked) {
  if (dim <= 0) throw std::invalid_argument("lanczos: empty operator");
  std::mt19937_64 rng(opt.seed);
  std::vector<cplx> locked_self;
  for (const auto& x : locked) locked_self.push_back(bilinear(x, x));

  const auto budget_cols = static_cast<Index>(opt.memory_budget / (16.0 * static_cast<double>(dim)));
  const Index cap = std::max<Index>(2, std::min<Index>(dim, std::max<Index>(20, budget_cols)));
  // Restarting from a single Ritz vector stalls when the low spectrum is
  // dense, so each unconverged cycle doubles the basis up to 8x the default.
  Index krylov = std::min<Index>(cap, std::max(2, opt.max_krylov));
  const Index krylov_max = std::min<Index>(cap, 8 * static_cast<Index>(std::max(2, opt.max_krylov)));

  LanczosResult res;
  CVector v = start ? *start : random_vector(dim, rng);
  if (v.size() != dim) throw DimensionMismatch("lanczos: start vector has wrong size");
  CVector w(dim), hx(dim);
  CMatrix q;

  while (true) {
    project_locked(v, locked, locked_self);
    const cplx vv = bilinear(v, v);
    if (std::abs(vv) < opt.breakdown_guard * v.squaredNorm() || v.squaredNorm() == 0.0) {
      if (++res.restarts > opt.restart_max)
        throw QuasiNullBreakdown("quasi-null start vector after " +
                                 std::to_string(opt.restart_max) + " restarts");
      v = random_vector(dim, rng);
      continue;
    }
    if (q.cols() < krylov) q.resize(dim, krylov);
    std::vector<cplx> alpha, beta;
    q.col(0) = v / std::sqrt(vv);
    double scale = 0.0;
    bool quasi_null = false;
    Ritz ritz{};
    Index m = 0;

    for (Index j = 0; j < krylov; ++j) {
      apply(q.col(j), w);
      ++res.iterations;
      const cplx a = bilinear(q.col(j), w);
      alpha.push_back(a);
      m = j + 1;
      // Two passes of full reorthogonalization in the bilinear form.
      project_out(w, q, m);
      project_out(w, q, m);
      project_locked(w, locked, locked_self);
      const double wnorm = w.norm();
      scale = std::max({scale, std::abs(a), j > 0 ? std::abs(beta.back()) : 0.0});
      const bool exhausted = wnorm <= 1e-13 * std::max(scale, 1e-300) || m == dim;
      // The projected eigenproblem costs O(m^3); past a few dozen vectors
      // only solve it every fourth step and at the end of a cycle.
      const bool check = m <= 40 || m % 4 == 0 || m == krylov || exhausted ||
                         res.iterations >= opt.max_iter;
      if (check) {
        ritz = target_ritz(alpha, beta, m, opt.tie_tol);
        const double est = wnorm * std::abs(ritz.y[m - 1]) / ritz.y.norm();
        if (exhausted || est < 1e3 * opt.tol_resid) {
          CVector x = q.leftCols(m) * ritz.y;
          x.normalize();
          apply(x, hx);
          ++res.iterations;
          const cplx xx = bilinear(x, x);
          cplx theta = ritz.theta;
          // The bilinear Rayleigh quotient is second-order accurate.
          if (std::abs(xx) > 1e-8) theta = bilinear(x, hx) / xx;
          const double r = (hx - theta * x).norm();
          if (r < opt.tol_resid || exhausted) {
            res.eigenvalue = theta;
            res.residual = r;
            res.right = x;
            fix_gauge(res.right);
            if (r >= opt.tol_resid)
              throw NoConvergence("invariant subspace reached with residual " + std::to_string(r));
            return res;
          }
        }
        if (res.iterations >= opt.max_iter)
          throw NoConvergence("lanczos: no convergence after " + std::to_string(res.iterations) +
                              " matvecs");
      }
      if (m == krylov) break;
      const cplx ww = bilinear(w, w);
      if (std::abs(ww) < opt.breakdown_guard * wnorm * wnorm) {
        quasi_null = true;
        break;
      }
      const cplx b = std::sqrt(ww);
      beta.push_back(b);
      q.col(j + 1) = w / b;
    }
    if (quasi_null) {
      if (++res.restarts > opt.restart_max)
        throw QuasiNullBreakdown("quasi-null Krylov vector after " +
                                 std::to_string(opt.restart_max) + " restarts");
      v = random_vector(dim, rng);
      continue;
    }
    // Explicit restart from the current target Ritz vector.
    v = q.leftCols(m) * ritz.y;
    krylov = std::min(krylov_max, 2 * krylov);
  }
}

LanczosResult complex_symmetric_lanczos(const LinearOperator& apply, Index dim,
                                        const LanczosOptions& opt,
                                        const std::optional<CVector>& start) {
  LanczosResult first = lanczos_run(apply, dim, opt, start, {});
  const double band = opt.tie_tol * std::max(1.0, std::abs(first.eigenvalue));
  if (first.eigenvalue.imag() >= -band || dim < 2) return first;
  // The -Im member of a PT pair came out first; look for its partner in the
  // complement and prefer it when the real parts tie.
  LanczosOptions second = opt;
  second.seed = opt.seed ^ 0x9e3779b97f4a7c15ULL;
  try {
    LanczosResult other = lanczos_run(apply, dim, second, std::nullopt, {first.right});
    const double tie = 1e3 * band;
    if (std::abs(other.eigenvalue.real() - first.eigenvalue.real()) <= tie &&
        other.eigenvalue.imag() > first.eigenvalue.imag()) {
      other.iterations += first.iterations;
      other.restarts += first.restarts;
      return other;
    }
  } catch (const Error&) {
    // Keep the first eigenpair if the deflated run cannot converge.
  }
  return first;
}

}  // namespace ptfid
