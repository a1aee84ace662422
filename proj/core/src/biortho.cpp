#include "ptfid/biortho.hpp"

#include "ptfid/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>

namespace ptfid {
namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

double min_singular_ratio(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

// Orthonormal basis of the m-dimensional invariant subspace of `a` belonging
// to eigenvalues near mu, by block inverse iteration. zgeev's own vectors are
// unreliable here: for an exactly repeated eigenvalue they can come out
// nearly parallel even when the matrix is diagonalizable.
CMatrix cluster_subspace(const CMatrix& a, cplx mu, Index m, double tol, std::uint64_t seed) {
  const Index n = a.rows();
  const dense::ShiftedLU lu(a, mu + cplx(1e-3 * tol, 1e-3 * tol));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CMatrix x(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) x(i, j) = cplx(nd(rng), nd(rng));
  for (int it = 0; it < 3; ++it) {
    x = lu.solve(x);
    Eigen::HouseholderQR<CMatrix> qr(x);
    x = qr.householderQ() * CMatrix::Identity(n, m);
  }
  return x;
}

double spectral_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

}  // namespace

double spectral_scale(const CMatrix& h, const CVector& eigenvalues) {
  double s = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  if (h.rows() > 0) s = std::max(s, h.rowwise().norm().mean());
  return s > 0.0 ? s : 1.0;
}

BiorthogonalEigensystem biorthogonal_eig(const CMatrix& h, const EigOptions& opt) {
  if (h.rows() == 0) throw std::invalid_argument("biorthogonal_eig: empty matrix");
  const dense::RightEigen re = dense::eigen_right(h);
  const dense::RightEigen le = dense::eigen_right(h.transpose());
  const Index n = h.rows();
  const double tol = opt.tol_pair_rel * spectral_scale(h, re.values);

  // Cluster the union of both spectra; entries < n are right, >= n are left.
  const auto total = static_cast<std::size_t>(2 * n);
  auto value = [&](std::size_t i) {
    return i < static_cast<std::size_t>(n) ? re.values[static_cast<Index>(i)]
                                           : le.values[static_cast<Index>(i) - n];
  };
  std::vector<std::size_t> by_re(total);
  std::iota(by_re.begin(), by_re.end(), 0);
  std::sort(by_re.begin(), by_re.end(),
            [&](std::size_t a, std::size_t b) { return value(a).real() < value(b).real(); });
  DisjointSets sets(total);
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = a + 1; b < total; ++b) {
      if (value(by_re[b]).real() - value(by_re[a]).real() > tol) break;
      if (std::abs(value(by_re[b]) - value(by_re[a])) <= tol) sets.unite(by_re[a], by_re[b]);
    }
  }
  std::vector<std::vector<Index>> r_members(total), l_members(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t root = sets.find(i);
    if (i < static_cast<std::size_t>(n))
      r_members[root].push_back(static_cast<Index>(i));
    else
      l_members[root].push_back(static_cast<Index>(i) - n);
  }

  CMatrix right(n, n), left(n, n);
  CVector values(n);
  Index filled = 0;
  for (std::size_t root = 0; root < total; ++root) {
    const auto& rs = r_members[root];
    const auto& ls = l_members[root];
    if (rs.empty() && ls.empty()) continue;
    if (rs.size() != ls.size()) {
      throw AmbiguousPairing("eigenvalue near " + std::to_string(value(root).real()) + "+" +
                             std::to_string(value(root).imag()) + "i has " +
                             std::to_string(rs.size()) + " right and " +
                             std::to_string(ls.size()) + " left partners");
    }
    const auto m = static_cast<Index>(rs.size());
    if (m == 1) {
      CVector r = re.vectors.col(rs[0]).normalized();
      CVector c = le.vectors.col(ls[0]).normalized();
      const cplx s = bilinear(c, r);
      if (std::abs(s) < opt.ep_guard) {
        throw DefectiveMatrix("raw |<L|R>| = " + std::to_string(std::abs(s)) +
                              " below ep_guard");
      }
      fix_gauge(r);
      c /= bilinear(c, r);
      right.col(filled) = r;
      left.col(filled) = c;
      values[filled] = re.values[rs[0]];
      ++filled;
      continue;
    }
    cplx mu = 0.0;
    for (Index j : rs) mu += re.values[j];
    mu /= static_cast<double>(m);
    // zgeev's vectors usually span the cluster well; only when they come out
    // nearly dependent is the subspace rebuilt by inverse iteration.
    CMatrix rset(n, m), cset(n, m);
    for (Index j = 0; j < m; ++j) {
      rset.col(j) = re.vectors.col(rs[static_cast<std::size_t>(j)]);
      cset.col(j) = le.vectors.col(ls[static_cast<std::size_t>(j)]);
    }
    auto orthonormal = [n, m](const CMatrix& a) {
      Eigen::HouseholderQR<CMatrix> qr(a);
      return CMatrix(qr.householderQ() * CMatrix::Identity(n, m));
    };
    constexpr double kWellSpread = 1e-3;
    const CMatrix x = min_singular_ratio(rset) >= kWellSpread
                          ? orthonormal(rset)
                          : cluster_subspace(h, mu, m, tol, 0x5eedULL + root);
    const CMatrix y = min_singular_ratio(cset) >= kWellSpread
                          ? orthonormal(cset)
                          : cluster_subspace(h.transpose(), mu, m, tol, 0x1eafULL + root);
    // On a non-defective cluster the projected block is mu times the identity
    // up to the cluster width; a Jordan structure leaves an O(|H|) remainder.
    const CMatrix mx = x.adjoint() * h * x;
    const CMatrix my = y.adjoint() * h.transpose() * y;
    const CMatrix shift = mu * CMatrix::Identity(m, m);
    const double width = 10.0 * static_cast<double>(m) * tol;
    if (spectral_norm(mx - shift) > width || spectral_norm(my - shift) > width) {
      throw DefectiveMatrix("eigenvalue cluster of size " + std::to_string(m) +
                            " has fewer than " + std::to_string(m) + " eigenvectors");
    }
    const CMatrix pair = y.transpose() * x;
    if (min_singular_ratio(pair) < opt.rank_guard) {
      throw DefectiveMatrix("left and right eigenspaces of a " + std::to_string(m) +
                            "-fold cluster are bilinearly degenerate");
    }
    if (!opt.allow_degenerate) {
      throw AmbiguousPairing(std::to_string(m) + "-fold degenerate eigenvalue cluster");
    }
    // Resolve any splitting inside the cluster with the projected block.
    Eigen::ComplexEigenSolver<CMatrix> ces(mx);
    CMatrix rvec = x * ces.eigenvectors();
    for (Index j = 0; j < m; ++j) {
      CVector r = rvec.col(j).normalized();
      fix_gauge(r);
      rvec.col(j) = r;
    }
    const CMatrix fixed = y * (y.transpose() * rvec).inverse().transpose();
    for (Index j = 0; j < m; ++j) {
      right.col(filled) = rvec.col(j);
      left.col(filled) = fixed.col(j);
      values[filled] = ces.eigenvalues()[j];
      ++filled;
    }
  }

  const auto order = dense::order_by_real_then_imag(values);
  BiorthogonalEigensystem out{CVector(n), CMatrix(n, n), CMatrix(n, n), Eigen::VectorXd(n)};
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    out.eigenvalues[j] = values[src];
    out.right.col(j) = right.col(src);
    out.left.col(j) = left.col(src);
    out.condition[j] = 1.0 / left.col(src).norm();
  }
  return out;
}

PTClassification classify_pt(const CVector& eigenvalues, double tol_real, double tol_pair) {
  const auto n = static_cast<std::size_t>(eigenvalues.size());
  PTClassification cls;
  cls.tol_real = tol_real;
  cls.tol_pair = tol_pair;
  cls.pair_map.assign(n, -1);
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(eigenvalues[static_cast<Index>(i)].imag()) < tol_real) {
      cls.real_indices.push_back(static_cast<Index>(i));
      done[i] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    const cplx target = std::conj(eigenvalues[static_cast<Index>(i)]);
    std::size_t best = n;
    double best_dist = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || done[j]) continue;
      const double d = std::abs(eigenvalues[static_cast<Index>(j)] - target);
      if (best == n || d < best_dist) {
        best = j;
        best_dist = d;
      }
    }
    if (best == n || best_dist >= tol_pair) {
      const cplx e = eigenvalues[static_cast<Index>(i)];
      throw UnpairableSpectrum("no conjugate partner for " + std::to_string(e.real()) + "+" +
                               std::to_string(e.imag()) + "i");
    }
    cls.pair_map[i] = static_cast<Index>(best);
    cls.pair_map[best] = static_cast<Index>(i);
    done[i] = done[best] = true;
  }
  return cls;
}

Index pt_partner_state(const PTClassification& cls, Index n) {
  if (n < 0 || static_cast<std::size_t>(n) >= cls.pair_map.size())
    throw std::out_of_range("pt_partner_state: index out of range");
  if (cls.is_real(n)) throw NotBroken("state " + std::to_string(n) + " has a real eigenvalue");
  return cls.pair_map[static_cast<std::size_t>(n)];
}

CMatrix metric_operator(const BiorthogonalEigensystem& es) {
  return es.left.conjugate() * es.left.transpose();
}

CVector dense_full_spectrum(const CMatrix& h) {
  const CVector w = dense::eigenvalues(h);
  const auto order = dense::order_by_real_then_imag(w);
  CVector out(w.size());
  for (Index j = 0; j < w.size(); ++j) out[j] = w[order[static_cast<std::size_t>(j)]];
  return out;
}

Index select_ground(const CVector& eigenvalues, double tie_tol) {
  if (eigenvalues.size() == 0) throw std::invalid_argument("select_ground: empty spectrum");
  double min_re = eigenvalues[0].real();
  for (Index i = 1; i < eigenvalues.size(); ++i) min_re = std::min(min_re, eigenvalues[i].real());
  const double band = tie_tol * std::max(1.0, std::abs(min_re));
  Index best = -1;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i].real() - min_re > band) continue;
    if (best < 0 || eigenvalues[i].imag() > eigenvalues[best].imag()) best = i;
  }
  return best;
}

}  // namespace ptfid
