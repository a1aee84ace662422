#include "oracles.hpp"
#include "ptfid/biortho.hpp"
#include "ptfid/dense.hpp"

#include <doctest.h>

using namespace ptfid;

TEST_CASE("biorthogonal_eig satisfies the eigen equations and biorthonormality") {
  std::mt19937_64 rng(7);
  for (Index n : {2, 5, 12, 30}) {
    const CMatrix h = oracle::random_complex(n, rng);
    const auto es = biorthogonal_eig(h);
    const CMatrix id = CMatrix::Identity(n, n);
    CHECK((es.left.transpose() * es.right - id).norm() < 1e-10);
    CHECK((h * es.right - es.right * es.eigenvalues.asDiagonal()).norm() < 1e-10 * h.norm());
    CHECK((es.left.transpose() * h - es.eigenvalues.asDiagonal() * es.left.transpose()).norm() <
          1e-9 * h.norm());
    for (Index i = 0; i < n; ++i) {
      CHECK(std::abs(es.right.col(i).norm() - 1.0) < 1e-12);
      Index imax = 0;
      es.right.col(i).cwiseAbs().maxCoeff(&imax);
      CHECK(std::abs(es.right(imax, i).imag()) < 1e-14);
      CHECK(es.right(imax, i).real() > 0.0);
    }
    for (Index i = 1; i < n; ++i) {
      const auto a = es.eigenvalues[i - 1], b = es.eigenvalues[i];
      CHECK((a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag())));
    }
  }
}

TEST_CASE("eigenvalues agree with an independent eigensolver") {
  std::mt19937_64 rng(11);
  const CMatrix h = oracle::random_complex(20, rng);
  const auto es = biorthogonal_eig(h);
  const auto ref = oracle::biorthogonal(h);
  CHECK((es.eigenvalues - ref.values).norm() < 1e-10);
  // Fidelity between eigenstates of two nearby matrices is gauge invariant.
  const CMatrix h2 = h + 1e-3 * oracle::random_complex(20, rng);
  const auto es2 = biorthogonal_eig(h2);
  const auto ref2 = oracle::biorthogonal(h2);
  const cplx f = oracle::fidelity(es.left.col(3), es.right.col(3), es2.left.col(3), es2.right.col(3));
  const cplx g = oracle::fidelity(ref.left.col(3), ref.right.col(3), ref2.left.col(3), ref2.right.col(3));
  CHECK(std::abs(f - g) < 1e-9);
}

TEST_CASE("exceptional points and degeneracies are reported") {
  CMatrix jordan(2, 2);
  jordan << 0, 1, 0, 0;
  CHECK_THROWS_AS(biorthogonal_eig(jordan), DefectiveMatrix);

  CMatrix ep(2, 2);  // eigenvalues +-sqrt(1 - s^2), coalescing at s = 1
  ep << cplx(0, 1), 1, 1, cplx(0, -1);
  CHECK_THROWS_AS(biorthogonal_eig(ep), DefectiveMatrix);

  const CMatrix id = CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(biorthogonal_eig(id), AmbiguousPairing);
  EigOptions opt;
  opt.allow_degenerate = true;
  CMatrix deg = CMatrix::Zero(4, 4);
  deg.diagonal() << 1, 1, 2, 3;
  deg(0, 3) = 0.5;
  deg(2, 1) = 0.25;
  const auto es = biorthogonal_eig(deg, opt);
  CHECK((es.left.transpose() * es.right - CMatrix::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("dimension guards") {
  CHECK_THROWS_AS(biorthogonal_eig(CMatrix(2, 3)), DimensionMismatch);
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(biorthogonal_eig(bad), std::invalid_argument);
}

TEST_CASE("PT-symmetric spectra are closed under conjugation") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix h = oracle::random_pt(8, rng);
    const auto es = biorthogonal_eig(h);
    const double scale = spectral_scale(h, es.eigenvalues);
    const auto cls = classify_pt(es, 1e-9 * scale, 1e-8 * scale);
    for (Index i = 0; i < es.dim(); ++i) {
      if (cls.is_real(i)) {
        CHECK(std::abs(es.eigenvalues[i].imag()) < 1e-9 * scale);
        CHECK_THROWS_AS(pt_partner_state(cls, i), NotBroken);
      } else {
        const Index j = pt_partner_state(cls, i);
        CHECK(pt_partner_state(cls, j) == i);
        CHECK(std::abs(es.eigenvalues[j] - std::conj(es.eigenvalues[i])) < 1e-8 * scale);
      }
    }
  }
  CVector lonely(2);
  lonely << cplx(1, 1), cplx(2, 0);
  CHECK_THROWS_AS(classify_pt(lonely, 1e-10, 1e-8), UnpairableSpectrum);
}

TEST_CASE("metric operator") {
  std::mt19937_64 rng(5);
  // A real spectrum: similarity transform of a real diagonal matrix.
  const Index n = 6;
  CMatrix s = CMatrix::Identity(n, n) + 0.3 * oracle::random_complex(n, rng);
  CMatrix d = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = static_cast<double>(i) - 2.5;
  const CMatrix h = s * d * s.inverse();
  const auto es = biorthogonal_eig(h);
  const CMatrix g = metric_operator(es);
  CHECK((g - g.adjoint()).norm() < 1e-10 * g.norm());
  Eigen::SelfAdjointEigenSolver<CMatrix> sa(0.5 * (g + g.adjoint()));
  CHECK(sa.eigenvalues().minCoeff() > 0.0);
  // Stationarity G H = H^dagger G needs a real spectrum.
  CHECK((g * h - h.adjoint() * g).norm() < 1e-8 * g.norm() * h.norm());
  // Right eigenvectors are orthonormal in the G inner product.
  CHECK((es.right.adjoint() * g * es.right - CMatrix::Identity(n, n)).norm() < 1e-9);
}

TEST_CASE("ground state selection") {
  CVector e(4);
  e << cplx(-1, 0.5), cplx(-1, -0.5), cplx(0, 0), cplx(-0.5, 0);
  CHECK(select_ground(e) == 0);
  e << cplx(-1, -0.5), cplx(-1, 0.5), cplx(0, 0), cplx(-0.5, 0);
  CHECK(select_ground(e) == 1);
  CHECK(dense_full_spectrum(CMatrix::Identity(2, 2)).size() == 2);
}

TEST_CASE("dense eigenvalue helpers") {
  std::mt19937_64 rng(9);
  const CMatrix h = oracle::random_complex(10, rng);
  const CVector a = dense::eigenvalues(h);
  const auto r = dense::eigen_right(h);
  CHECK((h * r.vectors - r.vectors * r.values.asDiagonal()).norm() < 1e-10 * h.norm());
  double err = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    double best = 1e300;
    for (Index j = 0; j < a.size(); ++j) best = std::min(best, std::abs(a[i] - r.values[j]));
    err = std::max(err, best);
  }
  CHECK(err < 1e-10);
}

TEST_CASE("fix_gauge makes the largest component real positive") {
  CVector v(3);
  v << cplx(0.1, 0.2), cplx(-0.3, 0.9), cplx(0.2, 0);
  const CVector before = v;
  const cplx phase = fix_gauge(v);
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-15);
  CHECK(std::abs(v[1].imag()) < 1e-15);
  CHECK(v[1].real() > 0.0);
  CHECK((v - phase * before).norm() < 1e-15);
}
