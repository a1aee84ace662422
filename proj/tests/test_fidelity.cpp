#include "oracles.hpp"
#include "ptfid/fidelity.hpp"

#include <doctest.h>

using namespace ptfid;

namespace {

struct Pencil {
  CMatrix h0, v;
  [[nodiscard]] CMatrix at(double lam) const { return h0 + lam * v; }
};

EndpointState ground_of(const CMatrix& h) {
  const auto es = biorthogonal_eig(h);
  const Index g = select_ground(es.eigenvalues);
  const double tol = 1e-10 * spectral_scale(h, es.eigenvalues);
  return {es.left.col(g), es.right.col(g),
          std::abs(es.eigenvalues[g].imag()) < tol ? PtClass::unbroken : PtClass::broken};
}

}  // namespace

TEST_CASE("definition names round-trip") {
  for (auto d : {FidelityDefinition::metricized, FidelityDefinition::rr,
                 FidelityDefinition::lr_half_sum, FidelityDefinition::lr_sqrt_abs,
                 FidelityDefinition::lr_sqrt})
    CHECK(parse_definition(to_string(d)) == d);
  CHECK(parse_definition("lr-SQRT") == FidelityDefinition::lr_sqrt);
  CHECK_THROWS_AS(parse_definition("bogus"), ConfigError);
}

TEST_CASE("fidelity variants against direct formulas") {
  std::mt19937_64 rng(21);
  const CMatrix h = oracle::random_complex(6, rng);
  const CMatrix h2 = h + 0.05 * oracle::random_complex(6, rng);
  const auto a = oracle::biorthogonal(h), b = oracle::biorthogonal(h2);
  const CVector la = a.left.col(0), ra = a.right.col(0), lb = b.left.col(0), rb = b.right.col(0);
  const cplx x = (la.transpose() * rb)(0), y = (lb.transpose() * ra)(0), z = ra.dot(rb);
  const cplx F = x * y;
  CHECK(std::abs(metricized_fidelity(la, ra, lb, rb) - F) < 1e-12);
  CHECK(std::abs(fidelity_variant(FidelityDefinition::rr, la, ra, lb, rb) - std::norm(z)) < 1e-12);
  CHECK(std::abs(fidelity_variant(FidelityDefinition::lr_half_sum, la, ra, lb, rb) -
                 0.5 * std::abs(x + std::conj(y))) < 1e-12);
  CHECK(std::abs(fidelity_variant(FidelityDefinition::lr_sqrt_abs, la, ra, lb, rb) -
                 std::sqrt(std::abs(F))) < 1e-12);
  CHECK(std::abs(fidelity_variant(FidelityDefinition::lr_sqrt, la, ra, lb, rb) - std::sqrt(F)) <
        1e-12);
  CHECK_THROWS_AS(metricized_fidelity(la, ra, lb.head(3), rb), DimensionMismatch);
}

TEST_CASE("metricized fidelity is gauge invariant") {
  std::mt19937_64 rng(22);
  const CMatrix h = oracle::random_complex(5, rng);
  const CMatrix h2 = h + 0.01 * oracle::random_complex(5, rng);
  const auto a = oracle::biorthogonal(h), b = oracle::biorthogonal(h2);
  const cplx c1(0.3, -1.7), c2(-2.0, 0.4);
  const cplx f0 = metricized_fidelity(a.left.col(1), a.right.col(1), b.left.col(1), b.right.col(1));
  const cplx f1 = metricized_fidelity(a.left.col(1) / c1, a.right.col(1) * c1, b.left.col(1) / c2,
                                      b.right.col(1) * c2);
  CHECK(std::abs(f0 - f1) < 1e-12);
}

TEST_CASE("perturbative susceptibility against finite differences") {
  std::mt19937_64 rng(23);
  const Pencil p{oracle::random_complex(8, rng), oracle::random_complex(8, rng)};
  const auto es = biorthogonal_eig(p.h0);
  const Index g = select_ground(es.eigenvalues);
  const cplx chi = chi_perturbative(es, p.v, g);
  const cplx e2 = second_order_energy(es, p.v, g);
  const cplx chi_rr = chi_rr_perturbative(es, p.v, g);

  // Independent oracle, symmetric steps to cancel the odd orders.
  auto state = [&](double lam) {
    const auto o = oracle::biorthogonal(p.at(lam));
    const Index i = oracle::ground(o.values);
    return std::tuple{o.values[i], CVector(o.left.col(i)), CVector(o.right.col(i))};
  };
  const double eps = 1e-4;
  const auto [em, lm, rm] = state(-eps);
  const auto [e0, l0, r0] = state(0.0);
  const auto [ep, lp, rp] = state(eps);
  const cplx fm = oracle::fidelity(l0, r0, lm, rm), fp = oracle::fidelity(l0, r0, lp, rp);
  const cplx chi_fd = (2.0 - fm - fp) / (2.0 * eps * eps);
  CHECK(std::abs(chi - chi_fd) < 1e-5 * std::max(1.0, std::abs(chi)));
  // E(lam) = E0 + lam V_gg + lam^2 E2.
  const cplx e2_fd = (ep + em - 2.0 * e0) / (2.0 * eps * eps);
  CHECK(std::abs(e2 - e2_fd) < 1e-5 * std::max(1.0, std::abs(e2)));
  const double rr_m = std::norm(r0.dot(rm)), rr_p = std::norm(r0.dot(rp));
  const double rr_fd = (2.0 - rr_m - rr_p) / (2.0 * eps * eps);
  CHECK(std::abs(chi_rr - rr_fd) < 1e-4 * std::max(1.0, std::abs(chi_rr)));
}

TEST_CASE("finite-difference susceptibility") {
  CHECK(std::abs(chi_finite_difference(cplx(0.99, 0.01), 0.1) - cplx(1.0, -1.0)) < 1e-12);
  CHECK_THROWS_AS(chi_finite_difference(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("degenerate denominators are refused") {
  EigOptions opt;
  opt.allow_degenerate = true;
  CMatrix d = CMatrix::Zero(3, 3);
  d.diagonal() << -1, -1, 2;
  const auto es = biorthogonal_eig(d, opt);
  CHECK_THROWS_AS(chi_perturbative(es, CMatrix::Ones(3, 3), 0), DegenerateDenominator);
}

TEST_CASE("conjugate-pair real part") {
  CHECK(chi_real_part(cplx(2, 3), cplx(2, -3)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(chi_real_part(cplx(2, 3), cplx(2, 3)), PartnerMismatch);
}

TEST_CASE("one-half test on a two-level exceptional point") {
  // [[i lam, 1], [1, -i lam]] has E = +-sqrt(1 - lam^2) with an EP at lam = 1.
  auto h = [](double lam) {
    CMatrix m(2, 2);
    m << cplx(0, lam), 1, 1, cplx(0, -lam);
    return m;
  };
  const EndpointFn state = [&](double lam) { return ground_of(h(lam)); };
  const auto res = one_half_ep_test(state, 1.0 - 1e-9, 1.0 + 1e-9);
  CHECK(res.is_second_order);
  CHECK(res.n_crossings == 1);
  CHECK(std::abs(res.ReF_trace.back() - 0.5) < 1e-2);

  OneHalfOptions skew;
  skew.a = 2.0 / 3.0;
  skew.b = 1.0 / 3.0;
  const auto res2 = one_half_ep_test(state, 1.0 - 1e-9, 1.0 + 1e-9, skew);
  CHECK(std::abs(res2.ReF_trace.back() - res.ReF_trace.back()) < 1e-2);

  CHECK_THROWS_AS(one_half_ep_test(state, 0.5, 0.6), NoTransition);

  // Two independent copies: F is the product, so Re F -> 1/4.
  FidelityProbe two;
  two.fidelity = [&](double x, double y) {
    const auto a = ground_of(h(x)), b = ground_of(h(y));
    const cplx f = metricized_fidelity(a.left, a.right, b.left, b.right);
    return f * f;
  };
  two.label = [&](double x) { return ground_of(h(x)).pt; };
  const auto res4 = one_half_ep_test(two, 1.0 - 1e-9, 1.0 + 1e-9);
  CHECK(res4.n_crossings == 2);
  CHECK_FALSE(res4.is_second_order);
}
