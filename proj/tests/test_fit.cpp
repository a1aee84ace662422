#include "ptfid/fit.hpp"

#include <doctest.h>

#include <cmath>

using namespace ptfid;

TEST_CASE("polynomial fit recovers an exact polynomial") {
  const std::vector<double> x{0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> y;
  for (double v : x) y.push_back(1.0 - 2.0 * v + 0.5 * v * v);
  const auto f = fit::polyfit(x, y, 2);
  REQUIRE(f.coeffs.size() == 3);
  CHECK(f.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.coeffs[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.coeffs[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
}

TEST_CASE("extrapolation in 1/L") {
  const std::vector<int> sizes{8, 10, 12, 14};
  std::vector<double> v;
  for (int L : sizes) v.push_back(-1.0 + 2.0 / L);
  const auto f = fit::extrapolate_in_inverse_size(sizes, v, 2);
  CHECK(f.intercept == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK_THROWS_AS(fit::extrapolate_in_inverse_size({8, 10}, {1.0, 2.0}, 1), InsufficientSizes);
  // Degree is lowered to what the data supports.
  const auto g = fit::extrapolate_in_inverse_size({8, 10, 12}, {1.0, 1.0, 1.0}, 5);
  CHECK(g.coeffs.size() == 3);
}

TEST_CASE("peak location refines the sampled maximum") {
  std::vector<double> x, y;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(0.1 * i);
    y.push_back(3.0 - (x.back() - 1.234) * (x.back() - 1.234));
  }
  const auto pk = fit::locate_peak(x, y);
  CHECK(pk.position == doctest::Approx(1.234).epsilon(1e-10));
  CHECK(pk.height == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(pk.index == 12);
}

TEST_CASE("log-log slopes of a power law") {
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(5.0 * std::pow(v, 1.5));
  for (double s : fit::loglog_slopes(x, y)) CHECK(s == doctest::Approx(1.5));
}

TEST_CASE("transition bisection") {
  auto label = [](double x) { return x < 0.3183 ? PtClass::unbroken : PtClass::broken; };
  const auto b = fit::bisect_transition(label, 0.0, 1.0, 1e-8);
  CHECK(b.hi - b.lo <= 1e-8);
  CHECK(b.lo < 0.3183);
  CHECK(b.hi >= 0.3183);
  CHECK_THROWS_AS(fit::bisect_transition(label, 0.5, 1.0, 1e-6), NoTransition);
}
