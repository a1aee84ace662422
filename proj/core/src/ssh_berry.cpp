#include "ptfid/ssh.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace ptfid::ssh {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double x) {
  double r = std::remainder(x, 2.0 * kPi);  // [-pi, pi]
  if (r < -0.5 * kPi) r += 2.0 * kPi;
  return r;
}

// i * sum_j log <L(k_j)|R(k_{j+1})> on a closed loop of n links, before wrapping.
cplx wilson_loop(const SshParams& p, int band, int n) {
  const double tol = tol_delta(p);
  std::vector<SingleParticleStates> st;
  st.reserve(static_cast<std::size_t>(n));
  Branch branch = Branch::exceptional;
  for (int j = 0; j < n; ++j) {
    const double k = 2.0 * kPi * j / n;
    const double d = delta_k(k, p);
    if (std::abs(d) < tol) throw GridCrossesEP("grid momentum at an exceptional point");
    const Branch b = d > 0.0 ? Branch::real : Branch::imaginary;
    if (j == 0) branch = b;
    if (b != branch)
      throw GridCrossesEP("Delta_k changes sign along the loop (k = " + std::to_string(k) + ")");
    st.push_back(single_particle_states(k, p));
  }
  double arg_sum = 0.0, log_abs = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto& a = st[static_cast<std::size_t>(j)];
    const auto& b = st[static_cast<std::size_t>((j + 1) % n)];
    const cplx z = band > 0 ? bilinear(a.l_plus, b.r_plus) : bilinear(a.l_minus, b.r_minus);
    arg_sum += std::arg(z);
    log_abs += std::log(std::abs(z));
  }
  return {-arg_sum, log_abs};
}

}  // namespace

double elliptic_k(double y) {
  if (!(y < 1.0)) throw std::domain_error("elliptic_k needs y < 1");
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate([y](double z) { return 1.0 / std::sqrt(1.0 - y * std::sin(z) * std::sin(z)); },
                     0.0, 0.5 * kPi);
}

double elliptic_pi(double x, double y) {
  if (!(y < 1.0) || !(x < 1.0)) throw std::domain_error("elliptic_pi needs x, y < 1");
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(
      [x, y](double z) {
        const double s2 = std::sin(z) * std::sin(z);
        return 1.0 / ((1.0 - x * s2) * std::sqrt(1.0 - y * s2));
      },
      0.0, 0.5 * kPi);
}

cplx complex_berry_phase(const SshParams& p, int band, BerryMethod method,
                         const BerryOptions& opt) {
  if (band != 1 && band != -1) throw std::invalid_argument("band must be +1 or -1");
  if (!(p.w > 0.0)) throw std::invalid_argument("ssh: w must be positive");
  if (method == BerryMethod::numeric) {
    if (opt.n_k < 8) throw std::invalid_argument("Berry loop needs at least 8 momenta");
    cplx g = wilson_loop(p, band, opt.n_k);
    if (opt.richardson) {
      // Each link log is off by O(dk^2), so the loop sum is off by O(dk).
      const cplx g2 = wilson_loop(p, band, 2 * opt.n_k);
      g = 2.0 * g2 - g;
    }
    return {wrap_phase(g.real()), g.imag()};
  }
  if (p.v2 != 0.0) throw std::invalid_argument("analytic Berry phase requires v2 = 0");
  if (!(p.v1 > 0.0)) throw std::invalid_argument("analytic Berry phase requires v1 > 0");
  if (p.v1 == p.w) throw std::domain_error("analytic Berry phase undefined at v1 = w");
  const double r = p.v1 / p.w;
  const double x = 4.0 * p.v1 / (p.w * (r + 1.0) * (r + 1.0));
  const double y = (4.0 * r) / ((r + 1.0) * (r + 1.0) - p.u * p.u / (p.w * p.w));
  if (!(y > 0.0 && y < 1.0))
    throw std::domain_error("analytic Berry phase needs 0 < y < 1 (PT-unbroken band)");
  const double re = r > 1.0 ? kPi : 0.0;
  const double im = p.u / (2.0 * p.w) * std::sqrt(y * p.w / p.v1) *
                    (elliptic_k(y) + (p.v1 - p.w) / (p.v1 + p.w) * elliptic_pi(x, y));
  return {wrap_phase(re), band * im};
}

}  // namespace ptfid::ssh
