#include "ptfid/ssh.hpp"

#include "ptfid/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ptfid::ssh {

using std::cos;
using std::sin;
using std::sqrt;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string at_k(double k) { return "Delta_k ~ 0 at k = " + std::to_string(k); }

// The closed-form susceptibilities are written with w = 1; every other w is
// reached by rescaling H -> H / w, which divides chi by w^2.
SshParams unit_w(const SshParams& p) {
  SshParams q = p;
  q.w = 1.0;
  q.v1 = p.v1 / p.w;
  q.v2 = p.v2 / p.w;
  q.u = p.u / p.w;
  return q;
}

}  // namespace

void validate(const SshParams& p) {
  if (!(p.w > 0.0)) throw std::invalid_argument("ssh: w must be positive");
  if (p.L < 2) throw std::invalid_argument("ssh: L must be at least 2");
  if (!std::isfinite(p.v1) || !std::isfinite(p.v2) || !std::isfinite(p.u))
    throw std::invalid_argument("ssh: non-finite parameter");
}

CMatrix bloch_matrix(double k, const SshParams& p) {
  const cplx eta = -p.w - p.v1 * std::exp(-kI * k) - p.v2 * std::exp(kI * k);
  CMatrix h(2, 2);
  h << kI * p.u, eta, std::conj(eta), -kI * p.u;
  return h;
}

CMatrix perturbation_v1(double k) {
  CMatrix v(2, 2);
  v << 0.0, -std::exp(-kI * k), -std::exp(kI * k), 0.0;
  return v;
}

double delta_k(double k, const SshParams& p) {
  return p.v1 * p.v1 + p.v2 * p.v2 + p.w * p.w + 2.0 * p.w * (p.v1 + p.v2) * cos(k) +
         2.0 * p.v1 * p.v2 * cos(2.0 * k) - p.u * p.u;
}

double tol_delta(const SshParams& p) {
  return 1e-10 * (p.w * p.w + p.v1 * p.v1 + p.v2 * p.v2 + p.u * p.u);
}

BandPoint band_point(double k, const SshParams& p) {
  BandPoint b;
  b.k = k;
  b.eta = -p.w - p.v1 * std::exp(-kI * k) - p.v2 * std::exp(kI * k);
  b.delta = delta_k(k, p);
  if (std::abs(b.delta) < tol_delta(p)) {
    b.branch = Branch::exceptional;
    b.eps_plus = b.eps_minus = 0.0;
  } else if (b.delta > 0.0) {
    b.branch = Branch::real;
    b.eps_plus = sqrt(b.delta);
    b.eps_minus = -sqrt(b.delta);
  } else {
    b.branch = Branch::imaginary;
    b.eps_plus = kI * sqrt(-b.delta);
    b.eps_minus = -kI * sqrt(-b.delta);
  }
  return b;
}

SingleParticleStates single_particle_states(double k, const SshParams& p) {
  const double d = delta_k(k, p);
  if (std::abs(d) < tol_delta(p)) throw AtExceptionalMomentum(at_k(k));
  const cplx zeta = std::exp(kI * k) * p.v1 + std::exp(-kI * k) * p.v2 + p.w;
  const double u = p.u;
  SingleParticleStates s;
  s.l_plus.resize(2);
  s.r_plus.resize(2);
  s.l_minus.resize(2);
  s.r_minus.resize(2);
  // Kets |L> are printed; the stored covector is their complex conjugate.
  auto set = [&](CVector& l, CVector& r, cplx l_pref, cplx l_top, cplx r_pref, cplx r_top) {
    l << std::conj(l_pref * l_top), std::conj(l_pref * zeta);
    r << r_pref * r_top, r_pref * zeta;
  };
  if (d > 0.0) {
    const double sd = sqrt(d);
    s.branch = Branch::real;
    s.eps_plus = sd;
    s.eps_minus = -sd;
    const double lp = 1.0 / sqrt(2.0 * d);
    for (double sign : {+1.0, -1.0}) {
      const cplx rp = 1.0 / (std::numbers::sqrt2 * (sign * kI * u + sd));
      auto& l = sign > 0 ? s.l_plus : s.l_minus;
      auto& r = sign > 0 ? s.r_plus : s.r_minus;
      set(l, r, lp, kI * u - sign * sd, rp, -kI * u - sign * sd);
    }
  } else {
    const double sd = sqrt(-d);
    s.branch = Branch::imaginary;
    s.eps_plus = kI * sd;
    s.eps_minus = -kI * sd;
    if (!(u > 0.0)) throw BrokenBranchZeroU("broken branch requires u > 0");
    for (double sign : {+1.0, -1.0}) {
      const double lp = -sign * sqrt(u / (-2.0 * d * (u + sign * sd)));
      const double rp = 1.0 / sqrt(2.0 * u * (u + sign * sd));
      auto& l = sign > 0 ? s.l_plus : s.l_minus;
      auto& r = sign > 0 ? s.r_plus : s.r_minus;
      set(l, r, lp, kI * u + sign * kI * sd, rp, -kI * u - sign * kI * sd);
    }
  }
  return s;
}

double chi_k_metricized(double k, const SshParams& p) {
  if (std::abs(delta_k(k, p)) < tol_delta(p)) throw AtExceptionalMomentum(at_k(k));
  const SshParams q = unit_w(p);
  const double d = delta_k(k, q);
  // sin^2 k - u^2 + v2 (cos k - cos 3k) + v2^2 sin^2 2k, factored so that it
  // keeps its relative accuracy where it vanishes next to a small Delta_k.
  const double s = sin(k) + q.v2 * sin(2.0 * k);
  const double num = (s - q.u) * (s + q.u);
  return num / (4.0 * d * d) / (p.w * p.w);
}

double chi_k_rr(double k, const SshParams& p) {
  if (std::abs(delta_k(k, p)) < tol_delta(p)) throw AtExceptionalMomentum(at_k(k));
  const SshParams q = unit_w(p);
  const double d = delta_k(k, q);
  const double u = q.u, v1 = q.v1, v2 = q.v2;
  double chi = 0.0;
  if (d > 0.0) {
    const double sd = sqrt(d);
    const double omega =
        4.0 * sd * u * v1 * v2 * sin(2 * k) + 4.0 * sd * u * v1 * sin(k) +
        2.0 * sd * u * v2 * v2 * sin(4 * k) + 4.0 * sd * u * v2 * sin(3 * k) +
        2.0 * sd * u * sin(2 * k) +
        v2 * cos(4 * k) * (v2 * (-2 * u * u + v1 * v1 + 3) + 3 * v1 + v2 * v2 * v2) -
        cos(k) * (4 * u * u * v1 + 2 * v1 * v1 * v2 + 2 * v1 * v2 * v2 + v1 + 4 * v2 * v2 * v2 +
                  3 * v2) +
        cos(2 * k) * (-2 * u * u * (2 * v1 * v2 + 1) + v1 * v1 - v1 * v2 * (v2 * v2 + 2) +
                      v2 * v2 + 1) +
        cos(3 * k) * (v2 * (-4 * u * u + 2 * v1 * v1 + 3) - v1 * v2 * v2 + v1 + 3 * v2 * v2 * v2) -
        v1 * v1 * (2 * u * u + v2 * v2 + 1) + v1 * v2 * v2 * v2 * cos(6 * k) +
        v2 * v2 * cos(5 * k) * (3 * v1 + v2) - v1 * v2 - (v2 * v2 + 4) * v2 * v2 - 1;
    const double eta2 =
        2 * v1 * v2 * cos(2 * k) + 2 * cos(k) * (v1 + v2) + v1 * v1 + v2 * v2 + 1;
    chi = -omega / (8.0 * d * eta2 * eta2);
  } else {
    if (!(u > 0.0)) throw BrokenBranchZeroU("broken branch requires u > 0");
    const double upsilon =
        -(2 * u * u + v2 * (v2 * cos(4 * k) - 2 * cos(k) + 2 * cos(3 * k)) + cos(2 * k) -
          v2 * v2 - 1);
    chi = upsilon / (8.0 * d * u * u);
  }
  return chi / (p.w * p.w);
}

std::vector<double> momentum_grid(int L) {
  if (L < 1) throw std::invalid_argument("momentum grid needs L >= 1");
  std::vector<double> k(static_cast<std::size_t>(L));
  for (int m = 0; m < L; ++m) k[static_cast<std::size_t>(m)] = kTwoPi * m / L;
  return k;
}

ManyBodyFidelity many_body_fidelity(const SshParams& p, double v1_a, double v1_b) {
  validate(p);
  SshParams pa = p, pb = p;
  pa.v1 = v1_a;
  pb.v1 = v1_b;
  ManyBodyFidelity out;
  out.F = 1.0;
  const auto ks = momentum_grid(p.L);
  for (int m = 0; m < p.L; ++m) {
    const double k = ks[static_cast<std::size_t>(m)];
    SingleParticleStates a, b;
    try {
      a = single_particle_states(k, pa);
      b = single_particle_states(k, pb);
    } catch (const AtExceptionalMomentum& e) {
      throw AtExceptionalMomentum(std::string(e.what()) + " (m = " + std::to_string(m) + ")");
    }
    const StateOverlaps ov = state_overlaps(a.l_minus, a.r_minus, b.l_minus, b.r_minus);
    const cplx f = ov.la_rb * ov.lb_ra;
    out.f_k.push_back(f);
    out.F *= f;
    out.overlaps *= ov;
    if (a.branch != b.branch) out.crossing_m.push_back(m);
  }
  return out;
}

std::vector<double> chi_per_k(const SshParams& p) {
  validate(p);
  std::vector<double> out;
  for (double k : momentum_grid(p.L)) out.push_back(chi_k_metricized(k, p));
  return out;
}

double chi_total(const SshParams& p) {
  double s = 0.0;
  for (double c : chi_per_k(p)) s += c;
  return s;
}

double chi_total_rr(const SshParams& p) {
  validate(p);
  double s = 0.0;
  for (double k : momentum_grid(p.L)) s += chi_k_rr(k, p);
  return s;
}

int broken_momentum_count(const SshParams& p) {
  validate(p);
  int n = 0;
  for (double k : momentum_grid(p.L))
    if (delta_k(k, p) < -tol_delta(p)) ++n;
  return n;
}

PtClass ground_pt_class(const SshParams& p) {
  return broken_momentum_count(p) > 0 ? PtClass::broken : PtClass::unbroken;
}

cplx ground_energy(const SshParams& p) {
  validate(p);
  cplx e = 0.0;
  for (double k : momentum_grid(p.L)) e += band_point(k, p).eps_minus;
  return e;
}

namespace {

// Delta_k = a c^2 + b c + c0 with c = cos k.
struct CosQuadratic {
  double a, b, c0;
  [[nodiscard]] double operator()(double c) const { return (a * c + b) * c + c0; }
};

CosQuadratic cos_quadratic(const SshParams& p) {
  return {4.0 * p.v1 * p.v2, 2.0 * p.w * (p.v1 + p.v2),
          (p.v1 - p.v2) * (p.v1 - p.v2) + p.w * p.w - p.u * p.u};
}

std::vector<double> real_roots(const CosQuadratic& q) {
  const double scale = std::abs(q.a) + std::abs(q.b) + std::abs(q.c0);
  if (scale == 0.0) return {};
  if (std::abs(q.a) <= 1e-14 * scale) {
    if (std::abs(q.b) <= 1e-14 * scale) return {};
    return {-q.c0 / q.b};
  }
  const double disc = q.b * q.b - 4.0 * q.a * q.c0;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-q.b / (2.0 * q.a)};
  // Numerically stable pair.
  const double t = -0.5 * (q.b + std::copysign(sqrt(disc), q.b));
  std::vector<double> r;
  r.push_back(t / q.a);
  if (t != 0.0) r.push_back(q.c0 / t);
  return r;
}

}  // namespace

EPGeometry ep_momenta(const SshParams& p, int curve_samples) {
  if (!(p.w > 0.0)) throw std::invalid_argument("ssh: w must be positive");
  EPGeometry g;
  g.line_lower = p.w - p.u;
  g.line_upper = p.w + p.u;
  for (double c : real_roots(cos_quadratic(p))) {
    if (c < -1.0 - 1e-12 || c > 1.0 + 1e-12) continue;
    const double k1 = std::acos(std::clamp(c, -1.0, 1.0));
    g.k_ep.push_back(k1);
    const double k2 = kTwoPi - k1;
    if (std::abs(k2 - k1) > 1e-14 && k1 > 0.0) g.k_ep.push_back(k2);
  }
  std::sort(g.k_ep.begin(), g.k_ep.end());
  g.k_ep.erase(std::unique(g.k_ep.begin(), g.k_ep.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               g.k_ep.end());
  if (g.k_ep.size() == 2) g.L0 = kTwoPi / std::abs(g.k_ep[1] - g.k_ep[0]);

  // Double-root locus 4 v1 v2 ((v1 - v2)^2 + w^2 - u^2) = w^2 (v1 + v2)^2,
  // traced by scanning v2 for sign changes at each sampled v1.
  if (curve_samples > 0) {
    const double hi = 3.0 * p.w;
    auto gfun = [&](double v1, double v2) {
      return 4.0 * v1 * v2 * ((v1 - v2) * (v1 - v2) + p.w * p.w - p.u * p.u) -
             p.w * p.w * (v1 + v2) * (v1 + v2);
    };
    constexpr int kScan = 600;
    for (int i = 1; i <= curve_samples; ++i) {
      const double v1 = hi * i / curve_samples;
      double prev_v = hi / kScan, prev = gfun(v1, prev_v);
      for (int j = 2; j <= kScan; ++j) {
        const double v = hi * j / kScan, cur = gfun(v1, v);
        if ((prev < 0.0) != (cur < 0.0)) {
          double lo = prev_v, up = v;
          for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + up);
            ((gfun(v1, mid) < 0.0) == (prev < 0.0) ? lo : up) = mid;
          }
          g.discriminant_curve.emplace_back(v1, 0.5 * (lo + up));
        }
        prev = cur;
        prev_v = v;
      }
    }
  }
  return g;
}

double min_delta(const SshParams& p) {
  const CosQuadratic q = cos_quadratic(p);
  double m = std::min(q(-1.0), q(1.0));
  if (q.a > 0.0) {
    const double c = -q.b / (2.0 * q.a);
    if (c > -1.0 && c < 1.0) m = std::min(m, q(c));
  }
  return m;
}

bool thermodynamic_broken(const SshParams& p) { return min_delta(p) < 0.0; }

std::vector<CurvePoint> positive_divergence_curve(double v2, int samples) {
  // With w = 1 the numerator of chi_k is sin^2 k (1 + 2 v2 cos k)^2 - u^2 and,
  // on that locus, Delta_k = 0 has the double root v1 = -(cos k + v2 cos 2k).
  std::vector<CurvePoint> out;
  for (int i = 0; i < samples; ++i) {
    const double k = kTwoPi * i / samples;
    const double u = std::abs(sin(k) * (1.0 + 2.0 * v2 * cos(k)));
    out.push_back({k, -(cos(k) + v2 * cos(2.0 * k)), u});
  }
  return out;
}

std::vector<CurvePoint> golden_divergence_curve(int samples) {
  const double s5 = sqrt(5.0);
  const double phi = 0.5 * (1.0 + s5);
  std::vector<CurvePoint> out;
  for (int i = 0; i < samples; ++i) {
    const double k = kTwoPi * i / samples;
    const double v1 = -cos(k) - phi * cos(2.0 * k);
    const double rad =
        (4.0 + s5 + 2.0 * (1.0 + s5) * cos(k) + (3.0 + s5) * cos(2.0 * k)) * sin(k) * sin(k);
    out.push_back({k, v1, sqrt(std::max(rad, 0.0))});
  }
  return out;
}

CMatrix open_chain_matrix(const SshParams& p) {
  validate(p);
  const Index n = 2 * static_cast<Index>(p.L);
  CMatrix h = CMatrix::Zero(n, n);
  auto up = [](Index j) { return 2 * j; };
  auto dn = [](Index j) { return 2 * j + 1; };
  for (Index j = 0; j < p.L; ++j) {
    h(up(j), dn(j)) = h(dn(j), up(j)) = -p.w;
    h(up(j), up(j)) = kI * p.u;
    h(dn(j), dn(j)) = -kI * p.u;
    if (j + 1 < p.L) {
      h(up(j), dn(j + 1)) = h(dn(j + 1), up(j)) = -p.v1;
      h(dn(j), up(j + 1)) = h(up(j + 1), dn(j)) = -p.v2;
    }
  }
  return h;
}

OpenBoundaryReport open_boundary_spectrum(const SshParams& p, int edge_cells, double weight) {
  if (p.L < 4) throw std::invalid_argument("open chain needs L >= 4");
  const CMatrix h = open_chain_matrix(p);
  const auto eig = dense::eigen_right(h);
  const auto order = dense::order_by_real_then_imag(eig.values);
  OpenBoundaryReport rep;
  rep.spectrum.resize(eig.values.size());
  const Index cells = std::min<Index>(edge_cells, p.L / 2);
  const Index n = h.rows();
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    rep.spectrum[j] = eig.values[src];
    const Eigen::VectorXd prob = eig.vectors.col(src).cwiseAbs2() / eig.vectors.col(src).squaredNorm();
    const double left = prob.head(2 * cells).sum();
    const double right = prob.tail(2 * cells).sum();
    if (std::max(left, right) < weight) continue;
    BoundaryMode mode;
    mode.index = j;
    mode.energy = eig.values[src];
    mode.edge = left >= right ? Edge::left : Edge::right;
    mode.edge_weight = std::max(left, right);
    const Index start = mode.edge == Edge::left ? 0 : n - 2 * cells;
    double on_up = 0.0, on_dn = 0.0;
    for (Index i = start; i < start + 2 * cells; ++i) (i % 2 == 0 ? on_up : on_dn) += prob[i];
    mode.sublattice = on_up >= on_dn ? Sublattice::up : Sublattice::down;
    rep.modes.push_back(mode);
  }
  return rep;
}

}  // namespace ptfid::ssh
