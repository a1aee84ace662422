#include "ptfid/fidelity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ptfid {

std::string_view to_string(FidelityDefinition d) noexcept {
  switch (d) {
    case FidelityDefinition::metricized: return "metricized";
    case FidelityDefinition::rr: return "RR";
    case FidelityDefinition::lr_half_sum: return "LR-half-sum";
    case FidelityDefinition::lr_sqrt_abs: return "LR-sqrt-abs";
    case FidelityDefinition::lr_sqrt: return "LR-sqrt";
  }
  return "metricized";
}

FidelityDefinition parse_definition(std::string_view s) {
  std::string low(s);
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto d : {FidelityDefinition::metricized, FidelityDefinition::rr,
                 FidelityDefinition::lr_half_sum, FidelityDefinition::lr_sqrt_abs,
                 FidelityDefinition::lr_sqrt}) {
    std::string name(to_string(d));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (name == low) return d;
  }
  throw ConfigError("unknown fidelity definition '" + std::string(s) + "'");
}

StateOverlaps state_overlaps(const CVector& l_a, const CVector& r_a, const CVector& l_b,
                             const CVector& r_b) {
  const Index n = r_a.size();
  if (l_a.size() != n || l_b.size() != n || r_b.size() != n)
    throw DimensionMismatch("fidelity: state dimensions differ");
  return {bilinear(l_a, r_b), bilinear(l_b, r_a), inner(r_a, r_b)};
}

cplx fidelity_from_overlaps(FidelityDefinition d, const StateOverlaps& ov) {
  const cplx f = ov.la_rb * ov.lb_ra;
  switch (d) {
    case FidelityDefinition::metricized: return f;
    case FidelityDefinition::rr: return std::norm(ov.ra_rb);
    // <R_a|L_b> is the conjugate of <L_b|R_a>.
    case FidelityDefinition::lr_half_sum: return 0.5 * std::abs(ov.la_rb + std::conj(ov.lb_ra));
    case FidelityDefinition::lr_sqrt_abs: return std::sqrt(std::abs(f));
    case FidelityDefinition::lr_sqrt: return std::sqrt(f);
  }
  return f;
}

cplx metricized_fidelity(const CVector& l_a, const CVector& r_a, const CVector& l_b,
                         const CVector& r_b) {
  return fidelity_from_overlaps(FidelityDefinition::metricized,
                                state_overlaps(l_a, r_a, l_b, r_b));
}

cplx fidelity_variant(FidelityDefinition d, const CVector& l_a, const CVector& r_a,
                      const CVector& l_b, const CVector& r_b) {
  return fidelity_from_overlaps(d, state_overlaps(l_a, r_a, l_b, r_b));
}

cplx chi_finite_difference(cplx F, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return (1.0 - F) / (epsilon * epsilon);
}

namespace {

struct Couplings {
  CVector to_ground;    // <L_n|V|R_g>
  CVector from_ground;  // <L_g|V|R_n>
  CVector gap;          // E_g - E_n, zero at n = g
};

Couplings couplings(const BiorthogonalEigensystem& es, const CMatrix& v, Index g,
                    double guard) {
  const Index n = es.dim();
  if (v.rows() != n || v.cols() != n) throw DimensionMismatch("perturbation has wrong size");
  if (g < 0 || g >= n) throw std::out_of_range("ground index out of range");
  Couplings c;
  c.to_ground = es.left.transpose() * (v * es.right.col(g));
  c.from_ground = es.right.transpose() * (v.transpose() * es.left.col(g));
  c.gap = es.eigenvalues[g] - es.eigenvalues.array();
  for (Index m = 0; m < n; ++m) {
    if (m != g && std::abs(c.gap[m]) < guard)
      throw DegenerateDenominator("|E_0 - E_" + std::to_string(m) +
                                  "| = " + std::to_string(std::abs(c.gap[m])));
  }
  c.gap[g] = 0.0;
  return c;
}

}  // namespace

cplx chi_perturbative(const BiorthogonalEigensystem& es, const CMatrix& v, Index ground,
                      double degeneracy_guard) {
  const Couplings c = couplings(es, v, ground, degeneracy_guard);
  cplx sum = 0.0;
  for (Index m = 0; m < es.dim(); ++m) {
    if (m == ground) continue;
    sum += c.from_ground[m] * c.to_ground[m] / (c.gap[m] * c.gap[m]);
  }
  return sum;
}

cplx second_order_energy(const BiorthogonalEigensystem& es, const CMatrix& v, Index ground,
                         double degeneracy_guard) {
  const Couplings c = couplings(es, v, ground, degeneracy_guard);
  cplx sum = 0.0;
  for (Index m = 0; m < es.dim(); ++m) {
    if (m == ground) continue;
    sum += c.from_ground[m] * c.to_ground[m] / c.gap[m];
  }
  return sum;
}

cplx chi_rr_perturbative(const BiorthogonalEigensystem& es, const CMatrix& v, Index ground,
                         double degeneracy_guard) {
  const Couplings c = couplings(es, v, ground, degeneracy_guard);
  CVector a = CVector::Zero(es.dim());
  for (Index m = 0; m < es.dim(); ++m)
    if (m != ground) a[m] = c.to_ground[m] / c.gap[m];
  const CVector ra = es.right * a;
  // a^H S a - |(S a)_g|^2 with S the Gram matrix of right vectors.
  return ra.squaredNorm() - std::norm(es.right.col(ground).dot(ra));
}

double chi_real_part(cplx chi, cplx chi_partner, double tol) {
  const double scale = std::max(1.0, std::abs(chi));
  if (std::abs(chi_partner - std::conj(chi)) > tol * scale)
    throw PartnerMismatch("partner susceptibility differs from conj(chi) by " +
                          std::to_string(std::abs(chi_partner - std::conj(chi))));
  return 0.5 * (chi + chi_partner).real();
}

OneHalfResult one_half_ep_test(const FidelityProbe& probe, double lambda_lo, double lambda_hi,
                               const OneHalfOptions& opt) {
  if (!(opt.a > 0.0) || !(opt.b > 0.0)) throw std::invalid_argument("one-half test: a, b > 0");
  if (opt.schedule.empty()) throw std::invalid_argument("one-half test: empty schedule");
  if (probe.label(lambda_lo) == probe.label(lambda_hi))
    throw NoTransition("both bracket ends are " + std::string(to_string(probe.label(lambda_lo))));
  OneHalfResult res;
  res.lambda_center = 0.5 * (lambda_lo + lambda_hi);
  for (double eps : opt.schedule) {
    const cplx f = probe.fidelity(res.lambda_center - opt.a * eps, res.lambda_center + opt.b * eps);
    res.epsilons.push_back(eps);
    res.F_trace.push_back(f);
    res.ReF_trace.push_back(f.real());
  }
  const double last = res.ReF_trace.back();
  for (int n = 1; n <= opt.max_order; ++n) {
    const double target = std::pow(0.5, n);
    if (std::abs(last / target - 1.0) < 2.0 * opt.tol_half) {
      res.n_crossings = n;
      res.converging = std::abs(last - target) <= std::abs(res.ReF_trace.front() - target) + 1e-12;
      break;
    }
  }
  res.is_second_order = res.n_crossings == 1;
  return res;
}

OneHalfResult one_half_ep_test(const EndpointFn& state, double lambda_lo, double lambda_hi,
                               const OneHalfOptions& opt) {
  FidelityProbe probe;
  probe.fidelity = [&](double x, double y) {
    const EndpointState a = state(x);
    const EndpointState b = state(y);
    return metricized_fidelity(a.left, a.right, b.left, b.right);
  };
  probe.label = [&](double x) { return state(x).pt; };
  return one_half_ep_test(probe, lambda_lo, lambda_hi, opt);
}

}  // namespace ptfid
