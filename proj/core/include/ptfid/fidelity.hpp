#pragma once

#include "ptfid/biortho.hpp"
#include "ptfid/common.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ptfid {

enum class FidelityDefinition { metricized, rr, lr_half_sum, lr_sqrt_abs, lr_sqrt };

[[nodiscard]] std::string_view to_string(FidelityDefinition d) noexcept;
/// Accepts metricized, RR, LR-half-sum, LR-sqrt-abs, LR-sqrt (case-insensitive).
FidelityDefinition parse_definition(std::string_view s);

/// The four overlaps every fidelity definition is built from. Products over
/// independent factors (momenta) multiply component-wise.
struct StateOverlaps {
  cplx la_rb{1.0, 0.0};  // <L_a|R_b>
  cplx lb_ra{1.0, 0.0};  // <L_b|R_a>
  cplx ra_rb{1.0, 0.0};  // <R_a|R_b>, conjugating

  StateOverlaps& operator*=(const StateOverlaps& o) {
    la_rb *= o.la_rb;
    lb_ra *= o.lb_ra;
    ra_rb *= o.ra_rb;
    return *this;
  }
};

/// Left arguments are covectors (<L|v> = l^T v), right arguments kets.
StateOverlaps state_overlaps(const CVector& l_a, const CVector& r_a, const CVector& l_b,
                             const CVector& r_b);

cplx fidelity_from_overlaps(FidelityDefinition d, const StateOverlaps& ov);

cplx metricized_fidelity(const CVector& l_a, const CVector& r_a, const CVector& l_b,
                         const CVector& r_b);
cplx fidelity_variant(FidelityDefinition d, const CVector& l_a, const CVector& r_a,
                      const CVector& l_b, const CVector& r_b);

struct FidelityRecord {
  double lambda = 0.0;
  double epsilon = 0.0;
  cplx F{1.0, 0.0};
  cplx chi_fd{0.0, 0.0};
  FidelityDefinition definition = FidelityDefinition::metricized;
  PtClass pt_a = PtClass::unbroken;
  PtClass pt_b = PtClass::unbroken;
};

/// (1 - F) / eps^2.
cplx chi_finite_difference(cplx F, double epsilon);

/// sum_{n != g} <L_g|V|R_n><L_n|V|R_g> / (E_g - E_n)^2
cplx chi_perturbative(const BiorthogonalEigensystem& es, const CMatrix& v, Index ground,
                      double degeneracy_guard = 1e-12);
/// Same sum with first-power denominators.
cplx second_order_energy(const BiorthogonalEigensystem& es, const CMatrix& v, Index ground,
                         double degeneracy_guard = 1e-12);
/// Susceptibility of |<R_a|R_b>|^2 for self-normalized right vectors.
cplx chi_rr_perturbative(const BiorthogonalEigensystem& es, const CMatrix& v, Index ground,
                         double degeneracy_guard = 1e-12);

/// (chi + chi_partner) / 2 after checking chi_partner = conj(chi) to
/// `tol * max(1, |chi|)`.
double chi_real_part(cplx chi, cplx chi_partner, double tol = 1e-9);

struct OneHalfOptions {
  std::vector<double> schedule{1e-2, 1e-3, 1e-4};
  double a = 0.5;  // endpoints center - a*eps and center + b*eps
  double b = 0.5;
  double tol_half = 5e-3;
  int max_order = 8;
};

struct OneHalfResult {
  bool is_second_order = false;
  int n_crossings = 0;  // n with Re F ~ (1/2)^n, 0 if none matched
  bool converging = false;
  double lambda_center = 0.0;
  std::vector<double> epsilons;
  std::vector<cplx> F_trace;
  std::vector<double> ReF_trace;
};

/// Fidelity between two parameter values plus the PT class at one value.
struct FidelityProbe {
  std::function<cplx(double, double)> fidelity;
  std::function<PtClass(double)> label;
};

struct EndpointState {
  CVector left;
  CVector right;
  PtClass pt = PtClass::unbroken;
};
using EndpointFn = std::function<EndpointState(double)>;

/// Evaluates Re F across a bracketed PT transition for each step in the
/// schedule. The bracket should be much narrower than the steps.
OneHalfResult one_half_ep_test(const FidelityProbe& probe, double lambda_lo, double lambda_hi,
                               const OneHalfOptions& opt = {});
OneHalfResult one_half_ep_test(const EndpointFn& state, double lambda_lo, double lambda_hi,
                               const OneHalfOptions& opt = {});

}  // namespace ptfid
