#pragma once

#include "ptfid/common.hpp"
#include "ptfid/fidelity.hpp"

#include <optional>
#include <vector>

namespace ptfid::ssh {

/// Two-leg ladder with gain/loss iu on the up/down leg, intra-cell hopping w
/// and inter-cell hoppings v1 (up_j to down_{j+1}) and v2 (down_j to up_{j+1}).
struct SshParams {
  double w = 1.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double u = 0.0;
  int L = 101;
};

void validate(const SshParams& p);

/// [[iu, eta], [conj(eta), -iu]] with eta = -w - v1 e^{-ik} - v2 e^{ik}.
CMatrix bloch_matrix(double k, const SshParams& p);
/// d H_k / d v1.
CMatrix perturbation_v1(double k);

double delta_k(double k, const SshParams& p);
/// Scale-relative threshold below which |Delta_k| marks an exceptional momentum.
double tol_delta(const SshParams& p);

enum class Branch { real, imaginary, exceptional };

struct BandPoint {
  double k = 0.0;
  cplx eta;
  double delta = 0.0;
  cplx eps_plus;
  cplx eps_minus;
  Branch branch = Branch::real;
};

BandPoint band_point(double k, const SshParams& p);

/// Closed-form eigenvectors. Left entries are covectors (<L|v> = l^T v).
struct SingleParticleStates {
  Branch branch = Branch::real;
  cplx eps_plus;
  cplx eps_minus;
  CVector l_plus, r_plus, l_minus, r_minus;
};

SingleParticleStates single_particle_states(double k, const SshParams& p);

/// Per-momentum metricized susceptibility along v1.
double chi_k_metricized(double k, const SshParams& p);
/// Per-momentum right-right susceptibility along v1.
double chi_k_rr(double k, const SshParams& p);

/// k_m = 2 pi m / L, m = 0..L-1.
std::vector<double> momentum_grid(int L);

struct ManyBodyFidelity {
  cplx F;                      // metricized product over the filled band
  StateOverlaps overlaps;      // product overlaps, for the other definitions
  std::vector<cplx> f_k;       // per-momentum metricized factors
  std::vector<int> crossing_m; // momenta whose branch differs between the two points
};

/// Fidelity of the half-filled ground states at v1_a and v1_b, other
/// parameters from `p`.
ManyBodyFidelity many_body_fidelity(const SshParams& p, double v1_a, double v1_b);

std::vector<double> chi_per_k(const SshParams& p);
double chi_total(const SshParams& p);
double chi_total_rr(const SshParams& p);

/// Number of grid momenta with Delta_k < 0.
int broken_momentum_count(const SshParams& p);
PtClass ground_pt_class(const SshParams& p);
cplx ground_energy(const SshParams& p);

struct EPGeometry {
  std::vector<double> k_ep;         // sorted in [0, 2 pi)
  std::optional<double> L0;         // 2 pi / |k_2 - k_1| for exactly two roots
  double line_lower = 0.0;          // v1 + v2 = w - u
  double line_upper = 0.0;          // v1 + v2 = w + u
  std::vector<std::pair<double, double>> discriminant_curve;  // (v1, v2) at this u
};

/// Real roots of Delta_k = 0, solved as a quadratic in cos k.
EPGeometry ep_momenta(const SshParams& p, int curve_samples = 0);

/// min over continuous k of Delta_k.
double min_delta(const SshParams& p);
/// Some momentum of the infinite chain has complex energy.
bool thermodynamic_broken(const SshParams& p);

struct CurvePoint {
  double k;
  double v1;
  double u;
};

/// (v1, u) where both the numerator of chi_k and Delta_k vanish, w = 1.
std::vector<CurvePoint> positive_divergence_curve(double v2, int samples);
/// The closed parametric form for v2 = (1 + sqrt 5) / 2.
std::vector<CurvePoint> golden_divergence_curve(int samples);

enum class Sublattice { up, down };
enum class Edge { left, right };

struct BoundaryMode {
  Index index = 0;
  cplx energy;
  double edge_weight = 0.0;
  Edge edge = Edge::left;
  Sublattice sublattice = Sublattice::up;
};

struct OpenBoundaryReport {
  CVector spectrum;  // sorted by (Re, Im)
  std::vector<BoundaryMode> modes;
};

/// Orbital (j, up) is 2j and (j, down) is 2j + 1.
CMatrix open_chain_matrix(const SshParams& p);
/// A state is a boundary mode when at least `weight` of |R|^2 sits in the
/// `edge_cells` outermost unit cells at one end.
OpenBoundaryReport open_boundary_spectrum(const SshParams& p, int edge_cells = 4,
                                          double weight = 0.9);

enum class BerryMethod { numeric, analytic_v2_zero };

struct BerryOptions {
  int n_k = 4096;
  bool richardson = true;
};

/// Complex Berry phase of band +1 or -1. The real part is reported in
/// [-pi/2, 3pi/2) so that 0 and pi both sit away from the cut.
cplx complex_berry_phase(const SshParams& p, int band, BerryMethod method,
                         const BerryOptions& opt = {});

double elliptic_k(double y);
double elliptic_pi(double x, double y);

}  // namespace ptfid::ssh
