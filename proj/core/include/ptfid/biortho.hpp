#pragma once

#include "ptfid/common.hpp"

#include <vector>

namespace ptfid {

struct EigOptions {
  double tol_pair_rel = 1e-8;  // eigenvalue matching, relative to spectral scale
  double ep_guard = 1e-12;     // smallest acceptable raw |<L|R>|
  double rank_guard = 1e-6;    // relative singular value floor inside a degenerate cluster
  // Degenerate clusters are normally rejected as AmbiguousPairing. When set,
  // the cluster is biorthogonalized by a local change of basis instead.
  bool allow_degenerate = false;
};

/// Left covectors are stored as columns c with <L|v> = c^T v.
struct BiorthogonalEigensystem {
  CVector eigenvalues;   // sorted by (Re, Im)
  CMatrix right;         // columns, unit 2-norm, gauge fixed
  CMatrix left;          // columns, left.col(n)^T right.col(m) = delta_nm
  Eigen::VectorXd condition;  // raw |<L_n|R_n>| of unit vectors

  [[nodiscard]] Index dim() const { return eigenvalues.size(); }
  [[nodiscard]] CVector right_vector(Index n) const { return right.col(n); }
  [[nodiscard]] CVector left_vector(Index n) const { return left.col(n); }
};

BiorthogonalEigensystem biorthogonal_eig(const CMatrix& h, const EigOptions& opt = {});

struct PTClassification {
  std::vector<Index> real_indices;
  std::vector<Index> pair_map;  // partner index, or -1 for real eigenvalues
  double tol_real = 0.0;
  double tol_pair = 0.0;

  [[nodiscard]] bool is_real(Index n) const { return pair_map[static_cast<std::size_t>(n)] < 0; }
  [[nodiscard]] PtClass pt_class(Index n) const {
    return is_real(n) ? PtClass::unbroken : PtClass::broken;
  }
};

PTClassification classify_pt(const CVector& eigenvalues, double tol_real, double tol_pair);
inline PTClassification classify_pt(const BiorthogonalEigensystem& es, double tol_real,
                                    double tol_pair) {
  return classify_pt(es.eigenvalues, tol_real, tol_pair);
}

Index pt_partner_state(const PTClassification& cls, Index n);

/// G = sum_n |L_n><L_n|, Hermitian positive definite for a complete system.
CMatrix metric_operator(const BiorthogonalEigensystem& es);

/// All eigenvalues sorted by (Re, Im).
CVector dense_full_spectrum(const CMatrix& h);

/// Smallest Re; within `tie_tol` of it, the largest Im wins.
Index select_ground(const CVector& eigenvalues, double tie_tol = 1e-9);

/// max |E| or the mean row norm, whichever is larger; never zero.
double spectral_scale(const CMatrix& h, const CVector& eigenvalues);

}  // namespace ptfid
