#pragma once

#include "ptfid/config.hpp"

#include <map>
#include <string>
#include <vector>

namespace ptfid {

struct SweepRecord {
  std::string model;
  int L = 0;
  std::vector<double> axis_values;  // same order as SweepResult::axis_names
  double epsilon = 0.0;
  std::string definition;
  double re_F = 0.0;
  double im_F = 0.0;
  double re_chi = 0.0;
  double im_chi = 0.0;
  double re_chi_density = 0.0;
  std::string pt_class_a;
  std::string pt_class_b;
  std::string ep_flag = "none";  // none | divergent | straddle | half
  std::string error;             // "Kind: message" when the point failed

  bool operator==(const SweepRecord&) const;
};

struct EpCandidate {
  int L = 0;
  std::vector<double> axis_values;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double re_F = 0.0;
  int order = 0;  // n with Re F ~ (1/2)^n, 0 if none
  bool second_order = false;
  bool operator==(const EpCandidate&) const;
};

struct PeakEntry {
  int L = 0;
  std::string axis;
  std::vector<double> slice;  // values of the remaining axes
  double position = 0.0;
  double height = 0.0;
  bool operator==(const PeakEntry&) const;
};

struct FitEntry {
  std::string axis;
  std::vector<double> slice;
  int degree = 0;
  double intercept = 0.0;
  double residual = 0.0;
  std::vector<double> coeffs;
  bool operator==(const FitEntry&) const;
};

struct Provenance {
  std::string toolkit_version;
  std::string config_echo;
  std::map<std::string, std::string> settings;
  bool operator==(const Provenance&) const = default;
};

struct SweepResult {
  int schema_version = 1;
  std::string model;
  std::vector<std::string> axis_names;
  std::vector<SweepRecord> records;
  std::vector<EpCandidate> ep_candidates;
  std::vector<PeakEntry> peaks;
  std::vector<FitEntry> fits;
  Provenance provenance;
  bool operator==(const SweepResult&) const = default;
};

/// Evaluates every grid point (in parallel when cfg.threads != 1). Point
/// failures are recorded in-band; output order follows the grid, never the
/// completion order.
SweepResult run_sweep(SweepConfig cfg);

/// Reads {"re": [[...]], "im": [[...]]} (im optional) as a square matrix.
CMatrix load_matrix_json(const std::string& path);

}  // namespace ptfid
