#pragma once

#include "ptfid/fidelity.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ptfid {

struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  /// Evenly spaced, endpoints included.
  [[nodiscard]] std::vector<double> values() const;
  bool operator==(const Axis&) const = default;
};

struct SweepConfig {
  std::string model = "ssh";  // ssh | xxz | dense-file
  std::map<std::string, double> fixed;
  std::vector<Axis> axes;
  std::string direction;  // perturbed parameter; defaults per model
  double epsilon = 1e-3;
  FidelityDefinition definition = FidelityDefinition::metricized;
  std::vector<int> sizes;
  std::string output;
  std::string format = "csv";
  int threads = 1;
  std::uint64_t seed = 12345;
  double tol_real = 1e-10;  // relative to the model's norm estimate
  double divergence_floor = -1e4;
  int fit_degree = 2;
  bool track = false;
  std::string h0_path;  // dense-file model
  std::string v_path;
  std::string source_text;  // the config file as read, echoed into provenance
};

/// Parses flat `key = value` lines grouped under [sweep], [params], [axes]
/// and [output]. Axis lines read `name = start, stop, count`.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::string& path);

/// Fills model defaults and throws ConfigError on anything inconsistent.
void validate(SweepConfig& cfg);

/// "x" or "start:stop:count".
Axis parse_axis_spec(const std::string& name, const std::string& spec);

}  // namespace ptfid
