#pragma once

#include "ptfid/common.hpp"

#include <functional>
#include <vector>

namespace ptfid::fit {

struct PolyFit {
  std::vector<double> coeffs;  // constant term first
  double intercept = 0.0;
  double residual = 0.0;       // root-mean-square
};

PolyFit polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);

/// Least-squares polynomial in 1/L. Needs at least three sizes, and at least
/// degree + 1 of them; the degree is lowered when the sizes are fewer.
PolyFit extrapolate_in_inverse_size(const std::vector<int>& sizes,
                                    const std::vector<double>& values, int degree);

struct Peak {
  std::size_t index = 0;
  double position = 0.0;
  double height = 0.0;
};

/// Maximum of sampled data refined by a parabola through its neighbours.
Peak locate_peak(const std::vector<double>& x, const std::vector<double>& y);

/// Slopes d log y / d log x between consecutive samples.
std::vector<double> loglog_slopes(const std::vector<double>& x, const std::vector<double>& y);

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
};

/// Shrinks [lo, hi] to `width` keeping label(lo) != label(hi).
Bracket bisect_transition(const std::function<PtClass(double)>& label, double lo, double hi,
                          double width);

}  // namespace ptfid::fit
