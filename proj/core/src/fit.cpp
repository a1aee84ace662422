#include "ptfid/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ptfid::fit {

PolyFit polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  if (x.size() != y.size()) throw std::invalid_argument("polyfit: size mismatch");
  if (degree < 0 || x.size() < static_cast<std::size_t>(degree) + 1)
    throw std::invalid_argument("polyfit: too few points for degree " + std::to_string(degree));
  const auto n = static_cast<Index>(x.size());
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      a(i, d) = p;
      p *= x[static_cast<std::size_t>(i)];
    }
    b[i] = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  PolyFit out;
  out.coeffs.assign(c.data(), c.data() + c.size());
  out.intercept = c[0];
  out.residual = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(n));
  return out;
}

PolyFit extrapolate_in_inverse_size(const std::vector<int>& sizes,
                                    const std::vector<double>& values, int degree) {
  if (sizes.size() < 3)
    throw InsufficientSizes("extrapolation needs at least 3 sizes, got " +
                            std::to_string(sizes.size()));
  std::vector<double> x;
  for (int L : sizes) x.push_back(1.0 / L);
  const int deg = std::min(degree, static_cast<int>(sizes.size()) - 1);
  return polyfit(x, values, deg);
}

Peak locate_peak(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || x.size() != y.size()) throw std::invalid_argument("locate_peak: bad input");
  const auto it = std::max_element(y.begin(), y.end());
  Peak p;
  p.index = static_cast<std::size_t>(it - y.begin());
  p.position = x[p.index];
  p.height = *it;
  if (p.index == 0 || p.index + 1 == y.size()) return p;
  const double x0 = x[p.index - 1], x1 = x[p.index], x2 = x[p.index + 1];
  const double y0 = y[p.index - 1], y1 = y[p.index], y2 = y[p.index + 1];
  // Vertex of the interpolating parabola (divided differences).
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double c2 = (d12 - d01) / (x2 - x0);
  if (!(c2 < 0.0)) return p;
  const double c1 = d01 - c2 * (x0 + x1);
  const double xv = -c1 / (2.0 * c2);
  if (xv < x0 || xv > x2) return p;
  p.position = xv;
  p.height = y0 + d01 * (xv - x0) + c2 * (xv - x0) * (xv - x1);
  return p;
}

std::vector<double> loglog_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_slopes: size mismatch");
  std::vector<double> s;
  for (std::size_t i = 1; i < x.size(); ++i)
    s.push_back((std::log(y[i]) - std::log(y[i - 1])) / (std::log(x[i]) - std::log(x[i - 1])));
  return s;
}

Bracket bisect_transition(const std::function<PtClass(double)>& label, double lo, double hi,
                          double width) {
  const PtClass at_lo = label(lo);
  if (at_lo == label(hi)) throw NoTransition("bracket ends share a PT class");
  Bracket b{lo, hi};
  while (std::abs(b.hi - b.lo) > width) {
    const double m = b.mid();
    if (m == b.lo || m == b.hi) break;
    (label(m) == at_lo ? b.lo : b.hi) = m;
  }
  return b;
}

}  // namespace ptfid::fit
