#include "ptfid/sweep.hpp"

#include "ptfid/biortho.hpp"
#include "ptfid/fit.hpp"
#include "ptfid/ssh.hpp"
#include "ptfid/xxz.hpp"

#include <json.hpp>

#include <atomic>
#include <charconv>
#include <limits>
#include <map>
#include <memory>
#include <cmath>
#include <fstream>
#include <optional>
#include <thread>

namespace ptfid {

namespace {

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool SweepRecord::operator==(const SweepRecord& o) const {
  return model == o.model && L == o.L && same(axis_values, o.axis_values) &&
         same(epsilon, o.epsilon) && definition == o.definition && same(re_F, o.re_F) &&
         same(im_F, o.im_F) && same(re_chi, o.re_chi) && same(im_chi, o.im_chi) &&
         same(re_chi_density, o.re_chi_density) && pt_class_a == o.pt_class_a &&
         pt_class_b == o.pt_class_b && ep_flag == o.ep_flag && error == o.error;
}

bool EpCandidate::operator==(const EpCandidate& o) const {
  return L == o.L && same(axis_values, o.axis_values) && same(lambda_a, o.lambda_a) &&
         same(lambda_b, o.lambda_b) && same(re_F, o.re_F) && order == o.order &&
         second_order == o.second_order;
}

bool PeakEntry::operator==(const PeakEntry& o) const {
  return L == o.L && axis == o.axis && same(slice, o.slice) && same(position, o.position) &&
         same(height, o.height);
}

bool FitEntry::operator==(const FitEntry& o) const {
  return axis == o.axis && same(slice, o.slice) && degree == o.degree &&
         same(intercept, o.intercept) && same(residual, o.residual) && same(coeffs, o.coeffs);
}

CMatrix load_matrix_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open matrix file '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("matrix file '" + path + "': " + e.what());
  }
  if (!j.contains("re") || !j["re"].is_array())
    throw ConfigError("matrix file '" + path + "' lacks an 're' array");
  const auto& re = j["re"];
  const auto n = static_cast<Index>(re.size());
  CMatrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const auto& row = re[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw ConfigError("matrix file '" + path + "' is not square");
    for (Index c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  if (j.contains("im")) {
    const auto& im = j["im"];
    if (!im.is_array() || static_cast<Index>(im.size()) != n)
      throw ConfigError("matrix file '" + path + "': 'im' has the wrong shape");
    for (Index r = 0; r < n; ++r) {
      const auto& row = im[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != n)
        throw ConfigError("matrix file '" + path + "': 'im' has the wrong shape");
      for (Index c = 0; c < n; ++c)
        m(r, c) += cplx(0.0, row[static_cast<std::size_t>(c)].get<double>());
    }
  }
  return m;
}

namespace {

struct Point {
  int L = 0;
  std::vector<double> values;
};

double param(const SweepConfig& cfg, const Point& pt, const std::string& name, double dflt) {
  for (std::size_t i = 0; i < cfg.axes.size(); ++i)
    if (cfg.axes[i].name == name) return pt.values[i];
  const auto it = cfg.fixed.find(name);
  return it == cfg.fixed.end() ? dflt : it->second;
}

struct Evaluation {
  SweepRecord rec;
  int crossings = -1;  // known number of crossing factors, -1 if unknown
  std::optional<CVector> vector;  // ground vector for tracking
};

struct DenseModel {
  CMatrix h0;
  CMatrix v;
};

struct DenseGround {
  CVector left, right;
  PtClass pt;
};

DenseGround dense_ground(const DenseModel& m, double lam, double tol_real_rel) {
  const CMatrix h = m.h0 + lam * m.v;
  EigOptions eo;
  eo.allow_degenerate = true;
  const auto es = biorthogonal_eig(h, eo);
  const Index g = select_ground(es.eigenvalues);
  const double tol = tol_real_rel * spectral_scale(h, es.eigenvalues);
  return {es.left.col(g), es.right.col(g),
          std::abs(es.eigenvalues[g].imag()) < tol ? PtClass::unbroken : PtClass::broken};
}

void fill_values(SweepRecord& r, cplx F, cplx chi, double size) {
  r.re_F = F.real();
  r.im_F = F.imag();
  r.re_chi = chi.real();
  r.im_chi = chi.imag();
  r.re_chi_density = chi.real() / size;
}

Evaluation evaluate(const SweepConfig& cfg, const Point& pt, const DenseModel* dense,
                    const std::optional<CVector>& seed) {
  Evaluation ev;
  SweepRecord& r = ev.rec;
  r.model = cfg.model;
  r.L = pt.L;
  r.axis_values = pt.values;
  r.epsilon = cfg.epsilon;
  r.definition = std::string(to_string(cfg.definition));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.re_F = r.im_F = r.re_chi = r.im_chi = r.re_chi_density = nan;
  try {
    if (cfg.model == "ssh") {
      ssh::SshParams p;
      p.w = param(cfg, pt, "w", 1.0);
      p.v1 = param(cfg, pt, "v1", 0.0);
      p.v2 = param(cfg, pt, "v2", 0.0);
      p.u = param(cfg, pt, "u", 0.0);
      p.L = pt.L;
      ssh::SshParams pb = p;
      pb.v1 = p.v1 + cfg.epsilon;
      r.pt_class_a = std::string(to_string(ssh::ground_pt_class(p)));
      r.pt_class_b = std::string(to_string(ssh::ground_pt_class(pb)));
      const auto mb = ssh::many_body_fidelity(p, p.v1, pb.v1);
      const cplx F = fidelity_from_overlaps(cfg.definition, mb.overlaps);
      cplx chi;
      if (cfg.definition == FidelityDefinition::metricized) chi = ssh::chi_total(p);
      else if (cfg.definition == FidelityDefinition::rr) chi = ssh::chi_total_rr(p);
      else chi = chi_finite_difference(F, cfg.epsilon);
      fill_values(r, F, chi, p.L);
      ev.crossings = static_cast<int>(mb.crossing_m.size());
    } else if (cfg.model == "xxz") {
      xxz::XxzParams p;
      p.Jz = param(cfg, pt, "Jz", 1.0);
      p.gamma = param(cfg, pt, "gamma", 0.0);
      p.L = pt.L;
      const auto dir = cfg.direction == "Jz" ? xxz::Direction::Jz : xxz::Direction::gamma;
      const double lam = dir == xxz::Direction::Jz ? p.Jz : p.gamma;
      LanczosOptions lo;
      lo.seed = cfg.seed;
      const auto a = xxz::ground_state(p, lo, seed);
      const auto b = xxz::ground_state(xxz::shifted(p, dir, lam + cfg.epsilon), lo, a.right);
      const double tol_a = cfg.tol_real * xxz::norm_estimate(p);
      const double tol_b = cfg.tol_real * xxz::norm_estimate(xxz::shifted(p, dir, lam + cfg.epsilon));
      r.pt_class_a = std::string(to_string(std::abs(a.energy.imag()) < tol_a ? PtClass::unbroken : PtClass::broken));
      r.pt_class_b = std::string(to_string(std::abs(b.energy.imag()) < tol_b ? PtClass::unbroken : PtClass::broken));
      const cplx F = fidelity_variant(cfg.definition, a.left, a.right, b.left, b.right);
      fill_values(r, F, chi_finite_difference(F, cfg.epsilon), p.L);
      ev.vector = a.right;
    } else {
      const double lam = param(cfg, pt, "lambda", 0.0);
      const auto a = dense_ground(*dense, lam, cfg.tol_real);
      const auto b = dense_ground(*dense, lam + cfg.epsilon, cfg.tol_real);
      r.pt_class_a = std::string(to_string(a.pt));
      r.pt_class_b = std::string(to_string(b.pt));
      const cplx F = fidelity_variant(cfg.definition, a.left, a.right, b.left, b.right);
      fill_values(r, F, chi_finite_difference(F, cfg.epsilon), static_cast<double>(dense->h0.rows()));
    }
  } catch (const Error& e) {
    r.error = std::string(e.kind()) + ": " + e.what();
  } catch (const std::exception& e) {
    r.error = std::string("Error: ") + e.what();
  }
  return ev;
}

int half_order(double re_F, double tol_half = 5e-3) {
  for (int n = 1; n <= 8; ++n)
    if (std::abs(re_F / std::pow(0.5, n) - 1.0) < 2.0 * tol_half) return n;
  return 0;
}

std::string format_setting(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

SweepResult run_sweep(SweepConfig cfg) {
  validate(cfg);
  std::unique_ptr<DenseModel> dense;
  if (cfg.model == "dense-file") {
    dense = std::make_unique<DenseModel>();
    dense->h0 = load_matrix_json(cfg.h0_path);
    dense->v = load_matrix_json(cfg.v_path);
    if (dense->h0.rows() != dense->v.rows())
      throw ConfigError("h0 and v have different dimensions");
    cfg.sizes = {static_cast<int>(dense->h0.rows())};
  }

  SweepResult res;
  res.model = cfg.model;
  for (const auto& a : cfg.axes) res.axis_names.push_back(a.name);

  // Grid in row-major order: the first axis varies slowest, sizes outermost.
  std::vector<std::vector<double>> axis_vals;
  std::size_t per_size = 1;
  for (const auto& a : cfg.axes) {
    axis_vals.push_back(a.values());
    per_size *= axis_vals.back().size();
  }
  std::vector<Point> points;
  for (int L : cfg.sizes) {
    for (std::size_t flat = 0; flat < per_size; ++flat) {
      Point p;
      p.L = L;
      p.values.resize(axis_vals.size());
      std::size_t rem = flat;
      for (std::size_t ax = axis_vals.size(); ax-- > 0;) {
        p.values[ax] = axis_vals[ax][rem % axis_vals[ax].size()];
        rem /= axis_vals[ax].size();
      }
      points.push_back(std::move(p));
    }
  }

  std::vector<Evaluation> evals(points.size());
  if (cfg.track && cfg.model == "xxz") {
    // Tracking chains each point to its predecessor, so it runs serially.
    std::optional<CVector> seed;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i > 0 && points[i].L != points[i - 1].L) seed.reset();
      evals[i] = evaluate(cfg, points[i], dense.get(), seed);
      seed = evals[i].vector;
    }
  } else {
    unsigned n_threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : static_cast<unsigned>(cfg.threads);
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < points.size(); i = next++)
        evals[i] = evaluate(cfg, points[i], dense.get(), std::nullopt);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  const std::size_t dir_axis = [&] {
    for (std::size_t i = 0; i < cfg.axes.size(); ++i)
      if (cfg.axes[i].name == cfg.direction) return i;
    return cfg.axes.size();
  }();
  for (std::size_t i = 0; i < evals.size(); ++i) {
    SweepRecord& r = evals[i].rec;
    if (r.error.empty()) {
      if (r.pt_class_a != r.pt_class_b) {
        const int n = half_order(r.re_F);
        r.ep_flag = n > 0 ? "half" : "straddle";
        EpCandidate c;
        c.L = r.L;
        c.axis_values = r.axis_values;
        c.lambda_a = dir_axis < cfg.axes.size() ? r.axis_values[dir_axis]
                                                 : param(cfg, points[i], cfg.direction, 0.0);
        c.lambda_b = c.lambda_a + cfg.epsilon;
        c.re_F = r.re_F;
        c.order = n;
        c.second_order = n == 1;
        res.ep_candidates.push_back(c);
      } else if (r.re_chi_density < cfg.divergence_floor) {
        r.ep_flag = "divergent";
      }
    }
    res.records.push_back(r);
  }

  // Peaks of Re chi / L along the first axis, one per size and slice of the others.
  if (!cfg.axes.empty() && axis_vals.front().size() >= 3) {
    const std::size_t n0 = axis_vals.front().size();
    const std::size_t stride = per_size / n0;
    std::map<std::vector<double>, std::vector<std::pair<int, fit::Peak>>> by_slice;
    for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
      for (std::size_t off = 0; off < stride; ++off) {
        std::vector<double> xs, ys;
        for (std::size_t i0 = 0; i0 < n0; ++i0) {
          const auto& r = res.records[s * per_size + i0 * stride + off];
          if (!r.error.empty() || std::isnan(r.re_chi_density)) continue;
          xs.push_back(r.axis_values[0]);
          ys.push_back(r.re_chi_density);
        }
        if (xs.size() < 3) continue;
        const fit::Peak pk = fit::locate_peak(xs, ys);
        const auto& first = res.records[s * per_size + off];
        std::vector<double> slice(first.axis_values.begin() + 1, first.axis_values.end());
        res.peaks.push_back({cfg.sizes[s], cfg.axes[0].name, slice, pk.position, pk.height});
        by_slice[slice].emplace_back(cfg.sizes[s], pk);
      }
    }
    for (const auto& [slice, list] : by_slice) {
      if (list.size() < 3) continue;
      std::vector<int> sizes;
      std::vector<double> pos;
      for (const auto& [L, pk] : list) {
        sizes.push_back(L);
        pos.push_back(pk.position);
      }
      const auto f = fit::extrapolate_in_inverse_size(sizes, pos, cfg.fit_degree);
      res.fits.push_back({cfg.axes[0].name, slice, static_cast<int>(f.coeffs.size()) - 1,
                          f.intercept, f.residual, f.coeffs});
    }
  }

  res.provenance.toolkit_version = std::string(version());
  res.provenance.config_echo = cfg.source_text;
  auto& s = res.provenance.settings;
  s["model"] = cfg.model;
  s["direction"] = cfg.direction;
  s["epsilon"] = format_setting(cfg.epsilon);
  s["definition"] = std::string(to_string(cfg.definition));
  s["tol_real"] = format_setting(cfg.tol_real);
  s["divergence_floor"] = format_setting(cfg.divergence_floor);
  s["fit_degree"] = std::to_string(cfg.fit_degree);
  s["seed"] = std::to_string(cfg.seed);
  s["track"] = cfg.track ? "true" : "false";
  s["ground_state_rule"] = cfg.model == "ssh" ? "filled eps_minus band"
                                               : "smallest Re E, ties to larger Im E";
  return res;
}

}  // namespace ptfid
