#include "ptfid/biortho.hpp"
#include "ptfid/config.hpp"
#include "ptfid/emit.hpp"
#include "ptfid/ssh.hpp"
#include "ptfid/sweep.hpp"
#include "ptfid/xxz.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <variant>

namespace {

using namespace ptfid;

struct Globals {
  std::optional<double> epsilon;
  std::optional<double> tol_real;
  std::optional<int> threads;
  std::string format = "csv";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> definition;
  std::string config;
};

// Small column table for the non-sweep subcommands.
struct Table {
  using Cell = std::variant<double, long long, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  [[nodiscard]] std::string csv() const {
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) s += ',';
        if (const auto* d = std::get_if<double>(&r[i])) s += format_double(*d);
        else if (const auto* n = std::get_if<long long>(&r[i])) s += std::to_string(*n);
        else s += std::get<std::string>(r[i]);
      }
      s += '\n';
    }
    return s;
  }

  [[nodiscard]] std::string json() const {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json o;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (const auto* d = std::get_if<double>(&r[i]))
          o[columns[i]] = std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr);
        else if (const auto* n = std::get_if<long long>(&r[i])) o[columns[i]] = *n;
        else o[columns[i]] = std::get<std::string>(r[i]);
      }
      a.push_back(std::move(o));
    }
    return a.dump(2) + "\n";
  }
};

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

void emit_table(const Table& t, const Globals& g) {
  if (g.format != "csv" && g.format != "json") throw ConfigError("format must be csv or json");
  emit_text(g.format == "csv" ? t.csv() : t.json(), g.out);
}

double scalar(const std::string& name, const std::string& spec) {
  const Axis a = parse_axis_spec(name, spec);
  if (a.count != 1) throw ConfigError(name + " takes a single value here");
  return a.start;
}

std::vector<double> values_of(const std::string& name, const std::string& spec) {
  const Axis a = parse_axis_spec(name, spec);
  if (a.count < 1) throw ConfigError(name + ": count must be positive");
  return a.values();
}

// Puts a scalar or start:stop:count flag into the config.
void add_param(SweepConfig& cfg, const std::string& name, const std::string& spec) {
  if (spec.empty()) return;
  const Axis a = parse_axis_spec(name, spec);
  cfg.fixed.erase(name);
  std::erase_if(cfg.axes, [&](const Axis& x) { return x.name == name; });
  if (a.count == 1) cfg.fixed[name] = a.start;
  else cfg.axes.push_back(a);
}

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("L: '" + item + "' is not an integer");
    }
  }
  return out;
}

void apply_globals(SweepConfig& cfg, const Globals& g) {
  if (g.epsilon) cfg.epsilon = *g.epsilon;
  if (g.tol_real) cfg.tol_real = *g.tol_real;
  if (g.threads) cfg.threads = *g.threads;
  if (g.seed) cfg.seed = *g.seed;
  if (g.definition) cfg.definition = parse_definition(*g.definition);
  cfg.format = g.format;
  if (!g.out.empty()) cfg.output = g.out;
}

int run_and_emit(SweepConfig cfg) {
  const SweepResult r = run_sweep(cfg);
  write_result(r, cfg.format, cfg.output, std::cout);
  for (const auto& rec : r.records)
    if (!rec.error.empty()) return 3;
  return 0;
}

ssh::SshParams ssh_params(const std::string& w, const std::string& v1, const std::string& v2,
                          const std::string& u, int L) {
  ssh::SshParams p;
  p.w = scalar("w", w);
  p.v1 = scalar("v1", v1);
  p.v2 = scalar("v2", v2);
  p.u = scalar("u", u);
  p.L = L;
  ssh::validate(p);
  return p;
}

std::string branch_name(ssh::Branch b) {
  switch (b) {
    case ssh::Branch::real: return "real";
    case ssh::Branch::imaginary: return "imaginary";
    default: return "exceptional";
  }
}

Table bench_table(std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  Table t{{"module", "operation", "size", "seconds"}, {}};
  auto time = [&](const std::string& module, const std::string& op, long long size, auto&& fn) {
    const auto t0 = clock::now();
    fn();
    t.rows.push_back({module, op, size, std::chrono::duration<double>(clock::now() - t0).count()});
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CMatrix h(200, 200);
  for (Index i = 0; i < h.rows(); ++i)
    for (Index j = 0; j < h.cols(); ++j) h(i, j) = cplx(nd(rng), nd(rng));
  time("biortho-core", "biorthogonal_eig", 200, [&] { (void)biorthogonal_eig(h); });
  ssh::SshParams sp{1.0, 0.9, 0.0, 0.1, 505};
  time("ssh-model", "chi_total", 505, [&] { (void)ssh::chi_total(sp); });
  time("ssh-model", "many_body_fidelity", 505,
       [&] { (void)ssh::many_body_fidelity(sp, 0.9, 0.901); });
  time("ssh-model", "complex_berry_phase", 4096, [&] {
    (void)ssh::complex_berry_phase({1.0, 0.5, 0.0, 0.1, 101}, -1, ssh::BerryMethod::numeric);
  });
  time("ssh-model", "open_boundary_spectrum", 80,
       [&] { (void)ssh::open_boundary_spectrum({1.0, 1.5, 0.0, 0.1, 40}); });
  LanczosOptions lo;
  lo.seed = seed;
  xxz::XxzParams xp{1.0, 0.2, 14};
  time("xxz-model", "build_hamiltonian", static_cast<long long>(xxz::m0_dimension(xp.L)),
       [&] { (void)xxz::build_hamiltonian(xp); });
  time("xxz-model", "ground_state", static_cast<long long>(xxz::m0_dimension(xp.L)),
       [&] { (void)xxz::ground_state(xp, lo); });
  time("fidelity", "xxz fidelity_scan (3 points)", static_cast<long long>(xxz::m0_dimension(12)),
       [&] {
         (void)xxz::fidelity_scan({1.0, 0.0, 12}, xxz::Direction::gamma, {0.0, 0.05, 0.1}, 1e-3,
                                  {lo, false});
       });
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biorthogonal fidelity toolkit for PT-symmetric lattice models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ptfid::version()));

  Globals g;
  app.add_option("--epsilon", g.epsilon, "Parameter step between the two ground states");
  app.add_option("--tol-real", g.tol_real, "Relative threshold for a real eigenvalue");
  app.add_option("--threads", g.threads, "Worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--seed", g.seed, "Seed for Lanczos start and restart vectors");
  app.add_option("--definition", g.definition,
                 "metricized, RR, LR-half-sum, LR-sqrt-abs or LR-sqrt");
  app.add_option("--config", g.config, "Sweep configuration file");
  app.fallthrough();

  std::string w = "1", v1 = "0", v2 = "0", u = "0", Jz = "1", gamma = "0";
  std::string sizes;
  std::string direction;
  double divergence_floor = -1e4;
  int fit_degree = 2;
  bool track = false;

  auto add_ssh = [&](CLI::App* s, bool axes) {
    const std::string help = axes ? " (value or start:stop:count)" : "";
    s->add_option("--w", w, "Intra-cell hopping" + help);
    s->add_option("--v1", v1, "Inter-cell hopping up-to-down" + help);
    s->add_option("--v2", v2, "Inter-cell hopping down-to-up" + help);
    s->add_option("--u", u, "Gain/loss strength" + help);
  };
  auto add_xxz = [&](CLI::App* s) {
    s->add_option("--Jz", Jz, "Ising anisotropy (value or start:stop:count)");
    s->add_option("--gamma", gamma, "Staggered imaginary field (value or start:stop:count)");
  };

  auto* ssh_scan = app.add_subcommand("ssh-scan", "Fidelity susceptibility sweep of the SSH ladder");
  add_ssh(ssh_scan, true);
  ssh_scan->add_option("--L", sizes, "Comma-separated numbers of unit cells");
  ssh_scan->add_option("--divergence-floor", divergence_floor, "Flag Re chi/L below this");
  ssh_scan->add_option("--fit-degree", fit_degree, "Polynomial degree in 1/L");

  auto* xxz_scan = app.add_subcommand("xxz-scan", "Fidelity susceptibility sweep of the XXZ chain");
  add_xxz(xxz_scan);
  xxz_scan->add_option("--L", sizes, "Comma-separated even chain lengths");
  xxz_scan->add_option("--direction", direction, "Perturbed parameter")
      ->check(CLI::IsMember({"gamma", "Jz"}));
  xxz_scan->add_option("--divergence-floor", divergence_floor, "Flag Re chi/L below this");
  xxz_scan->add_option("--fit-degree", fit_degree, "Polynomial degree in 1/L");
  xxz_scan->add_flag("--track", track, "Seed each point with the previous ground state (serial)");

  int L = 101;
  auto* bands = app.add_subcommand("ssh-bands", "Per-momentum energies and susceptibilities");
  add_ssh(bands, false);
  bands->add_option("--L", L, "Number of unit cells");

  int band = -1, n_k = 4096;
  std::string method = "numeric";
  auto* berry = app.add_subcommand("ssh-berry", "Complex Berry phase over a (v1, u) grid");
  add_ssh(berry, true);
  berry->add_option("--band", band, "Band index")->check(CLI::IsMember({-1, 1}));
  berry->add_option("--method", method, "numeric or analytic")
      ->check(CLI::IsMember({"numeric", "analytic"}));
  berry->add_option("--nk", n_k, "Wilson-loop momenta")->check(CLI::PositiveNumber);

  int L_open = 40;
  auto* edges = app.add_subcommand("ssh-edges", "Open-chain spectrum and boundary modes");
  add_ssh(edges, false);
  edges->add_option("--L", L_open, "Number of unit cells");

  int L_xxz = 10;
  auto* spectrum = app.add_subcommand("xxz-spectrum", "Full M=0 spectrum of the XXZ chain");
  add_xxz(spectrum);
  spectrum->add_option("--L", L_xxz, "Even chain length");

  std::string model = "ssh";
  double lo = 0.0, hi = 0.0, width = 1e-7;
  auto* locate = app.add_subcommand("ep-locate", "Bisect a PT transition and run the one-half test");
  locate->add_option("--model", model, "ssh or xxz")->check(CLI::IsMember({"ssh", "xxz"}));
  add_ssh(locate, false);
  add_xxz(locate);
  locate->add_option("--L", L, "Unit cells (ssh) or chain length (xxz)");
  locate->add_option("--direction", direction, "Bisected parameter for xxz")
      ->check(CLI::IsMember({"gamma", "Jz"}));
  locate->add_option("--lo", lo, "Bracket start")->required();
  locate->add_option("--hi", hi, "Bracket end")->required();
  locate->add_option("--width", width, "Final bracket width");

  auto* bench = app.add_subcommand("bench", "Per-module timing report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (ssh_scan->parsed() || xxz_scan->parsed()) {
      SweepConfig cfg = g.config.empty() ? SweepConfig{} : load_config(g.config);
      auto* sub = ssh_scan->parsed() ? ssh_scan : xxz_scan;
      if (g.config.empty()) cfg.model = ssh_scan->parsed() ? "ssh" : "xxz";
      else if (cfg.model != (ssh_scan->parsed() ? "ssh" : "xxz"))
        throw ConfigError("config model '" + cfg.model + "' does not match " + sub->get_name());
      auto given = [&](const char* flag) { return sub->count(flag) > 0; };
      if (ssh_scan->parsed()) {
        for (auto [flag, name, val] : {std::tuple{"--w", "w", &w}, {"--v1", "v1", &v1},
                                       {"--v2", "v2", &v2}, {"--u", "u", &u}})
          if (given(flag)) add_param(cfg, name, *val);
      } else {
        if (given("--Jz")) add_param(cfg, "Jz", Jz);
        if (given("--gamma")) add_param(cfg, "gamma", gamma);
        if (given("--direction")) cfg.direction = direction;
        if (given("--track")) cfg.track = track;
      }
      if (given("--L")) cfg.sizes = parse_sizes(sizes);
      if (given("--divergence-floor")) cfg.divergence_floor = divergence_floor;
      if (given("--fit-degree")) cfg.fit_degree = fit_degree;
      apply_globals(cfg, g);
      return run_and_emit(cfg);
    }

    if (bands->parsed()) {
      const auto p = ssh_params(w, v1, v2, u, L);
      Table t{{"m", "k", "re_eps_plus", "im_eps_plus", "re_eps_minus", "im_eps_minus", "delta",
               "branch", "chi_k", "chi_k_rr"},
              {}};
      const auto ks = ssh::momentum_grid(p.L);
      for (std::size_t m = 0; m < ks.size(); ++m) {
        const auto bp = ssh::band_point(ks[m], p);
        double chi = std::numeric_limits<double>::quiet_NaN(), chi_rr = chi;
        if (bp.branch != ssh::Branch::exceptional) {
          chi = ssh::chi_k_metricized(ks[m], p);
          chi_rr = ssh::chi_k_rr(ks[m], p);
        }
        t.rows.push_back({static_cast<long long>(m), ks[m], bp.eps_plus.real(),
                          bp.eps_plus.imag(), bp.eps_minus.real(), bp.eps_minus.imag(), bp.delta,
                          branch_name(bp.branch), chi, chi_rr});
      }
      emit_table(t, g);
      return 0;
    }

    if (berry->parsed()) {
      Table t{{"v1", "u", "re_gamma", "im_gamma", "error"}, {}};
      const auto bm = method == "numeric" ? ssh::BerryMethod::numeric
                                          : ssh::BerryMethod::analytic_v2_zero;
      bool failed = false;
      for (double x : values_of("v1", v1)) {
        for (double y : values_of("u", u)) {
          ssh::SshParams p{scalar("w", w), x, scalar("v2", v2), y, 101};
          try {
            const cplx gph = ssh::complex_berry_phase(p, band, bm, {n_k, true});
            t.rows.push_back({x, y, gph.real(), gph.imag(), std::string()});
          } catch (const std::exception& e) {
            const auto* pe = dynamic_cast<const Error*>(&e);
            const std::string kind = pe ? std::string(pe->kind()) : "Error";
            const double nan = std::numeric_limits<double>::quiet_NaN();
            t.rows.push_back({x, y, nan, nan, kind + ": " + e.what()});
            failed = true;
          }
        }
      }
      emit_table(t, g);
      return failed ? 3 : 0;
    }

    if (edges->parsed()) {
      const auto p = ssh_params(w, v1, v2, u, L_open);
      const auto rep = ssh::open_boundary_spectrum(p);
      Table t{{"index", "re_E", "im_E", "boundary", "edge", "sublattice", "edge_weight"}, {}};
      for (Index i = 0; i < rep.spectrum.size(); ++i) {
        const auto it = std::find_if(rep.modes.begin(), rep.modes.end(),
                                     [&](const ssh::BoundaryMode& m) { return m.index == i; });
        const bool is_mode = it != rep.modes.end();
        t.rows.push_back({static_cast<long long>(i), rep.spectrum[i].real(),
                          rep.spectrum[i].imag(), std::string(is_mode ? "yes" : "no"),
                          std::string(!is_mode ? "" : it->edge == ssh::Edge::left ? "left" : "right"),
                          std::string(!is_mode ? "" : it->sublattice == ssh::Sublattice::up ? "up" : "down"),
                          is_mode ? it->edge_weight : std::numeric_limits<double>::quiet_NaN()});
      }
      emit_table(t, g);
      return 0;
    }

    if (spectrum->parsed()) {
      const xxz::XxzParams p{scalar("Jz", Jz), scalar("gamma", gamma), L_xxz};
      const CVector e = xxz::full_sector_spectrum(p);
      Table t{{"index", "re_E", "im_E"}, {}};
      for (Index i = 0; i < e.size(); ++i)
        t.rows.push_back({static_cast<long long>(i), e[i].real(), e[i].imag()});
      emit_table(t, g);
      return 0;
    }

    if (locate->parsed()) {
      OneHalfOptions oh;
      if (g.epsilon) oh.schedule = {*g.epsilon};
      Table t{{"model", "lo", "hi", "epsilon", "re_F", "im_F", "n_crossings", "second_order",
               "m", "k", "re_f_k"},
              {}};
      if (model == "ssh") {
        auto p = ssh_params(w, v1, v2, u, L);
        auto at = [&](double x) {
          ssh::SshParams q = p;
          q.v1 = x;
          return q;
        };
        // Many-body transitions happen where the number of broken momenta changes.
        const int n_lo = ssh::broken_momentum_count(at(lo));
        const auto label = [&](double x) {
          return ssh::broken_momentum_count(at(x)) == n_lo ? PtClass::unbroken : PtClass::broken;
        };
        const fit::Bracket br = fit::bisect_transition(label, lo, hi, width);
        FidelityProbe probe{[&](double x, double y) { return ssh::many_body_fidelity(p, x, y).F; },
                            label};
        const auto res = one_half_ep_test(probe, br.lo, br.hi, oh);
        for (std::size_t i = 0; i < res.epsilons.size(); ++i) {
          const double eps = res.epsilons[i];
          const auto mb = ssh::many_body_fidelity(p, res.lambda_center - oh.a * eps,
                                                  res.lambda_center + oh.b * eps);
          const auto ks = ssh::momentum_grid(p.L);
          auto row = [&](long long m, double k, double fk) {
            t.rows.push_back({model, br.lo, br.hi, eps, res.F_trace[i].real(),
                              res.F_trace[i].imag(), static_cast<long long>(res.n_crossings),
                              std::string(res.is_second_order ? "true" : "false"), m, k, fk});
          };
          if (mb.crossing_m.empty()) row(-1, std::numeric_limits<double>::quiet_NaN(),
                                         std::numeric_limits<double>::quiet_NaN());
          for (int m : mb.crossing_m)
            row(m, ks[static_cast<std::size_t>(m)], mb.f_k[static_cast<std::size_t>(m)].real());
        }
      } else {
        const xxz::XxzParams p{scalar("Jz", Jz), scalar("gamma", gamma), L};
        const auto d = direction == "Jz" ? xxz::Direction::Jz : xxz::Direction::gamma;
        LanczosOptions lopt;
        if (g.seed) lopt.seed = *g.seed;
        const fit::Bracket br = xxz::locate_ep(p, d, lo, hi, width, lopt);
        const EndpointFn state = [&](double x) {
          const auto gs = xxz::ground_state(xxz::shifted(p, d, x), lopt);
          return EndpointState{gs.left, gs.right, gs.pt};
        };
        const auto res = one_half_ep_test(state, br.lo, br.hi, oh);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < res.epsilons.size(); ++i)
          t.rows.push_back({model, br.lo, br.hi, res.epsilons[i], res.F_trace[i].real(),
                            res.F_trace[i].imag(), static_cast<long long>(res.n_crossings),
                            std::string(res.is_second_order ? "true" : "false"), -1LL, nan, nan});
      }
      emit_table(t, g);
      return 0;
    }

    if (bench->parsed()) {
      emit_table(bench_table(g.seed.value_or(12345)), g);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
