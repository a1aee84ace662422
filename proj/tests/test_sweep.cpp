#include "ptfid/config.hpp"
#include "ptfid/emit.hpp"
#include "ptfid/ssh.hpp"
#include "ptfid/sweep.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace ptfid;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("ptfid_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

const char* kSshConfig = R"(model = ssh
epsilon = 1e-3
sizes = 21, 41, 61
[params]
v2 = 0
[axes]
v1 = 0.6, 1.4, 9
u = 0, 0.1, 2
)";

}  // namespace

TEST_CASE("config parsing and validation") {
  auto cfg = parse_config(kSshConfig);
  CHECK(cfg.model == "ssh");
  CHECK(cfg.sizes == std::vector<int>{21, 41, 61});
  REQUIRE(cfg.axes.size() == 2);
  CHECK(cfg.axes[0].values().front() == 0.6);
  CHECK(cfg.axes[0].values().back() == 1.4);
  validate(cfg);
  CHECK(cfg.direction == "v1");

  CHECK_THROWS_AS(parse_config("bogus = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nope]"), ConfigError);
  CHECK_THROWS_AS(parse_config("epsilon = abc"), ConfigError);
  auto single = parse_config("[axes]\nv1 = 0.5, 0.5, 1\n");
  CHECK_THROWS_AS(validate(single), ConfigError);
  auto wrong = parse_config("model = xxz\n[axes]\nv1 = 0, 1, 3\n");
  CHECK_THROWS_AS(validate(wrong), ConfigError);
  auto twice = parse_config("[params]\nu = 0.1\n[axes]\nu = 0, 1, 3\n");
  CHECK_THROWS_AS(validate(twice), ConfigError);
  auto odd = parse_config("model = xxz\nsizes = 9\n[axes]\ngamma = 0, 1, 3\n");
  CHECK_THROWS_AS(validate(odd), ConfigError);
  CHECK(parse_axis_spec("u", "0:1:5").count == 5);
  CHECK(parse_axis_spec("u", "0.25").count == 1);
}

TEST_CASE("CSV layout") {
  SweepResult empty;
  empty.axis_names = {"v1", "u"};
  CHECK(to_csv(empty) ==
        "model,L,v1,u,epsilon,definition,re_F,im_F,re_chi,im_chi,re_chi_density,pt_class_a,"
        "pt_class_b,ep_flag,error\n");

  SweepConfig cfg = parse_config("[params]\nv1 = 0.7\nu = 0.1\n[axes]\nv2 = 0, 0, 2\n");
  cfg.sizes = {31};
  const auto r = run_sweep(cfg);
  REQUIRE(r.records.size() == 2);
  const double expect = ssh::chi_total({1.0, 0.7, 0.0, 0.1, 31}) / 31.0;
  CHECK(r.records[0].re_chi_density == doctest::Approx(expect).epsilon(1e-14));
  const std::string csv = to_csv(r);
  CHECK(csv.find(format_double(expect)) != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("JSON round trip") {
  auto cfg = parse_config(kSshConfig);
  cfg.threads = 2;
  SweepResult r = run_sweep(cfg);
  REQUIRE_FALSE(r.peaks.empty());
  REQUIRE_FALSE(r.fits.empty());
  r.records[0].re_F = std::numeric_limits<double>::quiet_NaN();
  r.records[0].error = "DefectiveMatrix: comma, \"quote\"";
  const SweepResult back = parse_json_result(to_json_string(r));
  CHECK(back == r);
  CHECK(back.schema_version == 1);
  CHECK(back.provenance.config_echo == kSshConfig);
  CHECK_THROWS_AS(parse_json_result("{\"schema_version\": 2}"), ConfigError);
}

TEST_CASE("determinism and thread independence") {
  auto cfg = parse_config(kSshConfig);
  cfg.threads = 1;
  const std::string one = to_csv(run_sweep(cfg));
  CHECK(one == to_csv(run_sweep(cfg)));
  cfg.threads = 4;
  const auto four = run_sweep(cfg);
  CHECK(one == to_csv(four));
  cfg.threads = 1;
  CHECK(to_json_string(run_sweep(cfg)) == to_json_string(four));

  auto xcfg = parse_config("model = xxz\nsizes = 8\n[params]\nJz = 1\n[axes]\ngamma = 0, 0.4, 5\n");
  xcfg.threads = 1;
  const std::string xa = to_csv(run_sweep(xcfg));
  xcfg.threads = 3;
  CHECK(xa == to_csv(run_sweep(xcfg)));
}

TEST_CASE("point failures stay in their row") {
  // H(lam) = [[i lam, 1], [1, -i lam]] is defective at lam = 1.
  const auto h0 = write_temp("h0.json", R"({"re": [[0, 1], [1, 0]]})");
  const auto v = write_temp("v.json", R"({"re": [[0, 0], [0, 0]], "im": [[1, 0], [0, -1]]})");
  auto cfg = parse_config("model = dense-file\nepsilon = 1e-3\nh0 = " + h0 + "\nv = " + v +
                          "\n[axes]\nlambda = 0.5, 1.5, 5\n");
  const auto r = run_sweep(cfg);
  REQUIRE(r.records.size() == 5);
  CHECK(r.records[2].error.rfind("DefectiveMatrix", 0) == 0);
  CHECK(std::isnan(r.records[2].re_F));
  for (std::size_t i : {0u, 1u, 3u, 4u}) CHECK(r.records[i].error.empty());
  CHECK(r.records[0].pt_class_a == "unbroken");
  CHECK(r.records[4].pt_class_a == "broken");
  CHECK(r.records[0].L == 2);

  auto missing = cfg;
  missing.h0_path = "/nonexistent/ptfid.json";
  CHECK_THROWS_AS(run_sweep(missing), ConfigError);
}

TEST_CASE("straddling intervals become EP candidates") {
  const auto h0 = write_temp("h0b.json", R"({"re": [[0, 1], [1, 0]]})");
  const auto v = write_temp("vb.json", R"({"re": [[0, 0], [0, 0]], "im": [[1, 0], [0, -1]]})");
  // Grid point 0.9999 with eps = 2e-4 straddles the EP at 1.
  auto cfg = parse_config("model = dense-file\nepsilon = 2e-4\nh0 = " + h0 + "\nv = " + v +
                          "\n[axes]\nlambda = 0.9, 0.9999, 2\n");
  const auto r = run_sweep(cfg);
  REQUIRE(r.ep_candidates.size() == 1);
  CHECK(r.records[1].ep_flag == "half");
  CHECK(r.ep_candidates[0].order == 1);
  CHECK(r.ep_candidates[0].second_order);
  CHECK(r.records[0].ep_flag == "none");
}
