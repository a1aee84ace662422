#include "ptfid/emit.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace ptfid {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_of(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> nums_of(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(num_of(x));
  return v;
}

}  // namespace

std::string to_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "model,L";
  for (const auto& a : r.axis_names) out << ',' << csv_field(a);
  out << ",epsilon,definition,re_F,im_F,re_chi,im_chi,re_chi_density,pt_class_a,pt_class_b,"
         "ep_flag,error\n";
  for (const auto& rec : r.records) {
    out << csv_field(rec.model) << ',' << rec.L;
    for (double x : rec.axis_values) out << ',' << format_double(x);
    out << ',' << format_double(rec.epsilon) << ',' << csv_field(rec.definition) << ','
        << format_double(rec.re_F) << ',' << format_double(rec.im_F) << ','
        << format_double(rec.re_chi) << ',' << format_double(rec.im_chi) << ','
        << format_double(rec.re_chi_density) << ',' << rec.pt_class_a << ',' << rec.pt_class_b
        << ',' << rec.ep_flag << ',' << csv_field(rec.error) << '\n';
  }
  return out.str();
}

std::string to_json_string(const SweepResult& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["model"] = r.model;
  j["axis_names"] = r.axis_names;
  json recs = json::array();
  for (const auto& rec : r.records) {
    recs.push_back({{"model", rec.model},
                    {"L", rec.L},
                    {"axis_values", nums(rec.axis_values)},
                    {"epsilon", num(rec.epsilon)},
                    {"definition", rec.definition},
                    {"re_F", num(rec.re_F)},
                    {"im_F", num(rec.im_F)},
                    {"re_chi", num(rec.re_chi)},
                    {"im_chi", num(rec.im_chi)},
                    {"re_chi_density", num(rec.re_chi_density)},
                    {"pt_class_a", rec.pt_class_a},
                    {"pt_class_b", rec.pt_class_b},
                    {"ep_flag", rec.ep_flag},
                    {"error", rec.error}});
  }
  j["records"] = std::move(recs);
  json eps = json::array();
  for (const auto& c : r.ep_candidates) {
    eps.push_back({{"L", c.L},
                   {"axis_values", nums(c.axis_values)},
                   {"lambda_a", num(c.lambda_a)},
                   {"lambda_b", num(c.lambda_b)},
                   {"re_F", num(c.re_F)},
                   {"order", c.order},
                   {"second_order", c.second_order}});
  }
  j["ep_candidates"] = std::move(eps);
  json peaks = json::array();
  for (const auto& p : r.peaks) {
    peaks.push_back({{"L", p.L},
                     {"axis", p.axis},
                     {"slice", nums(p.slice)},
                     {"position", num(p.position)},
                     {"height", num(p.height)}});
  }
  j["peaks"] = std::move(peaks);
  json fits = json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"axis", f.axis},
                    {"slice", nums(f.slice)},
                    {"degree", f.degree},
                    {"intercept", num(f.intercept)},
                    {"residual", num(f.residual)},
                    {"coeffs", nums(f.coeffs)}});
  }
  j["fits"] = std::move(fits);
  j["provenance"] = {{"toolkit_version", r.provenance.toolkit_version},
                     {"config_echo", r.provenance.config_echo},
                     {"settings", r.provenance.settings}};
  return j.dump(2) + "\n";
}

SweepResult parse_json_result(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid result JSON: ") + e.what());
  }
  SweepResult r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != 1)
      throw ConfigError("unsupported schema_version " + std::to_string(r.schema_version));
    r.model = j.at("model").get<std::string>();
    r.axis_names = j.at("axis_names").get<std::vector<std::string>>();
    for (const auto& x : j.at("records")) {
      SweepRecord rec;
      rec.model = x.at("model").get<std::string>();
      rec.L = x.at("L").get<int>();
      rec.axis_values = nums_of(x.at("axis_values"));
      rec.epsilon = num_of(x.at("epsilon"));
      rec.definition = x.at("definition").get<std::string>();
      rec.re_F = num_of(x.at("re_F"));
      rec.im_F = num_of(x.at("im_F"));
      rec.re_chi = num_of(x.at("re_chi"));
      rec.im_chi = num_of(x.at("im_chi"));
      rec.re_chi_density = num_of(x.at("re_chi_density"));
      rec.pt_class_a = x.at("pt_class_a").get<std::string>();
      rec.pt_class_b = x.at("pt_class_b").get<std::string>();
      rec.ep_flag = x.at("ep_flag").get<std::string>();
      rec.error = x.at("error").get<std::string>();
      r.records.push_back(std::move(rec));
    }
    for (const auto& x : j.at("ep_candidates")) {
      EpCandidate c;
      c.L = x.at("L").get<int>();
      c.axis_values = nums_of(x.at("axis_values"));
      c.lambda_a = num_of(x.at("lambda_a"));
      c.lambda_b = num_of(x.at("lambda_b"));
      c.re_F = num_of(x.at("re_F"));
      c.order = x.at("order").get<int>();
      c.second_order = x.at("second_order").get<bool>();
      r.ep_candidates.push_back(std::move(c));
    }
    for (const auto& x : j.at("peaks")) {
      PeakEntry p;
      p.L = x.at("L").get<int>();
      p.axis = x.at("axis").get<std::string>();
      p.slice = nums_of(x.at("slice"));
      p.position = num_of(x.at("position"));
      p.height = num_of(x.at("height"));
      r.peaks.push_back(std::move(p));
    }
    for (const auto& x : j.at("fits")) {
      FitEntry f;
      f.axis = x.at("axis").get<std::string>();
      f.slice = nums_of(x.at("slice"));
      f.degree = x.at("degree").get<int>();
      f.intercept = num_of(x.at("intercept"));
      f.residual = num_of(x.at("residual"));
      f.coeffs = nums_of(x.at("coeffs"));
      r.fits.push_back(std::move(f));
    }
    const auto& pv = j.at("provenance");
    r.provenance.toolkit_version = pv.at("toolkit_version").get<std::string>();
    r.provenance.config_echo = pv.at("config_echo").get<std::string>();
    r.provenance.settings = pv.at("settings").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed result JSON: ") + e.what());
  }
  return r;
}

void write_result(const SweepResult& r, const std::string& format, const std::string& path,
                  std::ostream& out) {
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  const std::string text = format == "csv" ? to_csv(r) : to_json_string(r);
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

}  // namespace ptfid
