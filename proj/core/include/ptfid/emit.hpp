#pragma once

#include "ptfid/sweep.hpp"

#include <iosfwd>
#include <string>

namespace ptfid {

/// 17 significant digits, "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

/// Header: model, L, <axis names>, epsilon, definition, re_F, im_F, re_chi,
/// im_chi, re_chi_density, pt_class_a, pt_class_b, ep_flag, error.
std::string to_csv(const SweepResult& r);

/// Non-finite numbers become null and read back as NaN. Doubles use the
/// shortest representation that round-trips.
std::string to_json_string(const SweepResult& r);
SweepResult parse_json_result(const std::string& text);

/// format is "csv" or "json"; an empty path writes to `out`.
void write_result(const SweepResult& r, const std::string& format, const std::string& path,
                  std::ostream& out);

}  // namespace ptfid
