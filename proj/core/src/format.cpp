#include "metrogain/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace metrogain {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  const double mag = std::abs(v);
  const bool fixed = v == 0.0 || (mag >= 1e-3 && mag < 1e15);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v == 0.0 ? 0.0 : v,
                                 fixed ? std::chars_format::fixed : std::chars_format::scientific, 12);
  return std::string(buf, res.ptr);
}

double printed_value(double v) {
  const std::string s = format_number(v);
  double out = v;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

}  // namespace metrogain
