#ifndef OFFTRC_HARNESS_TEXT_HPP
#define OFFTRC_HARNESS_TEXT_HPP

#include <charconv>
#include <cmath>
#include <string>

namespace offtrc {

/// Shortest round-trip decimal; "nan"/"inf" for non-finite values.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace offtrc

#endif  // OFFTRC_HARNESS_TEXT_HPP
