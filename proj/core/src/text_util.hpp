#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

// Locale-independent number formatting/parsing for the CSV writers.

namespace ehcr::detail {

/// Shortest decimal that round-trips the binary64 value.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

/// Parses a full field as double; returns false unless the entire field is
/// consumed.
inline bool parse_double(std::string_view field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

inline bool parse_size(std::string_view field, std::size_t& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

}  // namespace ehcr::detail
