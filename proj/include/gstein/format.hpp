#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace gstein {

/// Locale-independent shortest-general formatting with `digits` significant
/// digits (printf %.{digits}g semantics).
inline std::string format_significant(double value, int digits = 12) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::general, digits);
  if (result.ec != std::errc{}) return "nan";
  return std::string(buffer, result.ptr);
}

}  // namespace gstein
