#pragma once

#include <charconv>
#include <string>

namespace colearn {

// Shortest round-trip decimal form; two equal doubles always print the same
// bytes, which the byte-identical history files rely on.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace colearn
