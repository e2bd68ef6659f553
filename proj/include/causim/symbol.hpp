#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace causim {

// Values are symbolic tokens; booleans and numbers are stored as their
// string tokens ("true", "0.5"). Comparison is exact string equality.
using SymbolValue = std::string;

inline bool valid_token(std::string_view token) {
  if (token.empty()) return false;
  for (unsigned char c : token) {
    if (c <= 0x20 || c == 0x7F) return false;  // no whitespace or control chars
  }
  return true;
}

// Ordered list of distinct values; order is the insertion order of the
// defining sampler or mechanism and is preserved by serialization.
struct Domain {
  std::vector<SymbolValue> values;

  bool contains(const SymbolValue& v) const {
    for (const auto& x : values)
      if (x == v) return true;
    return false;
  }
  int index_of(const SymbolValue& v) const {
    for (size_t i = 0; i < values.size(); ++i)
      if (values[i] == v) return static_cast<int>(i);
    return -1;
  }
  size_t size() const { return values.size(); }
  bool operator==(const Domain&) const = default;
};

}  // namespace causim
