#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace causim {

// Exact rational arithmetic for sampler weights and support probabilities.
// Always stored normalized: gcd(num, den) == 1, den > 0. Operations compute
// through __int128 and throw RationalOverflow if a reduced result no longer
// fits in int64, which never happens for the weight/denominator magnitudes
// this library produces.
struct RationalOverflow : std::overflow_error {
  RationalOverflow() : std::overflow_error("rational overflow") {}
};

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den);
  static Rational from_string(const std::string& text);  // "num/den" or "num"

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  bool operator==(const Rational& o) const = default;
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this == o || *this < o; }

  bool is_zero() const { return num_ == 0; }
  std::string str() const;  // canonical "num/den", integers as "num"

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace causim
