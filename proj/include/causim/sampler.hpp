#pragma once

#include <string>
#include <utility>
#include <vector>

#include "causim/rational.hpp"
#include "causim/symbol.hpp"

namespace causim {

// Finite weighted distribution over symbolic values for one exogenous
// variable. Weights are exact rationals in (0,1] and must sum to 1; the
// sum is checked by validate_structure rather than at construction so that
// tests can build deliberately broken samplers.
struct CategoricalSampler {
  std::string name;  // "U_" prefix
  std::vector<std::pair<SymbolValue, Rational>> entries;
  std::string doc;

  Domain domain() const {
    Domain d;
    d.values.reserve(entries.size());
    for (const auto& [v, w] : entries) d.values.push_back(v);
    return d;
  }

  bool operator==(const CategoricalSampler&) const = default;
};

// Uniform sampler over the given values.
inline CategoricalSampler uniform_sampler(std::string name, std::vector<SymbolValue> values,
                                          std::string doc = {}) {
  CategoricalSampler s;
  s.name = std::move(name);
  s.doc = std::move(doc);
  auto n = static_cast<std::int64_t>(values.size());
  for (auto& v : values) s.entries.emplace_back(std::move(v), Rational(1, n));
  return s;
}

}  // namespace causim
