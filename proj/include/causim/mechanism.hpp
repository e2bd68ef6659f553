#pragma once

#include <map>
#include <string>
#include <vector>

#include "causim/symbol.hpp"

namespace causim {

// One guard conjunct: `var == value` or `var in {values...}`.
// IN sets are kept sorted and deduplicated; singleton INs normalize to EQ,
// so structurally equal guards render identically.
struct Cond {
  enum class Op { EQ, IN };
  std::string var;
  Op op = Op::EQ;
  std::vector<SymbolValue> values;  // exactly 1 for EQ, >= 2 sorted for IN

  bool matches(const SymbolValue& v) const {
    for (const auto& x : values)
      if (x == v) return true;
    return false;
  }
  bool operator==(const Cond&) const = default;
};

Cond make_cond(std::string var, std::vector<SymbolValue> values);

// Conjunction of conds; empty means "always true" (only legal on default).
struct Guard {
  std::vector<Cond> conds;
  bool operator==(const Guard&) const = default;
};

struct Rule {
  Guard guard;
  SymbolValue output;
  bool operator==(const Rule&) const = default;
};

// First-match-wins ordered rules with a mandatory default, so evaluation
// is total over the input domain product.
struct RuleTable {
  std::vector<Rule> rules;
  SymbolValue default_output;
  bool operator==(const RuleTable&) const = default;
};

// Deterministic guarded rule table computing one endogenous variable from
// its endogenous parents plus exactly one exogenous input.
struct Mechanism {
  std::string name;        // "f_" prefix
  std::string output_var;  // endogenous variable this mechanism produces
  std::vector<std::string> endo_parents;  // parent *variable* names, ordered
  std::string exo_parent;                 // one "U_" name
  RuleTable rules;
  std::string doc;

  // Output values as declared by the table: rule outputs in order, then the
  // default, deduplicated. This is the variable's declared Domain.
  Domain declared_output_domain() const;

  bool operator==(const Mechanism&) const = default;
};

// Inputs must cover exactly endo_parents + exo_parent; throws MissingInput /
// UnknownValue per contract. `input_domains` carries each input variable's
// domain for the range check.
SymbolValue evaluate(const Mechanism& mech, const std::map<std::string, SymbolValue>& inputs,
                     const std::map<std::string, Domain>& input_domains);

// Reachable outputs over the full Cartesian product of the input domains,
// in first-reached order under lexicographic input enumeration (inputs in
// ascending variable-name order, values in domain order).
Domain output_domain(const Mechanism& mech, const std::map<std::string, Domain>& input_domains);

}  // namespace causim
