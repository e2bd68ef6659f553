#pragma once

#include "causim/engine.hpp"

namespace causim {
namespace oracle {

// Brute-force reference for the four support definitions, written as the
// literal set comprehensions with no caps and no shortcuts: enumerate every
// full exogenous tuple, keep the compatible ones, map them through a plain
// recursive evaluator, collect into a std::set. Deliberately slow; shares no
// enumeration or dedup code with the engine (ships so dataset audits can
// re-verify published corpora).
//
// Guard: throws TooLarge when the total exogenous product exceeds 1000.
Support oracle_support(const Scm& scm, const SupportQuery& query);

// Exact answer probabilities by the same full enumeration, for auditing
// compute_support_weights. Own guard (default 10M tuples) since marginal
// checks over grid models legitimately exceed the support guard.
std::vector<std::pair<std::map<std::string, SymbolValue>, Rational>> oracle_weights(
    const Scm& scm, const SupportQuery& query, std::uint64_t guard = 10000000);

// Marginal distribution of one endogenous variable under no intervention,
// enumerating only the ancestral sub-model of that variable.
std::vector<std::pair<SymbolValue, Rational>> oracle_marginal(const Scm& scm,
                                                              const std::string& var,
                                                              std::uint64_t guard = 10000000);

}  // namespace oracle
}  // namespace causim
