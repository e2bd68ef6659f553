#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causim/rational.hpp"
#include "causim/scm.hpp"

namespace causim {

// Keys are sampler names ("U_*"); possibly partial.
using ExoAssignment = std::map<std::string, SymbolValue>;
// Keys are mechanism output variables; possibly partial.
using EndoAssignment = std::map<std::string, SymbolValue>;
// do(X = x*): forced endogenous values; the mechanism of each target is
// skipped, all other equations stay the same.
using Intervention = std::map<std::string, SymbolValue>;

// One sampled world: replaying `exo` through forward reproduces `endo`
// exactly. The call log records exogenous draws (ascending sampler name,
// the sampling order) followed by mechanism returns in topological order.
struct Trace {
  std::uint64_t seed = 0;
  ExoAssignment exo;
  EndoAssignment endo;
  std::vector<std::pair<std::string, SymbolValue>> calls;
};

enum class QueryType { Deduction, Abduction, Intervention, Counterfactual };
std::string query_type_name(QueryType t);
QueryType query_type_from_name(const std::string& name);

// Enumerated answer set. `answers` hold full endogenous assignments
// (deduction / intervention / counterfactual) or exogenous assignments
// restricted to the missing names (abduction), deduplicated in first-
// occurrence order under the lexicographic completion enumeration.
// exhausted = true means the set is complete within the configured caps.
struct Support {
  QueryType kind = QueryType::Deduction;
  std::vector<std::map<std::string, SymbolValue>> answers;
  bool exhausted = false;
  std::uint64_t combinations_examined = 0;
  bool operator==(const Support&) const = default;
};

struct Caps {
  std::uint64_t max_combinations = 100000;
  std::uint64_t max_support_size = 512;
};

// Deterministic function of (scm, seed): one splitmix64 stream seeded with
// `seed`, advanced once per sampler in ascending sampler-name order, each
// draw mapped to a value by cumulative rational weights.
ExoAssignment sample_exogenous(const Scm& scm, std::uint64_t seed);

// Full forward pass in topological order. Intervened variables skip their
// mechanism and take the forced value. `u` must be complete.
std::pair<EndoAssignment, Trace> forward(const Scm& scm, const ExoAssignment& u,
                                         const std::optional<Intervention>& do_op = std::nullopt);

// All completions of the missing samplers, lexicographic (variables in
// ascending name order, values in domain order), merged over `fixed`.
// Stops at `cap` completions; second element reports exhaustion.
std::pair<std::vector<ExoAssignment>, bool> enumerate_completions(
    const Scm& scm, const ExoAssignment& fixed, const std::vector<std::string>& missing,
    std::uint64_t cap);

Support support_deduction(const Scm& scm, const ExoAssignment& fixed,
                          const std::vector<std::string>& missing, const Caps& caps);
Support support_intervention(const Scm& scm, const ExoAssignment& fixed,
                             const std::vector<std::string>& missing, const Intervention& do_op,
                             const Caps& caps);
Support support_abduction(const Scm& scm, const ExoAssignment& fixed,
                          const std::vector<std::string>& missing, const EndoAssignment& evidence,
                          const Caps& caps);
Support support_counterfactual(const Scm& scm, const ExoAssignment& fixed,
                               const std::vector<std::string>& missing,
                               const EndoAssignment& evidence, const Intervention& do_op,
                               const Caps& caps);

// A support-producing query in one value, for re-running stored instances
// (grading, audits, weights).
struct SupportQuery {
  QueryType kind = QueryType::Deduction;
  ExoAssignment fixed;
  std::vector<std::string> missing;
  std::optional<Intervention> do_op;
  std::optional<EndoAssignment> evidence;
  Caps caps;
};

Support compute_support(const Scm& scm, const SupportQuery& query);

// Exact probability of each support answer: the total sampler-weight mass of
// the compatible completions mapping to it, renormalized over the compatible
// set. Weights sum to 1 exactly. Throws NotExhausted when the support hits a
// cap. Returned in support answer order.
std::vector<std::pair<std::map<std::string, SymbolValue>, Rational>> compute_support_weights(
    const Scm& scm, const SupportQuery& query);

}  // namespace causim
