#pragma once

#include <optional>

#include "causim/engine.hpp"
#include "causim/splitmix.hpp"

namespace causim {

enum class Scenario { Deterministic, Stochastic };
std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

enum class CfEvidence { Minimal, Full };

struct QueryConfig {
  std::uint64_t seed_start = 0;
  std::uint64_t seed_budget = 10000;
  int attempts_per_seed = 8;
  double missing_exo_pct = 0.5;         // [0, 1]
  double intervention_node_pct = 0.25;  // (0, 1]
  std::uint64_t max_combinations = 100000;
  std::uint64_t max_support_size = 512;
  Scenario scenario = Scenario::Deterministic;
  bool require_intervention_effect = false;
  bool require_counterfactual_effect = false;
  CfEvidence cf_evidence = CfEvidence::Full;
  int domain_samples = 2000;  // echoed in metadata; domains here are exact

  Caps caps() const { return {max_combinations, max_support_size}; }
};

// One supervised causal query with its exhaustively enumerated answer
// support. required_keys are every endogenous variable for deduction /
// intervention / counterfactual and every unknown exogenous name for
// abduction; grading demands exactly these keys.
struct QueryInstance {
  QueryType query_type = QueryType::Deduction;
  Scenario scenario = Scenario::Deterministic;
  std::string scm_id;
  int version = 0;
  std::uint64_t seed = 0;
  ExoAssignment fixed_exogenous;
  std::vector<std::string> unknown_exogenous;  // sorted
  std::optional<Intervention> do_op;
  std::optional<EndoAssignment> observed_endogenous;
  Support support;
  std::vector<std::string> required_keys;  // sorted

  SupportQuery support_query(const QueryConfig& cfg) const {
    return {query_type, fixed_exogenous, unknown_exogenous, do_op, observed_endogenous,
            cfg.caps()};
  }
};

// Samples the exogenous context for `seed` and forward-computes the world.
Trace make_factual_world(const Scm& scm, std::uint64_t seed);

// ceil(missing_exo_pct * m) samplers drawn uniformly without replacement
// from those with at least two values, rejecting draws whose domain product
// exceeds max_combinations. Throws NoFeasibleSelection after
// attempts_per_seed rejections.
std::vector<std::string> select_missing(const Scm& scm, const QueryConfig& cfg, SplitMix64& rng);

// ceil(intervention_node_pct * n) endogenous variables; each forced to a
// value differing from the factual one whenever its reachable domain allows.
Intervention select_intervention(const Scm& scm, const Trace& factual, const QueryConfig& cfg,
                                 SplitMix64& rng);

// Scans seeds in [seed_start, seed_start + seed_budget); per seed runs up to
// attempts_per_seed randomized constructions (attempt RNG seeded by
// (seed, attempt) splitmix mixing) and emits the first instance satisfying
// the support, scenario, and effect constraints. Infeasible seeds are
// skipped. Stops early once max_count instances exist.
std::vector<QueryInstance> make_instances(const Scm& scm, QueryType type, const QueryConfig& cfg,
                                          std::uint64_t max_count);

struct VersionDataset {
  std::string scm_id;
  int version = 0;
  QueryType type = QueryType::Deduction;
  Scenario scenario = Scenario::Deterministic;
  std::vector<QueryInstance> instances;
  bool budget_exhausted = false;  // fewer than requested; reported, never padded
};

// per_version_count instances for every history version and every requested
// query type, under cfg. Short runs are flagged in the dataset record.
std::vector<VersionDataset> generate_dataset(const std::vector<Scm>& history,
                                             const std::vector<QueryType>& types,
                                             const QueryConfig& cfg, int per_version_count);

}  // namespace causim
