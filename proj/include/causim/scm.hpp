#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causim/mechanism.hpp"
#include "causim/sampler.hpp"

namespace causim {

enum class TopologyKind { Chain, Star, InvertedStar, Tree, Layered, PolyTree };

// Serialized names: "chain", "star", "inverted_star", "tree", "layered", "poly_tree".
std::string topology_name(TopologyKind kind);
TopologyKind topology_from_name(const std::string& name);
const std::vector<TopologyKind>& all_topology_kinds();

// One versioned causal model. Immutable after construction; mutation happens
// only by building a new Scm. Graph-level invariants are not enforced by
// construction -- validate_structure reports them as data.
struct Scm {
  std::string scm_id;
  int version = 0;
  std::map<std::string, CategoricalSampler> samplers;
  std::map<std::string, Mechanism> mechanisms;
  TopologyKind topology = TopologyKind::Chain;
  std::vector<std::string> topo_order;  // mechanism names

  // Mechanism producing the given output variable, or nullptr.
  const Mechanism* mechanism_of_output(const std::string& var) const;
  // Mechanism consuming the given sampler, or nullptr.
  const Mechanism* mechanism_of_exo(const std::string& exo) const;
  // Directed endogenous edges as (parent mechanism, child mechanism) pairs,
  // sorted for deterministic iteration.
  std::vector<std::pair<std::string, std::string>> edges() const;

  bool operator==(const Scm&) const = default;
};

struct Violation {
  std::string code;
  std::string detail;
  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> items;
  bool ok() const { return items.empty(); }
  bool has(const std::string& code) const {
    for (const auto& v : items)
      if (v.code == code) return true;
    return false;
  }
  void add(std::string code, std::string detail) {
    items.push_back({std::move(code), std::move(detail)});
  }
  std::string to_string() const;
};

// Checks every structural invariant: exogenous bijection (EXO_SHARED,
// EXO_COUNT), acyclicity (CYCLE), weak connectivity (DISCONNECTED), the
// recorded order (TOPO_ORDER), naming (NAME_PREFIX), sampler domains
// (DOMAIN_EMPTY, WEIGHT_SUM), plus guard/parent wiring (GUARD_VAR,
// PARENT_UNKNOWN, PARENT_SELF, PARENT_DUP, DUP_OUTPUT, TOKEN).
// Violations are data, not failures.
ValidationReport validate_structure(const Scm& scm);

// Parents before children, ties broken by ascending mechanism name.
// Throws CycleDetected.
std::vector<std::string> topological_sort(const Scm& scm);

// Recomputes topo_order; convenience for builders.
Scm with_topo_order(Scm scm);

struct SamplerSummary {
  std::string name;
  std::string doc;
  Domain domain;
  bool operator==(const SamplerSummary&) const = default;
};

struct MechanismSummary {
  std::string name;
  std::string doc;
  std::vector<std::string> endo_parents;
  std::string exo_parent;
  Domain output_domain;  // declared
  bool operator==(const MechanismSummary&) const = default;
};

// Structure-plus-summaries projection handed to planners; contains no rule
// bodies by construction.
struct SemanticView {
  std::vector<SamplerSummary> samplers;       // ascending name
  std::vector<MechanismSummary> mechanisms;   // ascending name
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> topo_order;
  bool operator==(const SemanticView&) const = default;
};

SemanticView semantic_view(const Scm& scm);

// Exact reachable domain of every variable (exogenous and endogenous),
// computed in topological order: sampler domains are declared; a mechanism's
// domain is its reachable output set given its parents' reachable domains.
std::map<std::string, Domain> variable_domains(const Scm& scm);

// Declared domains: sampler entries and mechanisms' declared output domains.
std::map<std::string, Domain> declared_domains(const Scm& scm);

// Sub-model containing exactly the mechanisms that are ancestors of (and
// including) the mechanisms producing `vars`, with their samplers.
// Used for per-variable marginal computations.
Scm ancestral_submodel(const Scm& scm, const std::vector<std::string>& vars);

}  // namespace causim
