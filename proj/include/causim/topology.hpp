#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causim/scm.hpp"

namespace causim {

// A legal single-node insertion: the new mechanism's direct parents and
// children among existing mechanisms, plus the rewiring each child must
// perform (parents it drops when it adopts the new node). legal_insertions
// reports the implied rewiring so planners cannot propose inconsistent
// edits; apply_growth performs it atomically.
struct Insertion {
  std::vector<std::string> parents;   // sorted mechanism names
  std::vector<std::string> children;  // sorted mechanism names
  std::map<std::string, std::vector<std::string>> drops;  // child -> dropped parents

  bool operator==(const Insertion&) const = default;
  bool operator<(const Insertion& o) const {
    if (parents != o.parents) return parents < o.parents;
    if (children != o.children) return children < o.children;
    return drops < o.drops;
  }
};

// Mechanism-name graph; what topology legality is actually a property of.
// Planners build one from a semantic view, without any rule bodies.
struct GraphSpec {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;  // (parent, child)
};

GraphSpec graph_spec(const Scm& scm);
GraphSpec graph_spec(const SemanticView& view);

// Empty iff the endogenous graph satisfies every rule of scm.topology.
// Codes: CHAIN_FANOUT, CHAIN_FANIN, STAR_NO_HUB, STAR_MULTIPARENT,
// STAR_ORPHAN, INV_STAR_NO_SINK, INV_STAR_ORPHAN, TREE_MULTIPARENT,
// TREE_MULTIROOT, LAYER_SKIP, LAYER_INTERNAL_EDGE, POLYTREE_CYCLE.
ValidationReport validate_topology(const Scm& scm);
ValidationReport validate_topology(const GraphSpec& graph, TopologyKind kind);

// Layer assignment for LAYERED graphs: longest path from the roots,
// recomputed from the graph (no stored labels). Throws CycleDetected.
std::map<std::string, int> derive_layers(const Scm& scm);

// Exhaustive, duplicate-free, canonically ordered list of every insertion
// that keeps the topology valid after the implied rewiring. For tree and
// layered kinds the list is exponential in layer/subtree widths; a guard
// throws TooLarge beyond ~4M entries. An empty list is a valid return.
std::vector<Insertion> legal_insertions(const Scm& scm);
std::vector<Insertion> legal_insertions(const GraphSpec& graph, TopologyKind kind);

// Number of legal insertions, and the i-th insertion in family enumeration
// order, computed without materializing the list. count_legal_insertions
// agrees with legal_insertions().size(); nth_legal_insertion(graph, kind, i)
// for a uniform i draws uniformly from the legal set. Used by the builtin
// growth source so wide trees stay cheap to grow.
std::uint64_t count_legal_insertions(const GraphSpec& graph, TopologyKind kind);
Insertion nth_legal_insertion(const GraphSpec& graph, TopologyKind kind, std::uint64_t index);

// Builder-side placement check for LAYERED growth: verifies a new node's
// wiring against the pre-edit derived layering. Children adopted without
// drops must sit exactly one layer below the new node (same layer =>
// LAYER_INTERNAL_EDGE); children adopted with drops must sit in the layer
// the new node claims, dropping all their former parents.
ValidationReport validate_layered_placement(
    const Scm& pre, const std::vector<std::string>& parents,
    const std::vector<std::string>& children,
    const std::map<std::string, std::vector<std::string>>& drops);

}  // namespace causim
