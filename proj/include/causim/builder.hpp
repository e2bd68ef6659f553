#pragma once

#include <memory>
#include <optional>

#include "causim/errors.hpp"
#include "causim/scm.hpp"
#include "causim/topology.hpp"

namespace causim {

// Symbolic growth plan; serializes to the planner wire schema with keys
// rationale, new_function, new_exo_noise, direct_parents, direct_children.
struct GrowthDecision {
  std::string rationale;
  std::string new_function;   // fresh "f_" name
  std::string new_exo_noise;  // fresh "U_" name
  std::vector<std::string> direct_parents;   // existing "f_" names
  std::vector<std::string> direct_children;  // existing "f_" names
  bool operator==(const GrowthDecision&) const = default;
};

// Localized edit realizing a decision: the new sampler and mechanism, plus
// replacement definitions for each direct child (which gain the new output
// variable as an input and drop inputs only where the topology's rewiring
// rules require).
struct GrowthPatch {
  CategoricalSampler new_sampler;
  Mechanism new_mechanism;
  std::map<std::string, Mechanism> child_rewrites;            // child mech name -> new def
  std::map<std::string, std::vector<std::string>> drops;      // child mech -> dropped parent mechs
  GrowthDecision decision;
};

struct GrowthStep {
  int version = 0;  // version produced (accepted) or attempted
  GrowthDecision decision;
  ValidationReport verification;  // empty iff accepted
  int attempts_used = 0;
  bool accepted = false;
};

struct GrowthLog {
  std::vector<GrowthStep> steps;
};

struct GrowthResult {
  Scm scm;                   // final version
  std::vector<Scm> history;  // every committed version, oldest first
  GrowthLog log;
};

struct VerificationFailed : Error {
  explicit VerificationFailed(ValidationReport r)
      : Error("VerificationFailed", r.to_string()), report(std::move(r)) {}
  ValidationReport report;
};

struct InitFailed : Error {
  explicit InitFailed(ValidationReport r)
      : Error("InitFailed", r.to_string()), report(std::move(r)) {}
  ValidationReport report;
};

struct GrowthAborted : Error {
  explicit GrowthAborted(GrowthResult partial)
      : Error("GrowthAborted", "failed to extend SCM at n=" +
                                   std::to_string(partial.scm.mechanisms.size())),
        partial(std::move(partial)) {}
  GrowthResult partial;  // every committed version is retained
};

struct InitSpec {
  std::string scm_id = "scm";
  int n0 = 1;
  TopologyKind topology = TopologyKind::Chain;
  std::string domain_tag = "nonsense";
  int retries = 3;  // K0
};

// What the executor sees, and nothing else: the decision, full definitions
// of the direct children, parent summaries (doc + output variable/domain),
// and the implied per-child drops translated to variable names.
struct ParentSummary {
  std::string mech_name;
  std::string output_var;
  std::string doc;
  Domain output_domain;
};

struct LocalContext {
  TopologyKind topology = TopologyKind::Chain;
  std::vector<ParentSummary> parents;           // decision order
  std::map<std::string, Mechanism> children;    // full definitions
  std::map<std::string, std::vector<std::string>> child_drop_vars;  // child -> parent vars to drop
};

// Provider contract realized by the builtin rule-based source, the one-shot
// baseline, and the external-endpoint bridge. The builder's verification
// loop remains the sole authority on acceptance.
class ProposalSource {
 public:
  virtual ~ProposalSource() = default;
  virtual Scm propose_init(const InitSpec& spec) = 0;
  virtual GrowthDecision propose_plan(const SemanticView& view, TopologyKind topology) = 0;
  virtual GrowthPatch propose_patch(const GrowthDecision& decision, const LocalContext& ctx) = 0;
};

// Fully offline source: samples uniformly from the legal insertions of the
// current graph, synthesizes fresh names ("f_" + 4 random uppercase
// letters), uniform samplers over fresh 2-4 value domains, and random total
// rule tables whose guards reference the exogenous parent plus at most two
// endogenous parents.
class BuiltinSource : public ProposalSource {
 public:
  explicit BuiltinSource(std::uint64_t seed, std::string domain_tag = "nonsense");
  Scm propose_init(const InitSpec& spec) override;
  GrowthDecision propose_plan(const SemanticView& view, TopologyKind topology) override;
  GrowthPatch propose_patch(const GrowthDecision& decision, const LocalContext& ctx) override;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Baseline that emits one full random graph proposal with local choices and
// no incremental loop; demonstrates why the grow/verify loop exists. Only
// propose_init is supported.
class OneShotSource : public ProposalSource {
 public:
  explicit OneShotSource(std::uint64_t seed);
  Scm propose_init(const InitSpec& spec) override;
  GrowthDecision propose_plan(const SemanticView& view, TopologyKind topology) override;
  GrowthPatch propose_patch(const GrowthDecision& decision, const LocalContext& ctx) override;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Implied rewiring for a planned insertion, as mechanism names. Chain and
// tree children shed all former parents; layered children shed parents that
// would land two layers up; star family and polytree children keep theirs.
std::map<std::string, std::vector<std::string>> derive_drops(
    const Scm& scm, const std::vector<std::string>& parents,
    const std::vector<std::string>& children);

// Draws up to spec.retries proposals; each must pass structure, topology,
// the size contract, and a smoke execution at seed 0. Throws InitFailed
// with the last report.
Scm init_scm(const InitSpec& spec, ProposalSource& source);

// Validates the proposal's names and wiring; throws PlanRejected.
GrowthDecision plan_growth(const SemanticView& view, TopologyKind topology,
                           ProposalSource& source);

// Builds the localized context (children definitions + parent docs only),
// obtains the patch, and shape-checks it; throws ExecRejected.
GrowthPatch apply_growth(const Scm& scm, const GrowthDecision& decision, ProposalSource& source);

// Applies the patch, re-validates everything (structure, topology, layered
// placement, smoke run at seed 0), and returns the committed version+1 SCM;
// throws VerificationFailed without mutating anything.
Scm verify_and_commit(const Scm& scm, const GrowthPatch& patch);

// Algorithm main loop: plan / apply / verify with up to `retries` attempts
// per step. Returns the final SCM, every committed version, and the growth
// log; throws GrowthAborted carrying the partial result on exhaustion.
GrowthResult grow_to(const Scm& scm, int target_n, int retries, ProposalSource& source);

}  // namespace causim
