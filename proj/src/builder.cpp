#include "causim/builder.hpp"

#include <algorithm>
#include <set>

#include "causim/engine.hpp"
#include "causim/splitmix.hpp"

namespace causim {

namespace {

const char* kConsonants = "bcdfgklmnprstvz";
const char* kVowels = "aeiou";

std::string nonsense_token(SplitMix64& rng) {
  std::string t;
  int syllables = 1 + static_cast<int>(rng.below(2));
  for (int i = 0; i < syllables; ++i) {
    t.push_back(kConsonants[rng.below(15)]);
    t.push_back(kVowels[rng.below(5)]);
  }
  return t;
}

std::string upper_letters(SplitMix64& rng, int n) {
  std::string t;
  for (int i = 0; i < n; ++i) t.push_back(static_cast<char>('A' + rng.below(26)));
  return t;
}

std::vector<SymbolValue> fresh_domain(SplitMix64& rng, size_t size) {
  std::set<SymbolValue> seen;
  std::vector<SymbolValue> out;
  while (out.size() < size) {
    auto t = nonsense_token(rng);
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

// Random subset guard over a known value pool; full-pool guards are allowed
// (they just always match).
Cond random_cond(SplitMix64& rng, const std::string& var, const std::vector<SymbolValue>& pool) {
  std::uint64_t mask = 1 + rng.below((1ULL << std::min<size_t>(pool.size(), 16)) - 1);
  std::vector<SymbolValue> values;
  for (size_t i = 0; i < pool.size() && i < 16; ++i)
    if (mask & (1ULL << i)) values.push_back(pool[i]);
  return make_cond(var, std::move(values));
}

RuleTable random_table(SplitMix64& rng, const std::string& exo_var,
                       const std::vector<SymbolValue>& exo_pool,
                       const std::vector<std::pair<std::string, std::vector<SymbolValue>>>& endo_pools,
                       const std::vector<SymbolValue>& out_domain) {
  RuleTable table;
  int rules = 1 + static_cast<int>(rng.below(3));
  for (int r = 0; r < rules; ++r) {
    Rule rule;
    rule.guard.conds.push_back(random_cond(rng, exo_var, exo_pool));
    if (!endo_pools.empty()) {
      int extra = static_cast<int>(rng.below(std::min<size_t>(endo_pools.size(), 2) + 1));
      std::set<size_t> used;
      for (int e = 0; e < extra; ++e) {
        size_t pick = rng.below(endo_pools.size());
        if (!used.insert(pick).second) continue;
        const auto& [var, pool] = endo_pools[pick];
        if (!pool.empty()) rule.guard.conds.push_back(random_cond(rng, var, pool));
      }
    }
    rule.output = out_domain[rng.below(out_domain.size())];
    table.rules.push_back(std::move(rule));
  }
  table.default_output = out_domain[rng.below(out_domain.size())];
  return table;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

std::string quoted_list(const std::vector<SymbolValue>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + values[i] + "\"";
  }
  return out;
}

std::string mechanism_doc(const std::string& out_var, const std::vector<std::string>& parent_vars,
                          const std::string& exo, const Domain& out_domain) {
  std::string purpose = parent_vars.empty()
                            ? "Purpose: derive " + out_var + " from noise " + exo + "."
                            : "Purpose: combine " + join(parent_vars) + " with noise " + exo +
                                  " into " + out_var + ".";
  return purpose + " Output: one of " + quoted_list(out_domain.values) + ".";
}

// Values a variable is already compared against in a rule table; the only
// vocabulary a local rewrite may use for inherited inputs.
std::map<std::string, std::vector<SymbolValue>> mentioned_values(const Mechanism& mech) {
  std::map<std::string, std::vector<SymbolValue>> pools;
  for (const auto& rule : mech.rules.rules)
    for (const auto& cond : rule.guard.conds)
      for (const auto& v : cond.values) {
        auto& pool = pools[cond.var];
        if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
      }
  return pools;
}

// Shared fresh-name / sampler / rule-table synthesis for the offline sources.
struct Synthesizer {
  SplitMix64 rng;
  std::string domain_tag;
  Synthesizer(std::uint64_t seed, std::string tag) : rng(seed), domain_tag(std::move(tag)) {}

  std::string fresh_suffix(const std::set<std::string>& taken) {
    for (;;) {
      std::string s = upper_letters(rng, 4);
      if (!taken.count("f_" + s) && !taken.count("U_" + s)) return s;
    }
  }

  CategoricalSampler make_sampler(const std::string& name) {
    auto values = fresh_domain(rng, 2 + rng.below(3));
    auto sampler = uniform_sampler(name, values);
    sampler.doc = "Uniform " + domain_tag + " noise over " + quoted_list(values) + ".";
    return sampler;
  }

  Mechanism make_mechanism(const std::string& name, const std::string& out_var,
                           const std::vector<std::string>& parent_vars,
                           const std::vector<std::pair<std::string, std::vector<SymbolValue>>>& pools,
                           const CategoricalSampler& sampler) {
    Mechanism mech;
    mech.name = name;
    mech.output_var = out_var;
    mech.endo_parents = parent_vars;
    mech.exo_parent = sampler.name;
    auto out_values = fresh_domain(rng, 2 + rng.below(3));
    mech.rules = random_table(rng, sampler.name, sampler.domain().values, pools, out_values);
    mech.doc = mechanism_doc(out_var, parent_vars, sampler.name, mech.declared_output_domain());
    return mech;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

struct BuiltinSource::Impl : Synthesizer {
  using Synthesizer::Synthesizer;
};

BuiltinSource::BuiltinSource(std::uint64_t seed, std::string domain_tag)
    : impl_(std::make_shared<Impl>(seed, std::move(domain_tag))) {}

Scm BuiltinSource::propose_init(const InitSpec& spec) {
  Scm scm;
  scm.scm_id = spec.scm_id;
  scm.topology = spec.topology;
  std::string suffix = impl_->fresh_suffix({});
  auto sampler = impl_->make_sampler("U_" + suffix);
  auto mech = impl_->make_mechanism("f_" + suffix, suffix, {}, {}, sampler);
  scm.samplers[sampler.name] = sampler;
  scm.mechanisms[mech.name] = mech;
  scm.topo_order = {mech.name};
  scm.version = 1;
  if (spec.n0 > 1) {
    auto grown = grow_to(scm, spec.n0, spec.retries, *this);
    scm = grown.scm;
  }
  scm.version = spec.n0;
  return scm;
}

GrowthDecision BuiltinSource::propose_plan(const SemanticView& view, TopologyKind topology) {
  GraphSpec graph = graph_spec(view);
  std::uint64_t total = count_legal_insertions(graph, topology);
  if (total == 0) throw PlanRejected("no legal insertion exists");
  Insertion ins = nth_legal_insertion(graph, topology, impl_->rng.below(total));

  std::set<std::string> taken;
  for (const auto& s : view.samplers) taken.insert(s.name);
  for (const auto& m : view.mechanisms) taken.insert(m.name);
  std::string suffix = impl_->fresh_suffix(taken);

  GrowthDecision d;
  d.new_function = "f_" + suffix;
  d.new_exo_noise = "U_" + suffix;
  d.direct_parents = ins.parents;
  d.direct_children = ins.children;
  d.rationale = "Insert " + d.new_function + " into the " + topology_name(topology) +
                " with parents [" + join(ins.parents) + "] and children [" + join(ins.children) +
                "].";
  return d;
}

GrowthPatch BuiltinSource::propose_patch(const GrowthDecision& decision, const LocalContext& ctx) {
  GrowthPatch patch;
  patch.decision = decision;
  patch.new_sampler = impl_->make_sampler(decision.new_exo_noise);

  std::vector<std::string> parent_vars;
  std::vector<std::pair<std::string, std::vector<SymbolValue>>> pools;
  for (const auto& p : ctx.parents) {
    parent_vars.push_back(p.output_var);
    pools.emplace_back(p.output_var, p.output_domain.values);
  }
  std::string out_var = decision.new_function.substr(2);
  patch.new_mechanism = impl_->make_mechanism(decision.new_function, out_var, parent_vars, pools,
                                              patch.new_sampler);

  Domain new_out = patch.new_mechanism.declared_output_domain();
  for (const auto& [child_name, child] : ctx.children) {
    Mechanism rewrite = child;
    auto dropped = ctx.child_drop_vars.find(child_name);
    if (dropped != ctx.child_drop_vars.end()) {
      for (const auto& var : dropped->second) {
        auto& ps = rewrite.endo_parents;
        ps.erase(std::remove(ps.begin(), ps.end(), var), ps.end());
      }
    }
    rewrite.endo_parents.push_back(out_var);

    // Rebuild the table over the surviving inputs. Value vocabulary for
    // inherited inputs comes from the child's own previous rules.
    auto pools_by_var = mentioned_values(child);
    std::vector<std::pair<std::string, std::vector<SymbolValue>>> endo_pools;
    for (const auto& var : rewrite.endo_parents) {
      if (var == out_var) endo_pools.emplace_back(var, new_out.values);
      else if (pools_by_var.count(var)) endo_pools.emplace_back(var, pools_by_var[var]);
    }
    Domain keep = child.declared_output_domain();
    auto exo_pool = pools_by_var.count(child.exo_parent) ? pools_by_var[child.exo_parent]
                                                         : std::vector<SymbolValue>{};
    RuleTable table;
    if (exo_pool.empty()) {
      // child never inspected its noise before; guard on the new input only
      int rules = 1 + static_cast<int>(impl_->rng.below(2));
      for (int r = 0; r < rules; ++r) {
        Rule rule;
        rule.guard.conds.push_back(random_cond(impl_->rng, out_var, new_out.values));
        rule.output = keep.values[impl_->rng.below(keep.values.size())];
        table.rules.push_back(std::move(rule));
      }
      table.default_output = child.rules.default_output;
    } else {
      std::vector<std::pair<std::string, std::vector<SymbolValue>>> mix = endo_pools;
      table = random_table(impl_->rng, child.exo_parent, exo_pool, mix, keep.values);
      table.default_output = child.rules.default_output;
      // every rewritten child must actually consume the new input
      for (auto& rule : table.rules) {
        bool uses_new = false;
        for (const auto& cond : rule.guard.conds) uses_new |= cond.var == out_var;
        if (!uses_new)
          rule.guard.conds.push_back(random_cond(impl_->rng, out_var, new_out.values));
      }
    }
    rewrite.rules = std::move(table);
    rewrite.doc = mechanism_doc(rewrite.output_var, rewrite.endo_parents, rewrite.exo_parent,
                                rewrite.declared_output_domain());
    patch.child_rewrites[child_name] = std::move(rewrite);
  }
  return patch;
}

// ---------------------------------------------------------------------------

struct OneShotSource::Impl {
  SplitMix64 rng;
  explicit Impl(std::uint64_t seed) : rng(seed) {}
};

OneShotSource::OneShotSource(std::uint64_t seed) : impl_(std::make_shared<Impl>(seed)) {}

Scm OneShotSource::propose_init(const InitSpec& spec) {
  // One full-graph proposal from purely local random choices: each new node
  // wires itself without looking at the global constraint, which is exactly
  // what goes wrong at scale without a verification loop.
  Synthesizer synth(impl_->rng.next(), spec.domain_tag);
  SplitMix64& rng = synth.rng;

  Scm scm;
  scm.scm_id = spec.scm_id;
  scm.topology = spec.topology;
  scm.version = spec.n0;

  struct Node {
    std::string name;
    std::string var;
    int layer = 0;
  };
  std::vector<Node> nodes;
  std::set<std::string> taken;
  int max_layer = 0;

  for (int i = 0; i < spec.n0; ++i) {
    std::string suffix = synth.fresh_suffix(taken);
    taken.insert("f_" + suffix);
    taken.insert("U_" + suffix);
    auto sampler = synth.make_sampler("U_" + suffix);

    std::vector<std::string> parent_vars;
    int layer = 0;
    if (i > 0) {
      switch (spec.topology) {
        case TopologyKind::Chain:
        case TopologyKind::Star:
        case TopologyKind::Tree:
          parent_vars.push_back(nodes[rng.below(nodes.size())].var);
          break;
        case TopologyKind::InvertedStar:
          // new node becomes a parent of some existing node
          break;
        case TopologyKind::PolyTree:
          if (rng.below(2)) parent_vars.push_back(nodes[rng.below(nodes.size())].var);
          break;
        case TopologyKind::Layered: {
          layer = static_cast<int>(rng.below(max_layer + 2));
          std::vector<const Node*> below;
          for (const auto& n : nodes)
            if (n.layer == layer - 1) below.push_back(&n);
          if (!below.empty()) {
            size_t picks = 1 + rng.below(std::min<size_t>(below.size(), 2));
            std::set<std::string> used;
            for (size_t p = 0; p < picks; ++p) {
              const Node* pick = below[rng.below(below.size())];
              if (used.insert(pick->var).second) parent_vars.push_back(pick->var);
            }
          }
          break;
        }
      }
    }

    auto mech = synth.make_mechanism("f_" + suffix, suffix, parent_vars, {}, sampler);
    scm.samplers[sampler.name] = sampler;
    scm.mechanisms[mech.name] = mech;
    nodes.push_back({mech.name, suffix, layer});
    max_layer = std::max(max_layer, layer);

    if (spec.topology == TopologyKind::InvertedStar && i > 0) {
      // re-wire: attach as parent of a random existing node
      Node& target = nodes[rng.below(nodes.size() - 1)];
      scm.mechanisms[target.name].endo_parents.push_back(suffix);
    }
    if (spec.topology == TopologyKind::PolyTree && parent_vars.empty() && i > 0) {
      Node& target = nodes[rng.below(nodes.size() - 1)];
      scm.mechanisms[target.name].endo_parents.push_back(suffix);
    }
  }
  try {
    scm.topo_order = topological_sort(scm);
  } catch (const CycleDetected&) {
    scm.topo_order.clear();  // verification will report it
  }
  return scm;
}

GrowthDecision OneShotSource::propose_plan(const SemanticView&, TopologyKind) {
  throw PlanRejected("one-shot source does not plan incremental growth");
}

GrowthPatch OneShotSource::propose_patch(const GrowthDecision&, const LocalContext&) {
  throw ExecRejected("one-shot source does not execute incremental growth");
}

// ---------------------------------------------------------------------------

std::map<std::string, std::vector<std::string>> derive_drops(
    const Scm& scm, const std::vector<std::string>& parents,
    const std::vector<std::string>& children) {
  std::map<std::string, std::vector<std::string>> drops;
  auto parent_mechs_of = [&scm](const std::string& child) {
    std::vector<std::string> out;
    const Mechanism& mech = scm.mechanisms.at(child);
    for (const auto& var : mech.endo_parents) {
      const Mechanism* p = scm.mechanism_of_output(var);
      if (p) out.push_back(p->name);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  switch (scm.topology) {
    case TopologyKind::Chain:
    case TopologyKind::Tree:
      for (const auto& child : children) {
        auto ps = parent_mechs_of(child);
        if (!ps.empty()) drops[child] = ps;
      }
      break;
    case TopologyKind::Layered: {
      auto layer = derive_layers(scm);
      int k = 0;
      if (!parents.empty()) {
        int l = -1;
        for (const auto& p : parents) {
          auto it = layer.find(p);
          if (it == layer.end()) return drops;
          if (l >= 0 && l != it->second) return drops;  // malformed; verification reports it
          l = it->second;
        }
        k = l + 1;
      }
      for (const auto& child : children) {
        auto it = layer.find(child);
        if (it != layer.end() && it->second == k) {
          auto ps = parent_mechs_of(child);
          if (!ps.empty()) drops[child] = ps;
        }
      }
      break;
    }
    default:
      break;
  }
  return drops;
}

Scm init_scm(const InitSpec& spec, ProposalSource& source) {
  if (spec.n0 < 1) throw std::invalid_argument("n0 must be >= 1");
  ValidationReport last;
  last.add("NO_PROPOSAL", "source produced no candidate");
  for (int attempt = 0; attempt < spec.retries; ++attempt) {
    Scm cand;
    try {
      cand = source.propose_init(spec);
    } catch (const Error& e) {
      last = ValidationReport{};
      last.add("PROPOSAL_ERROR", e.what());
      continue;
    }
    cand.scm_id = spec.scm_id;
    cand.version = spec.n0;
    ValidationReport report = validate_structure(cand);
    if (report.ok()) {
      auto topo = validate_topology(cand);
      report.items.insert(report.items.end(), topo.items.begin(), topo.items.end());
    }
    if (static_cast<int>(cand.mechanisms.size()) != spec.n0)
      report.add("NODE_COUNT", std::to_string(cand.mechanisms.size()) + " mechanisms, expected " +
                                   std::to_string(spec.n0));
    if (report.ok()) {
      try {
        forward(cand, sample_exogenous(cand, 0));
      } catch (const Error& e) {
        report.add("SMOKE", e.what());
      }
    }
    if (report.ok()) return cand;
    last = std::move(report);
  }
  throw InitFailed(last);
}

GrowthDecision plan_growth(const SemanticView& view, TopologyKind topology,
                           ProposalSource& source) {
  GrowthDecision d = source.propose_plan(view, topology);
  std::set<std::string> mechs, samplers;
  for (const auto& m : view.mechanisms) mechs.insert(m.name);
  for (const auto& s : view.samplers) samplers.insert(s.name);

  if (d.new_function.rfind("f_", 0) != 0 || !valid_token(d.new_function))
    throw PlanRejected("new_function must be a fresh f_ name");
  if (d.new_exo_noise.rfind("U_", 0) != 0 || !valid_token(d.new_exo_noise))
    throw PlanRejected("new_exo_noise must be a fresh U_ name");
  if (mechs.count(d.new_function)) throw PlanRejected(d.new_function + " already exists");
  if (samplers.count(d.new_exo_noise)) throw PlanRejected(d.new_exo_noise + " already exists");
  std::set<std::string> parents(d.direct_parents.begin(), d.direct_parents.end());
  for (const auto& p : d.direct_parents)
    if (!mechs.count(p)) throw PlanRejected("unknown parent " + p);
  for (const auto& c : d.direct_children) {
    if (!mechs.count(c)) throw PlanRejected("unknown child " + c);
    if (parents.count(c)) throw PlanRejected(c + " listed as both parent and child");
  }
  return d;
}

GrowthPatch apply_growth(const Scm& scm, const GrowthDecision& decision, ProposalSource& source) {
  for (const auto& p : decision.direct_parents)
    if (!scm.mechanisms.count(p)) throw ExecRejected("unknown parent " + p);
  for (const auto& c : decision.direct_children)
    if (!scm.mechanisms.count(c)) throw ExecRejected("unknown child " + c);
  if (scm.mechanisms.count(decision.new_function) || scm.samplers.count(decision.new_exo_noise))
    throw ExecRejected("decision names collide with the current SCM");

  auto drops = derive_drops(scm, decision.direct_parents, decision.direct_children);

  LocalContext ctx;
  ctx.topology = scm.topology;
  for (const auto& p : decision.direct_parents) {
    const Mechanism& mech = scm.mechanisms.at(p);
    ctx.parents.push_back({p, mech.output_var, mech.doc, mech.declared_output_domain()});
  }
  for (const auto& c : decision.direct_children) ctx.children[c] = scm.mechanisms.at(c);
  for (const auto& [child, parent_mechs] : drops) {
    std::vector<std::string> vars;
    for (const auto& pm : parent_mechs) vars.push_back(scm.mechanisms.at(pm).output_var);
    ctx.child_drop_vars[child] = std::move(vars);
  }

  GrowthPatch patch = source.propose_patch(decision, ctx);
  patch.decision = decision;
  patch.drops = drops;

  if (patch.new_sampler.name != decision.new_exo_noise)
    throw ExecRejected("patch sampler name does not match the decision");
  if (patch.new_mechanism.name != decision.new_function)
    throw ExecRejected("patch mechanism name does not match the decision");
  if (patch.new_mechanism.exo_parent != decision.new_exo_noise)
    throw ExecRejected("new mechanism must consume the new sampler");
  {
    std::set<std::string> want;
    for (const auto& p : ctx.parents) want.insert(p.output_var);
    std::set<std::string> got(patch.new_mechanism.endo_parents.begin(),
                              patch.new_mechanism.endo_parents.end());
    if (want != got) throw ExecRejected("new mechanism parents do not match the decision");
  }
  std::set<std::string> child_set(decision.direct_children.begin(),
                                  decision.direct_children.end());
  for (const auto& [name, rewrite] : patch.child_rewrites) {
    if (!child_set.count(name)) throw ExecRejected("rewrite touches non-child " + name);
    const Mechanism& old = scm.mechanisms.at(name);
    if (rewrite.name != old.name || rewrite.output_var != old.output_var ||
        rewrite.exo_parent != old.exo_parent)
      throw ExecRejected("rewrite of " + name + " changes its identity");
    bool gained = std::find(rewrite.endo_parents.begin(), rewrite.endo_parents.end(),
                            patch.new_mechanism.output_var) != rewrite.endo_parents.end();
    if (!gained) throw ExecRejected("rewrite of " + name + " does not take the new input");
    std::set<std::string> expect(old.endo_parents.begin(), old.endo_parents.end());
    auto dropped = ctx.child_drop_vars.find(name);
    if (dropped != ctx.child_drop_vars.end())
      for (const auto& var : dropped->second) expect.erase(var);
    expect.insert(patch.new_mechanism.output_var);
    std::set<std::string> got(rewrite.endo_parents.begin(), rewrite.endo_parents.end());
    if (expect != got) throw ExecRejected("rewrite of " + name + " mis-wires its parents");
  }
  for (const auto& c : decision.direct_children)
    if (!patch.child_rewrites.count(c)) throw ExecRejected("missing rewrite for child " + c);
  return patch;
}

Scm verify_and_commit(const Scm& scm, const GrowthPatch& patch) {
  Scm next = scm;
  next.version = scm.version + 1;
  next.samplers[patch.new_sampler.name] = patch.new_sampler;
  next.mechanisms[patch.new_mechanism.name] = patch.new_mechanism;
  for (const auto& [name, rewrite] : patch.child_rewrites) {
    if (!next.mechanisms.count(name)) throw VerificationFailed([&] {
        ValidationReport r;
        r.add("PATCH_CHILD", name);
        return r;
      }());
    next.mechanisms[name] = rewrite;
  }

  ValidationReport report;
  if (scm.topology == TopologyKind::Layered) {
    auto placement = validate_layered_placement(scm, patch.decision.direct_parents,
                                                patch.decision.direct_children, patch.drops);
    report.items.insert(report.items.end(), placement.items.begin(), placement.items.end());
  }
  try {
    next.topo_order = topological_sort(next);
  } catch (const CycleDetected&) {
    report.add("CYCLE", "patched graph");
    throw VerificationFailed(report);
  }
  auto structure = validate_structure(next);
  report.items.insert(report.items.end(), structure.items.begin(), structure.items.end());
  if (structure.ok()) {
    auto topo = validate_topology(next);
    report.items.insert(report.items.end(), topo.items.begin(), topo.items.end());
  }
  if (next.mechanisms.size() != scm.mechanisms.size() + 1)
    report.add("NODE_COUNT", "patched SCM did not gain exactly one mechanism");
  if (report.ok()) {
    try {
      forward(next, sample_exogenous(next, 0));
    } catch (const Error& e) {
      report.add("SMOKE", e.what());
    }
  }
  if (!report.ok()) throw VerificationFailed(report);
  return next;
}

GrowthResult grow_to(const Scm& scm, int target_n, int retries, ProposalSource& source) {
  GrowthResult result{scm, {scm}, {}};
  Scm current = scm;
  while (static_cast<int>(current.mechanisms.size()) < target_n) {
    GrowthStep step;
    bool accepted = false;
    for (int attempt = 0; attempt < retries && !accepted; ++attempt) {
      ++step.attempts_used;
      try {
        GrowthDecision decision = plan_growth(semantic_view(current), current.topology, source);
        step.decision = decision;
        GrowthPatch patch = apply_growth(current, decision, source);
        Scm next = verify_and_commit(current, patch);
        step.version = next.version;
        step.verification = ValidationReport{};
        step.accepted = true;
        current = std::move(next);
        result.history.push_back(current);
        accepted = true;
      } catch (const VerificationFailed& e) {
        step.verification = e.report;
      } catch (const PlanRejected& e) {
        step.verification = ValidationReport{};
        step.verification.add("PLAN_REJECTED", e.what());
      } catch (const ExecRejected& e) {
        step.verification = ValidationReport{};
        step.verification.add("EXEC_REJECTED", e.what());
      }
    }
    result.log.steps.push_back(step);
    if (!accepted) {
      result.scm = current;
      throw GrowthAborted(std::move(result));
    }
  }
  result.scm = current;
  return result;
}

}  // namespace causim
