#include "causim/scm.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

#include "causim/errors.hpp"

namespace causim {

Cond make_cond(std::string var, std::vector<SymbolValue> values) {
  Cond c;
  c.var = std::move(var);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  c.values = std::move(values);
  c.op = c.values.size() <= 1 ? Cond::Op::EQ : Cond::Op::IN;
  return c;
}

Domain Mechanism::declared_output_domain() const {
  Domain d;
  auto push = [&d](const SymbolValue& v) {
    if (!d.contains(v)) d.values.push_back(v);
  };
  for (const auto& r : rules.rules) push(r.output);
  push(rules.default_output);
  return d;
}

namespace {

// Sorted list of a mechanism's input variables.
std::vector<std::string> input_vars(const Mechanism& mech) {
  std::vector<std::string> vars = mech.endo_parents;
  vars.push_back(mech.exo_parent);
  std::sort(vars.begin(), vars.end());
  return vars;
}

SymbolValue apply_table(const Mechanism& mech,
                        const std::map<std::string, SymbolValue>& inputs) {
  for (const auto& rule : mech.rules.rules) {
    bool all = true;
    for (const auto& cond : rule.guard.conds) {
      auto it = inputs.find(cond.var);
      if (it == inputs.end() || !cond.matches(it->second)) {
        all = false;
        break;
      }
    }
    if (all) return rule.output;
  }
  return mech.rules.default_output;
}

}  // namespace

SymbolValue evaluate(const Mechanism& mech, const std::map<std::string, SymbolValue>& inputs,
                     const std::map<std::string, Domain>& input_domains) {
  auto vars = input_vars(mech);
  for (const auto& var : vars) {
    auto it = inputs.find(var);
    if (it == inputs.end()) throw MissingInput(mech.name + " needs " + var);
    auto dom = input_domains.find(var);
    if (dom != input_domains.end() && !dom->second.contains(it->second))
      throw UnknownValue(var, it->second);
  }
  if (inputs.size() != vars.size()) {
    for (const auto& [k, v] : inputs)
      if (!std::binary_search(vars.begin(), vars.end(), k))
        throw MissingInput(mech.name + " does not take " + k);
  }
  return apply_table(mech, inputs);
}

Domain output_domain(const Mechanism& mech, const std::map<std::string, Domain>& input_domains) {
  auto vars = input_vars(mech);
  std::vector<const Domain*> doms;
  for (const auto& var : vars) {
    auto it = input_domains.find(var);
    if (it == input_domains.end()) throw MissingInput(mech.name + " needs domain of " + var);
    doms.push_back(&it->second);
  }
  Domain reached;
  std::vector<size_t> idx(vars.size(), 0);
  std::map<std::string, SymbolValue> inputs;
  while (true) {
    for (size_t i = 0; i < vars.size(); ++i) {
      if (doms[i]->values.empty()) return reached;  // empty product
      inputs[vars[i]] = doms[i]->values[idx[i]];
    }
    SymbolValue out = apply_table(mech, inputs);
    if (!reached.contains(out)) reached.values.push_back(out);
    // odometer, last variable fastest
    size_t i = vars.size();
    while (i > 0) {
      --i;
      if (++idx[i] < doms[i]->values.size()) break;
      idx[i] = 0;
      if (i == 0) return reached;
    }
    if (vars.empty()) return reached;
  }
}

std::string topology_name(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Chain: return "chain";
    case TopologyKind::Star: return "star";
    case TopologyKind::InvertedStar: return "inverted_star";
    case TopologyKind::Tree: return "tree";
    case TopologyKind::Layered: return "layered";
    case TopologyKind::PolyTree: return "poly_tree";
  }
  return "chain";
}

TopologyKind topology_from_name(const std::string& name) {
  for (auto kind : all_topology_kinds())
    if (topology_name(kind) == name) return kind;
  throw SchemaError("unknown topology: " + name);
}

const std::vector<TopologyKind>& all_topology_kinds() {
  static const std::vector<TopologyKind> kinds = {
      TopologyKind::Chain,    TopologyKind::Star,    TopologyKind::InvertedStar,
      TopologyKind::Tree,     TopologyKind::Layered, TopologyKind::PolyTree};
  return kinds;
}

const Mechanism* Scm::mechanism_of_output(const std::string& var) const {
  for (const auto& [name, mech] : mechanisms)
    if (mech.output_var == var) return &mech;
  return nullptr;
}

const Mechanism* Scm::mechanism_of_exo(const std::string& exo) const {
  for (const auto& [name, mech] : mechanisms)
    if (mech.exo_parent == exo) return &mech;
  return nullptr;
}

std::vector<std::pair<std::string, std::string>> Scm::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, mech] : mechanisms) {
    for (const auto& pvar : mech.endo_parents) {
      const Mechanism* parent = mechanism_of_output(pvar);
      if (parent) out.emplace_back(parent->name, name);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : items) os << v.code << " (" << v.detail << "); ";
  return os.str();
}

namespace {

// Kahn with a name-ordered frontier; returns empty on cycle.
std::vector<std::string> try_topo_sort(const Scm& scm) {
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& [name, mech] : scm.mechanisms) indeg[name] = 0;
  for (const auto& [parent, child] : scm.edges()) {
    children[parent].push_back(child);
    indeg[child]++;
  }
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [name, d] : indeg)
    if (d == 0) ready.push(name);
  std::vector<std::string> order;
  while (!ready.empty()) {
    auto name = ready.top();
    ready.pop();
    order.push_back(name);
    for (const auto& child : children[name])
      if (--indeg[child] == 0) ready.push(child);
  }
  if (order.size() != scm.mechanisms.size()) return {};
  return order;
}

}  // namespace

std::vector<std::string> topological_sort(const Scm& scm) {
  auto order = try_topo_sort(scm);
  if (order.empty() && !scm.mechanisms.empty())
    throw CycleDetected("endogenous graph of " + scm.scm_id);
  return order;
}

Scm with_topo_order(Scm scm) {
  scm.topo_order = topological_sort(scm);
  return scm;
}

ValidationReport validate_structure(const Scm& scm) {
  ValidationReport report;

  for (const auto& [key, sampler] : scm.samplers) {
    if (key != sampler.name)
      report.add("NAME_PREFIX", "sampler map key " + key + " != " + sampler.name);
    if (sampler.name.rfind("U_", 0) != 0)
      report.add("NAME_PREFIX", "sampler " + sampler.name);
    if (sampler.entries.empty()) {
      report.add("DOMAIN_EMPTY", "sampler " + sampler.name);
    } else {
      Rational sum(0, 1);
      std::set<SymbolValue> seen;
      for (const auto& [value, weight] : sampler.entries) {
        if (!valid_token(value)) report.add("TOKEN", sampler.name + " value " + value);
        if (!seen.insert(value).second)
          report.add("DOMAIN_DUP", sampler.name + " value " + value);
        if (weight.num() <= 0 || Rational(1, 1) < weight)
          report.add("WEIGHT_RANGE", sampler.name + " weight " + weight.str());
        sum = sum + weight;
      }
      if (!(sum == Rational(1, 1)))
        report.add("WEIGHT_SUM", sampler.name + " sums to " + sum.str());
    }
  }

  std::map<std::string, int> exo_uses;
  std::map<std::string, std::string> output_owner;
  for (const auto& [key, mech] : scm.mechanisms) {
    if (key != mech.name)
      report.add("NAME_PREFIX", "mechanism map key " + key + " != " + mech.name);
    if (mech.name.rfind("f_", 0) != 0) report.add("NAME_PREFIX", "mechanism " + mech.name);
    if (!valid_token(mech.output_var)) report.add("TOKEN", mech.name + " output var");
    auto [it, fresh] = output_owner.emplace(mech.output_var, mech.name);
    if (!fresh) report.add("DUP_OUTPUT", mech.output_var + " from " + it->second + " and " + mech.name);

    if (!scm.samplers.count(mech.exo_parent))
      report.add("EXO_COUNT", mech.name + " exo parent " + mech.exo_parent + " not defined");
    exo_uses[mech.exo_parent]++;

    std::set<std::string> parents;
    for (const auto& pvar : mech.endo_parents) {
      if (pvar == mech.output_var) report.add("PARENT_SELF", mech.name);
      if (!parents.insert(pvar).second) report.add("PARENT_DUP", mech.name + " parent " + pvar);
    }

    for (const auto& rule : mech.rules.rules) {
      for (const auto& cond : rule.guard.conds) {
        if (cond.var == mech.exo_parent || parents.count(cond.var)) continue;
        if (cond.var.rfind("U_", 0) == 0)
          report.add("EXO_COUNT", mech.name + " guard uses foreign exogenous " + cond.var);
        else
          report.add("GUARD_VAR", mech.name + " guard uses undeclared " + cond.var);
      }
      if (rule.guard.conds.empty())
        report.add("GUARD_VAR", mech.name + " non-default rule with empty guard");
    }
  }

  for (const auto& [name, sampler] : scm.samplers)
    if (exo_uses.find(name) == exo_uses.end())
      report.add("EXO_COUNT", "sampler " + name + " feeds no mechanism");
  for (const auto& [name, uses] : exo_uses)
    if (uses > 1) report.add("EXO_SHARED", name + " feeds " + std::to_string(uses) + " mechanisms");

  // Endogenous parents must be produced by some mechanism.
  for (const auto& [name, mech] : scm.mechanisms)
    for (const auto& pvar : mech.endo_parents)
      if (!output_owner.count(pvar))
        report.add("PARENT_UNKNOWN", mech.name + " parent " + pvar);

  auto order = try_topo_sort(scm);
  if (order.empty() && !scm.mechanisms.empty()) {
    report.add("CYCLE", "endogenous graph");
  } else {
    // topo_order must be a valid topological order over exactly the mechanisms
    std::map<std::string, size_t> pos;
    bool shape_ok = scm.topo_order.size() == scm.mechanisms.size();
    for (size_t i = 0; i < scm.topo_order.size() && shape_ok; ++i) {
      if (!scm.mechanisms.count(scm.topo_order[i]) || pos.count(scm.topo_order[i])) shape_ok = false;
      pos[scm.topo_order[i]] = i;
    }
    if (!shape_ok) {
      report.add("TOPO_ORDER", "order does not cover mechanisms exactly");
    } else {
      for (const auto& [parent, child] : scm.edges())
        if (pos[parent] > pos[child]) {
          report.add("TOPO_ORDER", parent + " after " + child);
          break;
        }
    }
  }

  if (scm.mechanisms.size() >= 2) {
    // weak connectivity via union-find over undirected edges
    std::map<std::string, std::string> up;
    for (const auto& [name, mech] : scm.mechanisms) up[name] = name;
    std::function<std::string(std::string)> find = [&](std::string x) {
      while (up[x] != x) x = up[x] = up[up[x]];
      return x;
    };
    for (const auto& [a, b] : scm.edges()) up[find(a)] = find(b);
    std::set<std::string> roots;
    for (const auto& [name, mech] : scm.mechanisms) roots.insert(find(name));
    if (roots.size() > 1)
      report.add("DISCONNECTED", std::to_string(roots.size()) + " components");
  }

  return report;
}

SemanticView semantic_view(const Scm& scm) {
  SemanticView view;
  for (const auto& [name, sampler] : scm.samplers)
    view.samplers.push_back({name, sampler.doc, sampler.domain()});
  for (const auto& [name, mech] : scm.mechanisms)
    view.mechanisms.push_back(
        {name, mech.doc, mech.endo_parents, mech.exo_parent, mech.declared_output_domain()});
  view.edges = scm.edges();
  view.topo_order = scm.topo_order;
  return view;
}

std::map<std::string, Domain> declared_domains(const Scm& scm) {
  std::map<std::string, Domain> domains;
  for (const auto& [name, sampler] : scm.samplers) domains[name] = sampler.domain();
  for (const auto& [name, mech] : scm.mechanisms)
    domains[mech.output_var] = mech.declared_output_domain();
  return domains;
}

std::map<std::string, Domain> variable_domains(const Scm& scm) {
  std::map<std::string, Domain> domains;
  for (const auto& [name, sampler] : scm.samplers) domains[name] = sampler.domain();
  for (const auto& name : scm.topo_order) {
    const Mechanism& mech = scm.mechanisms.at(name);
    domains[mech.output_var] = output_domain(mech, domains);
  }
  return domains;
}

Scm ancestral_submodel(const Scm& scm, const std::vector<std::string>& vars) {
  std::set<std::string> keep;  // mechanism names
  std::vector<const Mechanism*> frontier;
  for (const auto& var : vars) {
    const Mechanism* m = scm.mechanism_of_output(var);
    if (!m) throw SchemaError("no mechanism outputs " + var);
    if (keep.insert(m->name).second) frontier.push_back(m);
  }
  while (!frontier.empty()) {
    const Mechanism* m = frontier.back();
    frontier.pop_back();
    for (const auto& pvar : m->endo_parents) {
      const Mechanism* p = scm.mechanism_of_output(pvar);
      if (p && keep.insert(p->name).second) frontier.push_back(p);
    }
  }
  Scm sub;
  sub.scm_id = scm.scm_id + ":sub";
  sub.version = scm.version;
  sub.topology = scm.topology;
  for (const auto& name : keep) {
    const Mechanism& mech = scm.mechanisms.at(name);
    sub.mechanisms[name] = mech;
    sub.samplers[mech.exo_parent] = scm.samplers.at(mech.exo_parent);
  }
  for (const auto& name : scm.topo_order)
    if (keep.count(name)) sub.topo_order.push_back(name);
  return sub;
}

}  // namespace causim
