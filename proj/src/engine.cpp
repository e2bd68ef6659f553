#include "causim/engine.hpp"

#include <algorithm>
#include <set>

#include "causim/errors.hpp"
#include "causim/splitmix.hpp"

namespace causim {

std::string query_type_name(QueryType t) {
  switch (t) {
    case QueryType::Deduction: return "deduction";
    case QueryType::Abduction: return "abduction";
    case QueryType::Intervention: return "intervention";
    case QueryType::Counterfactual: return "counterfactual";
  }
  return "deduction";
}

QueryType query_type_from_name(const std::string& name) {
  if (name == "deduction") return QueryType::Deduction;
  if (name == "abduction") return QueryType::Abduction;
  if (name == "intervention") return QueryType::Intervention;
  if (name == "counterfactual") return QueryType::Counterfactual;
  throw SchemaError("unknown query type: " + name);
}

ExoAssignment sample_exogenous(const Scm& scm, std::uint64_t seed) {
  SplitMix64 stream(seed);
  ExoAssignment out;
  for (const auto& [name, sampler] : scm.samplers) {  // std::map: ascending name
    std::uint64_t r = stream.next();
    Rational cum(0, 1);
    const SymbolValue* picked = nullptr;
    for (const auto& [value, weight] : sampler.entries) {
      cum = cum + weight;
      // r / 2^64 < cum  <=>  r * den < num * 2^64
      unsigned __int128 lhs = (unsigned __int128)r * (unsigned __int128)cum.den();
      unsigned __int128 rhs = (unsigned __int128)cum.num() << 64;
      if (lhs < rhs) {
        picked = &value;
        break;
      }
    }
    if (!picked) picked = &sampler.entries.back().first;  // cum rounds short of 1
    out[name] = *picked;
  }
  return out;
}

std::pair<EndoAssignment, Trace> forward(const Scm& scm, const ExoAssignment& u,
                                         const std::optional<Intervention>& do_op) {
  Trace trace;
  std::map<std::string, Domain> exo_domains;
  for (const auto& [name, sampler] : scm.samplers) {
    auto it = u.find(name);
    if (it == u.end()) throw MissingInput(name);
    exo_domains[name] = sampler.domain();
    if (!exo_domains[name].contains(it->second)) throw UnknownValue(name, it->second);
    trace.exo[name] = it->second;
    trace.calls.emplace_back(name, it->second);
  }
  std::map<std::string, SymbolValue> values = trace.exo;
  for (const auto& name : scm.topo_order) {
    const Mechanism& mech = scm.mechanisms.at(name);
    if (do_op) {
      auto forced = do_op->find(mech.output_var);
      if (forced != do_op->end()) {
        values[mech.output_var] = forced->second;
        trace.endo[mech.output_var] = forced->second;
        continue;  // mechanism skipped, not logged as a call
      }
    }
    std::map<std::string, SymbolValue> inputs;
    for (const auto& p : mech.endo_parents) inputs[p] = values.at(p);
    inputs[mech.exo_parent] = values.at(mech.exo_parent);
    SymbolValue out = evaluate(mech, inputs, exo_domains);
    values[mech.output_var] = out;
    trace.endo[mech.output_var] = out;
    trace.calls.emplace_back(name, out);
  }
  return {trace.endo, trace};
}

namespace {

// ----- compiled enumeration ------------------------------------------------
// Variables interned to slots, values to per-slot indices, guards to
// bitmask tests. Built once per support computation; the value tables are
// extended with query constants (do / evidence values outside the declared
// domains) so comparisons stay index-based.

struct Mask {
  std::vector<std::uint64_t> words;
  void set(int i) {
    size_t w = static_cast<size_t>(i) >> 6;
    if (words.size() <= w) words.resize(w + 1, 0);
    words[w] |= 1ULL << (i & 63);
  }
  bool test(int i) const {
    size_t w = static_cast<size_t>(i) >> 6;
    return w < words.size() && (words[w] >> (i & 63)) & 1;
  }
};

struct CompiledCond {
  int slot;
  Mask mask;
};

struct CompiledRule {
  std::vector<CompiledCond> conds;
  int output;
};

struct CompiledMech {
  int out_slot;
  std::vector<CompiledRule> rules;
  int default_output;
  int forced = -1;  // intervened value index, or -1
};

struct Compiled {
  std::vector<std::string> slot_names;
  std::vector<std::vector<SymbolValue>> slot_values;
  std::map<std::string, int> slot_of;
  std::vector<CompiledMech> mechs;  // topological order
  std::vector<int> endo_slots;      // ascending output-variable name
  std::vector<std::string> endo_vars;

  int slot(const std::string& name) const { return slot_of.at(name); }
  int intern(int s, const SymbolValue& v) {
    auto& vals = slot_values[s];
    for (size_t i = 0; i < vals.size(); ++i)
      if (vals[i] == v) return static_cast<int>(i);
    vals.push_back(v);
    return static_cast<int>(vals.size()) - 1;
  }
};

Compiled compile(const Scm& scm, const std::optional<Intervention>& do_op,
                 const std::optional<EndoAssignment>& evidence) {
  Compiled c;
  auto add_slot = [&c](const std::string& name, std::vector<SymbolValue> values) {
    c.slot_of[name] = static_cast<int>(c.slot_names.size());
    c.slot_names.push_back(name);
    c.slot_values.push_back(std::move(values));
  };
  for (const auto& [name, sampler] : scm.samplers) add_slot(name, sampler.domain().values);
  for (const auto& [name, mech] : scm.mechanisms)
    add_slot(mech.output_var, mech.declared_output_domain().values);

  if (do_op)
    for (const auto& [var, value] : *do_op) c.intern(c.slot(var), value);
  if (evidence)
    for (const auto& [var, value] : *evidence) c.intern(c.slot(var), value);

  for (const auto& name : scm.topo_order) {
    const Mechanism& mech = scm.mechanisms.at(name);
    CompiledMech cm;
    cm.out_slot = c.slot(mech.output_var);
    cm.default_output = c.intern(cm.out_slot, mech.rules.default_output);
    for (const auto& rule : mech.rules.rules) {
      CompiledRule cr;
      cr.output = c.intern(cm.out_slot, rule.output);
      for (const auto& cond : rule.guard.conds) {
        CompiledCond cc;
        cc.slot = c.slot(cond.var);
        const auto& vals = c.slot_values[cc.slot];
        for (size_t i = 0; i < vals.size(); ++i)
          if (cond.matches(vals[i])) cc.mask.set(static_cast<int>(i));
        cr.conds.push_back(std::move(cc));
      }
      cm.rules.push_back(std::move(cr));
    }
    if (do_op) {
      auto forced = do_op->find(mech.output_var);
      if (forced != do_op->end()) cm.forced = c.intern(cm.out_slot, forced->second);
    }
    c.mechs.push_back(std::move(cm));
  }
  std::map<std::string, int> endo_sorted;
  for (const auto& [name, mech] : scm.mechanisms)
    endo_sorted[mech.output_var] = c.slot(mech.output_var);
  for (const auto& [var, slot] : endo_sorted) {
    c.endo_vars.push_back(var);
    c.endo_slots.push_back(slot);
  }
  return c;
}

void run_mechs(const Compiled& c, std::vector<int>& vals, bool intervened) {
  for (const auto& mech : c.mechs) {
    if (intervened && mech.forced >= 0) {
      vals[mech.out_slot] = mech.forced;
      continue;
    }
    int out = mech.default_output;
    for (const auto& rule : mech.rules) {
      bool all = true;
      for (const auto& cond : rule.conds) {
        if (!cond.mask.test(vals[cond.slot])) {
          all = false;
          break;
        }
      }
      if (all) {
        out = rule.output;
        break;
      }
    }
    vals[mech.out_slot] = out;
  }
}

struct QueryPlan {
  Compiled compiled;
  std::vector<int> missing_slots;   // ascending sampler name
  std::vector<size_t> missing_len;  // domain sizes
  std::vector<int> base;            // fixed exo applied; endo slots arbitrary
  std::vector<std::pair<int, int>> evidence_idx;  // (slot, expected index)
  std::uint64_t product = 1;
  bool product_overflow = false;
};

QueryPlan plan_query(const Scm& scm, const SupportQuery& q) {
  // fixed + missing must partition the samplers
  {
    std::set<std::string> names;
    for (const auto& [name, v] : q.fixed) names.insert(name);
    for (const auto& name : q.missing)
      if (!names.insert(name).second)
        throw std::invalid_argument("missing overlaps fixed: " + name);
    for (const auto& [name, s] : scm.samplers)
      if (!names.count(name)) throw std::invalid_argument("sampler not covered: " + name);
    if (names.size() != scm.samplers.size())
      throw std::invalid_argument("fixed/missing name outside sampler set");
  }
  QueryPlan plan;
  plan.compiled = compile(scm, q.do_op, q.evidence);
  Compiled& c = plan.compiled;
  plan.base.assign(c.slot_names.size(), 0);
  for (const auto& [name, value] : q.fixed) {
    int s = c.slot(name);
    int idx = -1;
    const auto& vals = c.slot_values[s];
    for (size_t i = 0; i < vals.size(); ++i)
      if (vals[i] == value) idx = static_cast<int>(i);
    if (idx < 0) throw UnknownValue(name, value);
    plan.base[s] = idx;
  }
  std::vector<std::string> missing_sorted = q.missing;
  std::sort(missing_sorted.begin(), missing_sorted.end());
  for (const auto& name : missing_sorted) {
    int s = c.slot(name);
    plan.missing_slots.push_back(s);
    size_t len = scm.samplers.at(name).domain().size();
    plan.missing_len.push_back(len);
    if (len == 0) {
      plan.product = 0;
    } else if (!plan.product_overflow) {
      if (plan.product > UINT64_MAX / len) plan.product_overflow = true;
      else plan.product *= len;
    }
  }
  if (q.evidence) {
    for (const auto& [var, value] : *q.evidence) {
      if (!c.slot_of.count(var)) throw SchemaError("evidence names unknown variable " + var);
      int s = c.slot(var);
      const auto& vals = c.slot_values[s];
      int idx = -1;
      for (size_t i = 0; i < vals.size(); ++i)
        if (vals[i] == value) idx = static_cast<int>(i);
      plan.evidence_idx.emplace_back(s, idx);
    }
  }
  if (q.do_op)
    for (const auto& [var, value] : *q.do_op)
      if (!c.slot_of.count(var)) throw SchemaError("intervention names unknown variable " + var);
  return plan;
}

// Walks every completion (or up to the cap); calls fn once per completion.
// Returns (examined, exhausted_enumeration).
template <typename Fn>
std::pair<std::uint64_t, bool> walk_completions(QueryPlan& plan, std::uint64_t cap, Fn&& fn) {
  if (plan.product == 0) return {0, true};
  std::vector<size_t> idx(plan.missing_slots.size(), 0);
  std::uint64_t examined = 0;
  bool more = true;
  while (more) {
    if (examined >= cap) return {examined, false};
    for (size_t i = 0; i < plan.missing_slots.size(); ++i)
      plan.base[plan.missing_slots[i]] = static_cast<int>(idx[i]);
    ++examined;
    if (!fn(idx)) return {examined, false};
    more = false;
    size_t i = idx.size();
    while (i > 0) {
      --i;
      if (++idx[i] < plan.missing_len[i]) {
        more = true;
        break;
      }
      idx[i] = 0;
    }
    if (idx.empty()) break;
  }
  return {examined, true};
}

std::map<std::string, SymbolValue> endo_answer(const Compiled& c, const std::vector<int>& vals) {
  std::map<std::string, SymbolValue> out;
  for (size_t i = 0; i < c.endo_slots.size(); ++i)
    out[c.endo_vars[i]] = c.slot_values[c.endo_slots[i]][vals[c.endo_slots[i]]];
  return out;
}

Support run_support(const Scm& scm, const SupportQuery& q) {
  QueryPlan plan = plan_query(scm, q);
  Compiled& c = plan.compiled;
  bool intervened = q.kind == QueryType::Intervention || q.kind == QueryType::Counterfactual;
  bool filtered = q.kind == QueryType::Abduction || q.kind == QueryType::Counterfactual;

  Support support;
  support.kind = q.kind;
  std::map<std::vector<int>, size_t> seen;
  std::vector<std::vector<int>> ordered;
  bool truncated = false;
  std::vector<int> vals;

  auto [examined, walked_all] = walk_completions(plan, q.caps.max_combinations, [&](const std::vector<size_t>& mi) {
    vals = plan.base;
    if (filtered) {
      run_mechs(c, vals, /*intervened=*/false);
      for (const auto& [slot, expect] : plan.evidence_idx)
        if (expect < 0 || vals[slot] != expect) return true;  // incompatible world
    }
    std::vector<int> key;
    if (q.kind == QueryType::Abduction) {
      for (size_t v : mi) key.push_back(static_cast<int>(v));
    } else {
      if (intervened) {
        vals = plan.base;
        // counterfactual: same exogenous values, intervened equations
        run_mechs(c, vals, /*intervened=*/true);
      } else {
        run_mechs(c, vals, /*intervened=*/false);
      }
      for (int slot : c.endo_slots) key.push_back(vals[slot]);
    }
    if (!seen.count(key)) {
      if (ordered.size() >= q.caps.max_support_size) {
        truncated = true;
        return false;
      }
      seen.emplace(key, ordered.size());
      ordered.push_back(std::move(key));
    }
    return true;
  });

  support.combinations_examined = examined;
  support.exhausted = walked_all && !truncated;
  for (const auto& key : ordered) {
    if (q.kind == QueryType::Abduction) {
      std::map<std::string, SymbolValue> ans;
      for (size_t i = 0; i < plan.missing_slots.size(); ++i)
        ans[c.slot_names[plan.missing_slots[i]]] = c.slot_values[plan.missing_slots[i]][key[i]];
      support.answers.push_back(std::move(ans));
    } else {
      std::vector<int> full = plan.base;
      for (size_t i = 0; i < c.endo_slots.size(); ++i) full[c.endo_slots[i]] = key[i];
      support.answers.push_back(endo_answer(c, full));
    }
  }
  return support;
}

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

std::pair<std::vector<ExoAssignment>, bool> enumerate_completions(
    const Scm& scm, const ExoAssignment& fixed, const std::vector<std::string>& missing,
    std::uint64_t cap) {
  SupportQuery q;
  q.kind = QueryType::Deduction;
  q.fixed = fixed;
  q.missing = missing;
  QueryPlan plan = plan_query(scm, q);
  std::vector<ExoAssignment> out;
  auto [examined, exhausted] = walk_completions(plan, cap, [&](const std::vector<size_t>&) {
    ExoAssignment full = fixed;
    for (size_t i = 0; i < plan.missing_slots.size(); ++i) {
      int s = plan.missing_slots[i];
      full[plan.compiled.slot_names[s]] = plan.compiled.slot_values[s][plan.base[s]];
    }
    out.push_back(std::move(full));
    return true;
  });
  (void)examined;
  return {std::move(out), exhausted};
}

Support support_deduction(const Scm& scm, const ExoAssignment& fixed,
                          const std::vector<std::string>& missing, const Caps& caps) {
  SupportQuery q{QueryType::Deduction, fixed, missing, std::nullopt, std::nullopt, caps};
  return run_support(scm, q);
}

Support support_intervention(const Scm& scm, const ExoAssignment& fixed,
                             const std::vector<std::string>& missing, const Intervention& do_op,
                             const Caps& caps) {
  require(!do_op.empty(), "intervention requires a non-empty do");
  SupportQuery q{QueryType::Intervention, fixed, missing, do_op, std::nullopt, caps};
  return run_support(scm, q);
}

Support support_abduction(const Scm& scm, const ExoAssignment& fixed,
                          const std::vector<std::string>& missing, const EndoAssignment& evidence,
                          const Caps& caps) {
  require(!evidence.empty(), "abduction requires non-empty evidence");
  SupportQuery q{QueryType::Abduction, fixed, missing, std::nullopt, evidence, caps};
  return run_support(scm, q);
}

Support support_counterfactual(const Scm& scm, const ExoAssignment& fixed,
                               const std::vector<std::string>& missing,
                               const EndoAssignment& evidence, const Intervention& do_op,
                               const Caps& caps) {
  require(!evidence.empty(), "counterfactual requires non-empty evidence");
  require(!do_op.empty(), "counterfactual requires a non-empty do");
  SupportQuery q{QueryType::Counterfactual, fixed, missing, do_op, evidence, caps};
  return run_support(scm, q);
}

Support compute_support(const Scm& scm, const SupportQuery& query) {
  switch (query.kind) {
    case QueryType::Deduction:
      return support_deduction(scm, query.fixed, query.missing, query.caps);
    case QueryType::Intervention:
      return support_intervention(scm, query.fixed, query.missing, query.do_op.value(), query.caps);
    case QueryType::Abduction:
      return support_abduction(scm, query.fixed, query.missing, query.evidence.value(), query.caps);
    case QueryType::Counterfactual:
      return support_counterfactual(scm, query.fixed, query.missing, query.evidence.value(),
                                    query.do_op.value(), query.caps);
  }
  throw std::invalid_argument("bad query kind");
}

std::vector<std::pair<std::map<std::string, SymbolValue>, Rational>> compute_support_weights(
    const Scm& scm, const SupportQuery& query) {
  Support support = compute_support(scm, query);
  if (!support.exhausted)
    throw NotExhausted(query_type_name(query.kind) + " support hit a cap");

  QueryPlan plan = plan_query(scm, query);
  Compiled& c = plan.compiled;
  bool intervened =
      query.kind == QueryType::Intervention || query.kind == QueryType::Counterfactual;
  bool filtered = query.kind == QueryType::Abduction || query.kind == QueryType::Counterfactual;

  // per-missing-sampler weights aligned with domain order
  std::vector<std::vector<Rational>> weights;
  for (int slot : plan.missing_slots) {
    const auto& sampler = scm.samplers.at(c.slot_names[slot]);
    std::vector<Rational> w;
    for (const auto& [value, weight] : sampler.entries) w.push_back(weight);
    weights.push_back(std::move(w));
  }

  std::map<std::map<std::string, SymbolValue>, Rational> mass;
  Rational total(0, 1);
  std::vector<int> vals;
  walk_completions(plan, query.caps.max_combinations, [&](const std::vector<size_t>& mi) {
    Rational w(1, 1);
    for (size_t i = 0; i < mi.size(); ++i) w = w * weights[i][mi[i]];
    vals = plan.base;
    if (filtered) {
      run_mechs(c, vals, false);
      for (const auto& [slot, expect] : plan.evidence_idx)
        if (expect < 0 || vals[slot] != expect) return true;
    }
    std::map<std::string, SymbolValue> answer;
    if (query.kind == QueryType::Abduction) {
      for (size_t i = 0; i < plan.missing_slots.size(); ++i) {
        int s = plan.missing_slots[i];
        answer[c.slot_names[s]] = c.slot_values[s][plan.base[s]];
      }
    } else {
      vals = plan.base;
      run_mechs(c, vals, intervened);
      answer = endo_answer(c, vals);
    }
    auto [it, fresh] = mass.emplace(std::move(answer), w);
    if (!fresh) it->second = it->second + w;
    total = total + w;
    return true;
  });

  std::vector<std::pair<std::map<std::string, SymbolValue>, Rational>> out;
  for (const auto& answer : support.answers) out.emplace_back(answer, mass.at(answer) / total);
  return out;
}

}  // namespace causim
