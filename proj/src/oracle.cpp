#include "causim/oracle.hpp"

#include <set>

#include "causim/errors.hpp"

namespace causim {
namespace oracle {

namespace {

// Every full exogenous tuple, by plain recursion over the sampler list.
void all_tuples(const std::vector<const CategoricalSampler*>& samplers, size_t i,
                ExoAssignment& current, std::vector<ExoAssignment>& out) {
  if (i == samplers.size()) {
    out.push_back(current);
    return;
  }
  for (const auto& [value, weight] : samplers[i]->entries) {
    current[samplers[i]->name] = value;
    all_tuples(samplers, i + 1, current, out);
  }
  current.erase(samplers[i]->name);
}

std::vector<ExoAssignment> exhaustive_exo(const Scm& scm, std::uint64_t guard) {
  std::vector<const CategoricalSampler*> samplers;
  std::uint64_t product = 1;
  for (const auto& [name, sampler] : scm.samplers) {
    samplers.push_back(&sampler);
    std::uint64_t n = sampler.entries.size();
    if (n == 0) return {};
    if (product > guard / n + 1) throw TooLarge("exogenous product beyond oracle guard");
    product *= n;
    if (product > guard) throw TooLarge("exogenous product beyond oracle guard");
  }
  std::vector<ExoAssignment> out;
  ExoAssignment current;
  all_tuples(samplers, 0, current, out);
  return out;
}

bool agrees(const ExoAssignment& u, const ExoAssignment& fixed) {
  for (const auto& [name, value] : fixed) {
    auto it = u.find(name);
    if (it == u.end() || it->second != value) return false;
  }
  return true;
}

// Plain evaluator: walks mechanisms by recursive demand rather than the
// engine's compiled pass.
SymbolValue eval_var(const Scm& scm, const std::string& var, const ExoAssignment& u,
                     const Intervention* do_op, std::map<std::string, SymbolValue>& memo) {
  auto hit = memo.find(var);
  if (hit != memo.end()) return hit->second;
  if (do_op) {
    auto forced = do_op->find(var);
    if (forced != do_op->end()) return memo[var] = forced->second;
  }
  const Mechanism* mech = scm.mechanism_of_output(var);
  if (!mech) throw SchemaError("oracle: no mechanism for " + var);
  std::map<std::string, SymbolValue> inputs;
  for (const auto& p : mech->endo_parents) inputs[p] = eval_var(scm, p, u, do_op, memo);
  inputs[mech->exo_parent] = u.at(mech->exo_parent);
  for (const auto& rule : mech->rules.rules) {
    bool all = true;
    for (const auto& cond : rule.guard.conds)
      if (!cond.matches(inputs.at(cond.var))) {
        all = false;
        break;
      }
    if (all) return memo[var] = rule.output;
  }
  return memo[var] = mech->rules.default_output;
}

EndoAssignment eval_all(const Scm& scm, const ExoAssignment& u, const Intervention* do_op) {
  EndoAssignment out;
  std::map<std::string, SymbolValue> memo;
  for (const auto& [name, mech] : scm.mechanisms)
    out[mech.output_var] = eval_var(scm, mech.output_var, u, do_op, memo);
  return out;
}

bool matches_evidence(const EndoAssignment& v, const EndoAssignment& evidence) {
  for (const auto& [var, value] : evidence) {
    auto it = v.find(var);
    if (it == v.end() || it->second != value) return false;
  }
  return true;
}

ExoAssignment restrict_to(const ExoAssignment& u, const std::vector<std::string>& names) {
  ExoAssignment out;
  for (const auto& name : names) out[name] = u.at(name);
  return out;
}

}  // namespace

Support oracle_support(const Scm& scm, const SupportQuery& query) {
  auto omega_all = exhaustive_exo(scm, 1000);
  std::set<std::map<std::string, SymbolValue>> answers;
  std::uint64_t examined = 0;
  for (const auto& u : omega_all) {
    if (!agrees(u, query.fixed)) continue;
    ++examined;
    switch (query.kind) {
      case QueryType::Deduction:
        answers.insert(eval_all(scm, u, nullptr));
        break;
      case QueryType::Intervention:
        answers.insert(eval_all(scm, u, &query.do_op.value()));
        break;
      case QueryType::Abduction:
        if (matches_evidence(eval_all(scm, u, nullptr), query.evidence.value()))
          answers.insert(restrict_to(u, query.missing));
        break;
      case QueryType::Counterfactual:
        if (matches_evidence(eval_all(scm, u, nullptr), query.evidence.value()))
          answers.insert(eval_all(scm, u, &query.do_op.value()));
        break;
    }
  }
  Support support;
  support.kind = query.kind;
  support.exhausted = true;
  support.combinations_examined = examined;
  support.answers.assign(answers.begin(), answers.end());
  return support;
}

std::vector<std::pair<std::map<std::string, SymbolValue>, Rational>> oracle_weights(
    const Scm& scm, const SupportQuery& query, std::uint64_t guard) {
  auto omega_all = exhaustive_exo(scm, guard);
  std::map<std::map<std::string, SymbolValue>, Rational> mass;
  Rational total(0, 1);
  for (const auto& u : omega_all) {
    if (!agrees(u, query.fixed)) continue;
    Rational w(1, 1);
    for (const auto& [name, sampler] : scm.samplers) {
      if (query.fixed.count(name)) continue;  // constant factor, cancels in the ratio
      for (const auto& [value, weight] : sampler.entries)
        if (value == u.at(name)) {
          w = w * weight;
          break;
        }
    }
    std::map<std::string, SymbolValue> answer;
    switch (query.kind) {
      case QueryType::Deduction:
        answer = eval_all(scm, u, nullptr);
        break;
      case QueryType::Intervention:
        answer = eval_all(scm, u, &query.do_op.value());
        break;
      case QueryType::Abduction:
        if (!matches_evidence(eval_all(scm, u, nullptr), query.evidence.value())) continue;
        answer = restrict_to(u, query.missing);
        break;
      case QueryType::Counterfactual:
        if (!matches_evidence(eval_all(scm, u, nullptr), query.evidence.value())) continue;
        answer = eval_all(scm, u, &query.do_op.value());
        break;
    }
    auto [it, fresh] = mass.emplace(std::move(answer), w);
    if (!fresh) it->second = it->second + w;
    total = total + w;
  }
  std::vector<std::pair<std::map<std::string, SymbolValue>, Rational>> out;
  for (const auto& [answer, w] : mass) out.emplace_back(answer, w / total);
  return out;
}

std::vector<std::pair<SymbolValue, Rational>> oracle_marginal(const Scm& scm,
                                                              const std::string& var,
                                                              std::uint64_t guard) {
  Scm sub = ancestral_submodel(scm, {var});
  SupportQuery q;
  q.kind = QueryType::Deduction;
  for (const auto& [name, sampler] : sub.samplers) q.missing.push_back(name);
  std::map<SymbolValue, Rational> mass;
  for (const auto& [answer, w] : oracle_weights(sub, q, guard)) {
    auto [it, fresh] = mass.emplace(answer.at(var), w);
    if (!fresh) it->second = it->second + w;
  }
  return {mass.begin(), mass.end()};
}

}  // namespace oracle
}  // namespace causim
