#include "causim/querygen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "causim/errors.hpp"

namespace causim {

std::string scenario_name(Scenario s) {
  return s == Scenario::Deterministic ? "deterministic" : "stochastic";
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "deterministic") return Scenario::Deterministic;
  if (name == "stochastic") return Scenario::Stochastic;
  throw SchemaError("unknown scenario: " + name);
}

Trace make_factual_world(const Scm& scm, std::uint64_t seed) {
  auto exo = sample_exogenous(scm, seed);
  auto [endo, trace] = forward(scm, exo);
  trace.seed = seed;
  return trace;
}

namespace {

// k distinct indices in [0, n), uniform, in draw order
std::vector<size_t> draw_without_replacement(SplitMix64& rng, size_t n, size_t k) {
  std::vector<size_t> pool(n);
  for (size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<size_t> out;
  for (size_t i = 0; i < k && !pool.empty(); ++i) {
    size_t pick = rng.below(pool.size());
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace

std::vector<std::string> select_missing(const Scm& scm, const QueryConfig& cfg, SplitMix64& rng) {
  size_t m = scm.samplers.size();
  size_t target = static_cast<size_t>(std::ceil(cfg.missing_exo_pct * static_cast<double>(m)));
  if (target == 0) return {};

  std::vector<std::string> eligible;  // ascending name; trivial domains avoided
  std::vector<std::uint64_t> sizes;
  for (const auto& [name, sampler] : scm.samplers)
    if (sampler.entries.size() >= 2) {
      eligible.push_back(name);
      sizes.push_back(sampler.entries.size());
    }
  target = std::min(target, eligible.size());
  if (target == 0) return {};

  for (int attempt = 0; attempt < cfg.attempts_per_seed; ++attempt) {
    auto picks = draw_without_replacement(rng, eligible.size(), target);
    std::uint64_t product = 1;
    bool feasible = true;
    for (auto i : picks) {
      if (product > cfg.max_combinations / sizes[i]) {
        feasible = false;
        break;
      }
      product *= sizes[i];
      if (product > cfg.max_combinations) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    std::vector<std::string> out;
    for (auto i : picks) out.push_back(eligible[i]);
    std::sort(out.begin(), out.end());
    return out;
  }
  throw NoFeasibleSelection("missing-variable domain product exceeds max_combinations");
}

Intervention select_intervention(const Scm& scm, const Trace& factual, const QueryConfig& cfg,
                                 SplitMix64& rng) {
  size_t n = scm.mechanisms.size();
  size_t count =
      static_cast<size_t>(std::ceil(cfg.intervention_node_pct * static_cast<double>(n)));
  count = std::max<size_t>(1, std::min(count, n));

  std::vector<std::string> vars;  // ascending
  for (const auto& [name, mech] : scm.mechanisms) vars.push_back(mech.output_var);
  std::sort(vars.begin(), vars.end());
  auto domains = variable_domains(scm);

  Intervention out;
  for (auto i : draw_without_replacement(rng, vars.size(), count)) {
    const std::string& var = vars[i];
    const Domain& domain = domains.at(var);
    const SymbolValue& fact = factual.endo.at(var);
    std::vector<SymbolValue> options;
    for (const auto& v : domain.values)
      if (v != fact) options.push_back(v);
    out[var] = options.empty() ? fact : options[rng.below(options.size())];
  }
  return out;
}

namespace {

bool scenario_ok(const Support& support, Scenario scenario) {
  if (!support.exhausted || support.answers.empty()) return false;
  if (scenario == Scenario::Deterministic) return support.answers.size() == 1;
  return support.answers.size() >= 2;
}

std::vector<std::string> all_endo_vars(const Scm& scm) {
  std::vector<std::string> out;
  for (const auto& [name, mech] : scm.mechanisms) out.push_back(mech.output_var);
  std::sort(out.begin(), out.end());
  return out;
}

bool differs_from_factual(const Support& support, const Trace& factual) {
  // effect filters compare full endogenous assignments
  return !(support.answers.size() == 1 && support.answers[0] == factual.endo);
}

std::optional<QueryInstance> try_seed(const Scm& scm, QueryType type, const QueryConfig& cfg,
                                      std::uint64_t seed) {
  Trace factual = make_factual_world(scm, seed);
  for (int attempt = 0; attempt < cfg.attempts_per_seed; ++attempt) {
    SplitMix64 rng(seed_mix(seed, static_cast<std::uint64_t>(attempt)));
    QueryInstance inst;
    inst.query_type = type;
    inst.scenario = cfg.scenario;
    inst.scm_id = scm.scm_id;
    inst.version = scm.version;
    inst.seed = seed;
    try {
      std::vector<std::string> missing;
      if (type == QueryType::Abduction) {
        for (const auto& [name, sampler] : scm.samplers) missing.push_back(name);
      } else {
        missing = select_missing(scm, cfg, rng);
      }
      inst.unknown_exogenous = missing;
      std::set<std::string> hidden(missing.begin(), missing.end());
      for (const auto& [name, value] : factual.exo)
        if (!hidden.count(name)) inst.fixed_exogenous[name] = value;

      switch (type) {
        case QueryType::Deduction:
          inst.support = support_deduction(scm, inst.fixed_exogenous, missing, cfg.caps());
          break;
        case QueryType::Intervention: {
          inst.do_op = select_intervention(scm, factual, cfg, rng);
          inst.support =
              support_intervention(scm, inst.fixed_exogenous, missing, *inst.do_op, cfg.caps());
          if (cfg.require_intervention_effect && cfg.scenario == Scenario::Deterministic &&
              !differs_from_factual(inst.support, factual))
            continue;
          break;
        }
        case QueryType::Abduction:
          inst.observed_endogenous = factual.endo;
          inst.support = support_abduction(scm, inst.fixed_exogenous, missing,
                                           *inst.observed_endogenous, cfg.caps());
          break;
        case QueryType::Counterfactual: {
          if (cfg.cf_evidence == CfEvidence::Minimal) {
            if (missing.empty()) continue;  // needs a hidden exogenous parent
            const std::string& pick = missing[rng.below(missing.size())];
            const Mechanism* child = scm.mechanism_of_exo(pick);
            if (!child) continue;
            inst.observed_endogenous = EndoAssignment{
                {child->output_var, factual.endo.at(child->output_var)}};
          } else {
            inst.observed_endogenous = factual.endo;
          }
          inst.do_op = select_intervention(scm, factual, cfg, rng);
          inst.support = support_counterfactual(scm, inst.fixed_exogenous, missing,
                                                *inst.observed_endogenous, *inst.do_op, cfg.caps());
          if (cfg.require_counterfactual_effect && cfg.scenario == Scenario::Deterministic &&
              !differs_from_factual(inst.support, factual))
            continue;
          break;
        }
      }
    } catch (const NoFeasibleSelection&) {
      break;  // the whole seed is infeasible for this config
    }
    if (!scenario_ok(inst.support, cfg.scenario)) continue;
    inst.required_keys =
        type == QueryType::Abduction ? inst.unknown_exogenous : all_endo_vars(scm);
    return inst;
  }
  return std::nullopt;
}

}  // namespace

std::vector<QueryInstance> make_instances(const Scm& scm, QueryType type, const QueryConfig& cfg,
                                          std::uint64_t max_count) {
  std::vector<QueryInstance> out;
  for (std::uint64_t seed = cfg.seed_start;
       seed < cfg.seed_start + cfg.seed_budget && out.size() < max_count; ++seed) {
    auto inst = try_seed(scm, type, cfg, seed);
    if (inst) out.push_back(std::move(*inst));
  }
  return out;
}

std::vector<VersionDataset> generate_dataset(const std::vector<Scm>& history,
                                             const std::vector<QueryType>& types,
                                             const QueryConfig& cfg, int per_version_count) {
  std::vector<VersionDataset> out;
  for (const auto& scm : history) {
    for (auto type : types) {
      VersionDataset ds;
      ds.scm_id = scm.scm_id;
      ds.version = scm.version;
      ds.type = type;
      ds.scenario = cfg.scenario;
      ds.instances = make_instances(scm, type, cfg, static_cast<std::uint64_t>(per_version_count));
      ds.budget_exhausted = ds.instances.size() < static_cast<size_t>(per_version_count);
      out.push_back(std::move(ds));
    }
  }
  return out;
}

}  // namespace causim
