#include "causim/promptio.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "causim/dsl.hpp"
#include "causim/errors.hpp"
#include "causim/informal.hpp"

namespace causim {

using nlohmann::json;

std::string prompt_mode_name(PromptMode mode) {
  return mode == PromptMode::Formal ? "formal" : "informal";
}

PromptMode prompt_mode_from_name(const std::string& name) {
  if (name == "formal") return PromptMode::Formal;
  if (name == "informal") return PromptMode::Informal;
  throw SchemaError("unknown prompt mode: " + name);
}

namespace {

const char* kSystemText =
    "You're a helpful assistant solving problems based on user requests. The user provides a "
    "problem, possibly with instructions and a desired output format. You must first clearly "
    "outline your reasoning process enclosed within <think> reasoning process here </think>, "
    "followed immediately by the user's requested output format.";

// Tokens that are canonical JSON scalars render bare ({"ZY":true}), all
// other tokens render as strings. The inverse of parse_answer's
// normalization.
json token_to_json(const SymbolValue& token) {
  json parsed = json::parse(token, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_discarded() && (parsed.is_boolean() || parsed.is_number() || parsed.is_null()) &&
      parsed.dump() == token)
    return parsed;
  return json(token);
}

std::string assignment_json(const std::map<std::string, SymbolValue>& assignment) {
  json obj = json::object();
  for (const auto& [key, value] : assignment) obj[key] = token_to_json(value);
  return obj.dump();
}

std::string names_json(const std::vector<std::string>& names) {
  return json(names).dump();
}

std::string scenario_task_line(Scenario scenario) {
  if (scenario == Scenario::Deterministic)
    return "  Return that unique output.";
  return "  Several answers may be consistent with the given information; return any ONE of "
         "them.";
}

std::string task_block(const QueryInstance& inst) {
  std::ostringstream os;
  switch (inst.query_type) {
    case QueryType::Deduction:
      os << "- Factual world (no intervention).\n";
      if (inst.unknown_exogenous.empty())
        os << "  All exogenous values are fixed => the required outputs are uniquely "
              "determined.\n";
      os << scenario_task_line(inst.scenario);
      break;
    case QueryType::Intervention:
      os << "- Intervened world (apply do(...)).\n";
      if (inst.unknown_exogenous.empty())
        os << "  All exogenous values are fixed => the required outputs are uniquely determined "
              "under the intervention.\n";
      os << scenario_task_line(inst.scenario);
      break;
    case QueryType::Abduction:
      os << "- Abduction: infer assignment(s) of the unknown exogenous variables consistent "
            "with observed_endogenous and fixed_exogenous.\n";
      os << scenario_task_line(inst.scenario);
      break;
    case QueryType::Counterfactual:
      os << "- Counterfactual = abduction + intervention + prediction.\n"
            "  1) Abduction: infer unknown_exogenous assignment(s) consistent with "
            "observed_endogenous and fixed_exogenous.\n"
            "  2) Intervention: apply do(...).\n"
            "  3) Prediction: using the SAME abduced exogenous values (no resampling), compute "
            "required outputs under do(...).\n"
            "  Important: observed_endogenous is only evidence for step (1); do NOT enforce it "
            "after the intervention.\n\n";
      os << scenario_task_line(inst.scenario);
      break;
  }
  return os.str();
}

std::string formal_rendering(const Scm& scm) {
  std::ostringstream os;
  for (const auto& [name, sampler] : scm.samplers) os << render_sampler(sampler) << "\n";
  for (const auto& name : scm.topo_order) os << render_mechanism(scm.mechanisms.at(name)) << "\n";
  os << "driver: run_once(seed) draws every U_* sampler once (one splitmix64 stream seeded by "
        "seed, advanced in ascending sampler-name order, mapped through the cumulative weights) "
        "and then evaluates every f_* mechanism in topological order, returning all f_* "
        "outputs.\n";
  return os.str();
}

}  // namespace

PromptRecord render_prompt(const QueryInstance& instance, const Scm& scm, PromptMode mode) {
  if (instance.scm_id != scm.scm_id || instance.version != scm.version)
    throw VersionMismatch(instance.scm_id + " v" + std::to_string(instance.version) + " vs " +
                          scm.scm_id + " v" + std::to_string(scm.version));

  std::ostringstream os;
  if (mode == PromptMode::Formal) {
    os << "Given this causal model definition:\n\n" << formal_rendering(scm) << "\n";
    os << "Use the model definition above as the SCM.\n";
  } else {
    os << "Given this description of a causal system:\n\n" << informalize(scm) << "\n";
    os << "Use the description above as the SCM.\n";
  }
  os << "Rules:\n"
        "- Exogenous variables are named U_* and are sampled once per world.\n"
        "- Endogenous (inner) variables are computed deterministically by their f_* rules given "
        "U_*.\n"
        "- do(X=v) forces X=v and ignores f_X for that variable only; all other rules stay the "
        "same.\n"
        "- Never resample randomness. For unknown U_*, treat them as free variables that can "
        "take any value allowed by the sampler definition.\n\n";

  os << "Query type: " << query_type_name(instance.query_type) << "\n";
  os << "Scenario label: " << scenario_name(instance.scenario) << "\n";
  os << "Given:\n";
  os << "- fixed_exogenous (known values): " << assignment_json(instance.fixed_exogenous) << "\n";
  os << "- unknown_exogenous (missing names): " << names_json(instance.unknown_exogenous) << "\n";
  if (instance.do_op)
    os << "- do (intervention): " << assignment_json(*instance.do_op) << "\n";
  if (instance.observed_endogenous)
    os << "- observed_endogenous (factual evidence, pre-do): "
       << assignment_json(*instance.observed_endogenous) << "\n";
  os << "\nTask:\n" << task_block(instance) << "\n\n";
  os << "Required output keys (EXACT match; no extras): " << names_json(instance.required_keys)
     << "\n\n";
  os << "Answer format (STRICT):\n"
        "- Your message may optionally start with a <think>...</think> block (reasoning).\n"
        "- The LAST thing in your message must be the JSON object described below (so it can be "
        "parsed reliably).\n"
        "- Output exactly ONE JSON object with exactly the required keys.\n";

  PromptRecord record;
  record.system_text = kSystemText;
  record.user_text = os.str();
  record.expected_support = instance.support;
  record.required_keys = instance.required_keys;
  record.scm_id = instance.scm_id;
  record.version = instance.version;
  record.query_type = instance.query_type;
  record.scenario = instance.scenario;
  record.seed = instance.seed;
  record.mode = mode;
  return record;
}

namespace {

std::string normalize_json_value(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

// Balanced {...} span starting at `start`, honoring strings and escapes;
// npos when unbalanced.
size_t balanced_end(const std::string& text, size_t start) {
  int depth = 0;
  bool in_string = false;
  for (size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i;
  }
  return std::string::npos;
}

}  // namespace

Answer parse_answer(const std::string& message) {
  bool saw_brace = false;
  for (size_t i = message.size(); i-- > 0;) {
    if (message[i] != '{') continue;
    saw_brace = true;
    size_t end = balanced_end(message, i);
    if (end == std::string::npos) continue;
    json parsed = json::parse(message.substr(i, end - i + 1), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) continue;
    Answer answer;
    for (const auto& [key, value] : parsed.items())
      answer.assignment[key] = normalize_json_value(value);
    return answer;
  }
  if (saw_brace) throw MalformedJson("braces present but no complete JSON object parses");
  throw NoJsonFound("message contains no JSON object");
}

GradeResult grade(const Answer& answer, const Support& support,
                  const std::vector<std::string>& required_keys) {
  std::vector<std::string> keys;
  for (const auto& [key, value] : answer.assignment) keys.push_back(key);
  if (keys != required_keys) return {0, "KEY_MISMATCH"};  // both sorted
  for (const auto& member : support.answers)
    if (member == answer.assignment) return {1, "OK"};
  return {0, "NOT_IN_SUPPORT"};
}

GradeResult grade(const Answer& answer, const QueryInstance& instance) {
  return grade(answer, instance.support, instance.required_keys);
}

GradeResult grade_message(const std::string& message, const Support& support,
                          const std::vector<std::string>& required_keys) {
  try {
    return grade(parse_answer(message), support, required_keys);
  } catch (const NoJsonFound&) {
    return {0, "PARSE_FAIL"};
  } catch (const MalformedJson&) {
    return {0, "PARSE_FAIL"};
  }
}

RunScores score_runs(const std::vector<std::vector<SampleResult>>& samples_per_instance, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  RunScores scores;
  scores.k = k;
  scores.instances = samples_per_instance.size();
  if (samples_per_instance.empty()) return scores;

  double first_sum = 0, any_sum = 0, majority_sum = 0;
  for (const auto& samples : samples_per_instance) {
    if (samples.size() < static_cast<size_t>(k))
      throw InsufficientSamples(std::to_string(samples.size()) + " < k=" + std::to_string(k));
    first_sum += samples[0].score;
    bool any = false;
    std::map<std::string, std::pair<int, int>> tally;  // canonical answer -> (count, score)
    for (int i = 0; i < k; ++i) {
      any = any || samples[i].score == 1;
      if (samples[i].answer) {
        std::string canon = assignment_json(samples[i].answer->assignment);
        auto [it, fresh] = tally.emplace(canon, std::make_pair(0, samples[i].score));
        it->second.first++;
      }
    }
    any_sum += any ? 1 : 0;
    int best = 0;
    std::string winner;
    for (const auto& [canon, entry] : tally)  // ascending canonical order: ties -> smallest
      if (entry.first > best) {
        best = entry.first;
        winner = canon;
      }
    if (best > 0) majority_sum += tally[winner].second;
  }
  scores.pass_at_1 = first_sum / static_cast<double>(samples_per_instance.size());
  scores.pass_at_k = any_sum / static_cast<double>(samples_per_instance.size());
  scores.majority = majority_sum / static_cast<double>(samples_per_instance.size());
  return scores;
}

}  // namespace causim
