#pragma once

#include "causim/querygen.hpp"

namespace causim {

enum class PromptMode { Formal, Informal };
std::string prompt_mode_name(PromptMode mode);
PromptMode prompt_mode_from_name(const std::string& name);

// One renderable evaluation item: the prompt pair, the expected support and
// key contract for automatic verification, and the instance back-reference.
struct PromptRecord {
  std::string system_text;
  std::string user_text;
  Support expected_support;
  std::vector<std::string> required_keys;
  std::string scm_id;
  int version = 0;
  QueryType query_type = QueryType::Deduction;
  Scenario scenario = Scenario::Deterministic;
  std::uint64_t seed = 0;
  PromptMode mode = PromptMode::Formal;
};

// user_text embeds, in order: the SCM rendering (sampler and mechanism
// declarations for FORMAL, the templated English for INFORMAL), the rules
// block, the Given block, the Task block, and the strict answer-format
// block. Byte-stable. Throws VersionMismatch when instance and scm disagree.
PromptRecord render_prompt(const QueryInstance& instance, const Scm& scm, PromptMode mode);

struct Answer {
  std::map<std::string, SymbolValue> assignment;
  bool operator==(const Answer&) const = default;
};

// Extracts the last syntactically complete JSON object in the message,
// ignoring any <think> block or prose before it. JSON scalars normalize to
// their token forms: true -> "true", false -> "false", null -> "null",
// numbers -> their canonical JSON rendering; anything non-scalar keeps its
// compact JSON dump. Throws NoJsonFound / MalformedJson.
Answer parse_answer(const std::string& message);

struct GradeResult {
  int score = 0;  // 1 iff keys match exactly and the assignment is in support
  std::string reason;  // OK | KEY_MISMATCH | NOT_IN_SUPPORT | PARSE_FAIL
};

GradeResult grade(const Answer& answer, const Support& support,
                  const std::vector<std::string>& required_keys);
GradeResult grade(const Answer& answer, const QueryInstance& instance);
// parse + grade; parse failures come back as PARSE_FAIL with score 0.
GradeResult grade_message(const std::string& message, const Support& support,
                          const std::vector<std::string>& required_keys);

struct SampleResult {
  std::optional<Answer> answer;  // nullopt = parse failure
  int score = 0;
};

struct RunScores {
  double pass_at_1 = 0;
  double pass_at_k = 0;
  double majority = 0;
  int k = 1;
  std::size_t instances = 0;
};

// pass@1 over first samples, pass@k over the first k, majority vote over the
// first k with ties broken by the lexicographically smallest canonical
// serialization among modal answers. Throws InsufficientSamples if any
// instance has fewer than k samples.
RunScores score_runs(const std::vector<std::vector<SampleResult>>& samples_per_instance, int k);

}  // namespace causim
