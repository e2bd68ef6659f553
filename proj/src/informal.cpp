#include "causim/informal.hpp"

#include <cctype>
#include <sstream>

#include "causim/errors.hpp"
#include "causim/topology.hpp"

namespace causim {

namespace {

std::string quoted(const std::string& token) {
  std::string out = "\"";
  for (char c : token) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out += "\"";
  return out;
}

void render_inputs(std::ostringstream& os, const Mechanism& mech) {
  std::vector<std::string> inputs = mech.endo_parents;
  inputs.push_back(mech.exo_parent);
  if (inputs.size() == 1) {
    os << "The input to " << mech.name << " is " << inputs[0] << ".";
  } else if (inputs.size() == 2) {
    os << "The inputs to " << mech.name << " are " << inputs[0] << " and " << inputs[1] << ".";
  } else {
    os << "The inputs to " << mech.name << " are ";
    for (size_t i = 0; i + 1 < inputs.size(); ++i) os << inputs[i] << ", ";
    os << "and " << inputs.back() << ".";
  }
}

void render_guard(std::ostringstream& os, const Guard& guard) {
  for (size_t i = 0; i < guard.conds.size(); ++i) {
    if (i) os << " and ";
    const Cond& c = guard.conds[i];
    if (c.op == Cond::Op::EQ) {
      os << c.var << " equals " << quoted(c.values.at(0));
    } else {
      os << c.var << " is one of ";
      for (size_t j = 0; j < c.values.size(); ++j) {
        if (j) os << ", ";
        os << quoted(c.values[j]);
      }
    }
  }
}

std::string sampler_paragraph(const CategoricalSampler& sampler) {
  std::ostringstream os;
  os << sampler.name << " is sampled once per world. The sampling rule for " << sampler.name
     << " is: ";
  if (sampler.entries.size() == 1) {
    os << "always return " << quoted(sampler.entries[0].first) << ".";
    return os.str();
  }
  os << "generate a random number uniformly between 0 and 1; ";
  Rational cum(0, 1);
  for (size_t i = 0; i + 1 < sampler.entries.size(); ++i) {
    cum = cum + sampler.entries[i].second;
    os << (i == 0 ? "if" : "else if") << " it is less than " << cum.str() << ", return "
       << quoted(sampler.entries[i].first) << "; ";
  }
  os << "otherwise return " << quoted(sampler.entries.back().first) << ".";
  return os.str();
}

std::string mechanism_paragraph(const Mechanism& mech) {
  std::ostringstream os;
  os << mech.output_var << " is set as the returned output of " << mech.name << ". ";
  render_inputs(os, mech);
  os << " The generation rule is: ";
  if (mech.rules.rules.empty()) {
    os << "always return " << quoted(mech.rules.default_output) << ".";
    return os.str();
  }
  for (const auto& rule : mech.rules.rules) {
    os << "if ";
    render_guard(os, rule.guard);
    os << ", return " << quoted(rule.output) << "; ";
  }
  os << "otherwise return " << quoted(mech.rules.default_output) << ".";
  return os.str();
}

// --- template scanner -------------------------------------------------------

struct Scanner {
  const std::string& text;
  size_t pos = 0;

  explicit Scanner(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) {
    throw InformalParseError(what + " near offset " + std::to_string(pos));
  }

  bool done() const { return pos >= text.size(); }

  bool peek_literal(const std::string& lit) const {
    return text.compare(pos, lit.size(), lit) == 0;
  }

  bool try_literal(const std::string& lit) {
    if (peek_literal(lit)) {
      pos += lit.size();
      return true;
    }
    return false;
  }

  void literal(const std::string& lit) {
    if (!try_literal(lit)) fail("expected \"" + lit + "\"");
  }

  std::string ident() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected a name");
    return text.substr(start, pos - start);
  }

  std::string quoted() {
    literal("\"");
    std::string out;
    while (pos < text.size() && text[pos] != '"') {
      if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
      out.push_back(text[pos]);
      ++pos;
    }
    if (done()) fail("unterminated quote");
    ++pos;
    return out;
  }

  Rational fraction() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
      ++pos;
    if (pos == start) fail("expected a fraction");
    return Rational::from_string(text.substr(start, pos - start));
  }
};

CategoricalSampler parse_sampler_paragraph(const std::string& paragraph) {
  Scanner s(paragraph);
  CategoricalSampler sampler;
  sampler.name = s.ident();
  s.literal(" is sampled once per world. The sampling rule for ");
  if (s.ident() != sampler.name) s.fail("sampler name mismatch");
  s.literal(" is: ");
  if (s.try_literal("always return ")) {
    sampler.entries.emplace_back(s.quoted(), Rational(1, 1));
    s.literal(".");
    if (!s.done()) s.fail("trailing text");
    return sampler;
  }
  s.literal("generate a random number uniformly between 0 and 1; ");
  Rational prev(0, 1);
  bool first = true;
  while (s.try_literal(first ? "if it is less than " : "else if it is less than ")) {
    first = false;
    Rational cum = s.fraction();
    s.literal(", return ");
    sampler.entries.emplace_back(s.quoted(), cum - prev);
    prev = cum;
    s.literal("; ");
  }
  s.literal("otherwise return ");
  sampler.entries.emplace_back(s.quoted(), Rational(1, 1) - prev);
  s.literal(".");
  if (!s.done()) s.fail("trailing text");
  if (sampler.entries.size() < 2) s.fail("cumulative sampler with one entry");
  return sampler;
}

Cond parse_informal_cond(Scanner& s) {
  std::string var = s.ident();
  if (s.try_literal(" equals ")) return make_cond(var, {s.quoted()});
  s.literal(" is one of ");
  std::vector<SymbolValue> values;
  values.push_back(s.quoted());
  while (s.peek_literal(", \"")) {  // a bare ", " would start the return clause
    s.literal(", ");
    values.push_back(s.quoted());
  }
  return make_cond(var, std::move(values));
}

Mechanism parse_mechanism_paragraph(const std::string& paragraph) {
  Scanner s(paragraph);
  Mechanism mech;
  mech.output_var = s.ident();
  s.literal(" is set as the returned output of ");
  mech.name = s.ident();
  s.literal(". ");
  std::vector<std::string> inputs;
  if (s.try_literal("The input to ")) {
    if (s.ident() != mech.name) s.fail("mechanism name mismatch");
    s.literal(" is ");
    inputs.push_back(s.ident());
    s.literal(".");
  } else {
    s.literal("The inputs to ");
    if (s.ident() != mech.name) s.fail("mechanism name mismatch");
    s.literal(" are ");
    inputs.push_back(s.ident());
    while (true) {
      if (s.try_literal(", and ")) {
        inputs.push_back(s.ident());
        s.literal(".");
        break;
      }
      if (s.try_literal(" and ")) {
        inputs.push_back(s.ident());
        s.literal(".");
        break;
      }
      s.literal(", ");
      inputs.push_back(s.ident());
    }
  }
  if (inputs.empty()) s.fail("mechanism with no inputs");
  for (size_t i = 0; i + 1 < inputs.size(); ++i) mech.endo_parents.push_back(inputs[i]);
  mech.exo_parent = inputs.back();
  if (mech.exo_parent.rfind("U_", 0) != 0) s.fail("last input must be the exogenous parent");

  s.literal(" The generation rule is: ");
  if (s.try_literal("always return ")) {
    mech.rules.default_output = s.quoted();
    s.literal(".");
    if (!s.done()) s.fail("trailing text");
    return mech;
  }
  while (s.try_literal("if ")) {
    Rule rule;
    rule.guard.conds.push_back(parse_informal_cond(s));
    while (s.try_literal(" and ")) rule.guard.conds.push_back(parse_informal_cond(s));
    s.literal(", return ");
    rule.output = s.quoted();
    s.literal("; ");
    mech.rules.rules.push_back(std::move(rule));
  }
  if (mech.rules.rules.empty()) s.fail("expected at least one rule clause");
  s.literal("otherwise return ");
  mech.rules.default_output = s.quoted();
  s.literal(".");
  if (!s.done()) s.fail("trailing text");
  return mech;
}

}  // namespace

std::string informalize(const Scm& scm) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, sampler] : scm.samplers) {
    if (!first) os << "\n\n";
    first = false;
    os << sampler_paragraph(sampler);
  }
  for (const auto& name : scm.topo_order) {
    if (!first) os << "\n\n";
    first = false;
    os << mechanism_paragraph(scm.mechanisms.at(name));
  }
  os << "\n";
  return os.str();
}

Scm parse_informal(const std::string& text, const std::string& scm_id, int version) {
  Scm scm;
  scm.scm_id = scm_id;
  scm.version = version;

  std::vector<std::string> paragraphs;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find("\n\n", pos);
    if (end == std::string::npos) end = text.size();
    std::string para = text.substr(pos, end - pos);
    while (!para.empty() && (para.back() == '\n' || para.back() == ' ')) para.pop_back();
    if (!para.empty()) paragraphs.push_back(std::move(para));
    pos = end + 2;
  }
  if (paragraphs.empty()) throw InformalParseError("empty text");

  for (const auto& para : paragraphs) {
    if (para.find(" is sampled once per world.") != std::string::npos) {
      auto sampler = parse_sampler_paragraph(para);
      if (scm.samplers.count(sampler.name))
        throw InformalParseError("duplicate sampler " + sampler.name);
      scm.samplers[sampler.name] = std::move(sampler);
    } else {
      auto mech = parse_mechanism_paragraph(para);
      if (scm.mechanisms.count(mech.name))
        throw InformalParseError("duplicate mechanism " + mech.name);
      scm.mechanisms[mech.name] = std::move(mech);
    }
  }

  try {
    scm.topo_order = topological_sort(scm);
  } catch (const CycleDetected&) {
    throw InformalParseError("described mechanisms form a cycle");
  }
  for (auto kind : all_topology_kinds()) {
    scm.topology = kind;
    if (validate_topology(scm).ok()) return scm;
  }
  throw InformalParseError("graph fits no topology kind");
}

}  // namespace causim
