#include "causim/dsl.hpp"

#include <cctype>
#include <sstream>

#include "causim/errors.hpp"

namespace causim {

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) { throw SyntaxError(line, col, what); }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
  }

  bool done() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    return text[pos];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool accept(char c) {
    if (!done() && peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  // bare identifier: [A-Za-z0-9_]+
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      advance();
    if (pos == start) fail("expected identifier");
    return text.substr(start, pos - start);
  }

  void keyword(const std::string& kw) {
    auto got = ident();
    if (got != kw) fail("expected '" + kw + "', got '" + got + "'");
  }

  // double-quoted token; backslash escapes for '"' and '\'
  std::string quoted() {
    expect('"');
    std::string out;
    while (pos < text.size() && text[pos] != '"') {
      if (text[pos] == '\\' && pos + 1 < text.size()) advance();
      out.push_back(text[pos]);
      advance();
    }
    if (pos >= text.size()) fail("unterminated string");
    advance();  // closing quote
    return out;
  }

  void arrow() {
    skip_ws();
    if (pos + 1 >= text.size() || text[pos] != '-' || text[pos + 1] != '>') fail("expected '->'");
    advance();
    advance();
  }

  void amp_amp() {
    skip_ws();
    if (pos + 1 >= text.size() || text[pos] != '&' || text[pos + 1] != '&') fail("expected '&&'");
    advance();
    advance();
  }

  // nonnegative integer
  std::int64_t integer() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) advance();
    if (pos == start) fail("expected integer");
    return std::stoll(text.substr(start, pos - start));
  }
};

std::string quote(const std::string& token) {
  std::string out = "\"";
  for (char c : token) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out += "\"";
  return out;
}

Cond parse_cond(Lexer& lex, const Mechanism& mech) {
  std::string var = lex.ident();
  bool known = var == mech.exo_parent;
  for (const auto& p : mech.endo_parents) known = known || p == var;
  if (!known)
    throw SemanticError("guard variable " + var + " is not an input of " + mech.name);
  lex.skip_ws();
  if (lex.peek() == '=') {
    lex.expect('=');
    lex.expect('=');
    return make_cond(var, {lex.quoted()});
  }
  lex.keyword("in");
  lex.expect('{');
  std::vector<SymbolValue> values;
  while (true) {
    values.push_back(lex.quoted());
    if (!lex.accept(',')) break;
  }
  lex.expect('}');
  return make_cond(var, std::move(values));
}

}  // namespace

Mechanism parse_mechanism(const std::string& text) {
  Lexer lex(text);
  Mechanism mech;
  lex.keyword("mech");
  mech.name = lex.quoted();
  lex.keyword("out");
  mech.output_var = lex.quoted();
  lex.keyword("exo");
  mech.exo_parent = lex.quoted();
  lex.keyword("parents");
  {
    std::string list = lex.quoted();
    // "[A, B]" -- identifiers separated by commas inside brackets
    std::string inner = list;
    if (inner.size() < 2 || inner.front() != '[' || inner.back() != ']')
      throw SyntaxError(lex.line, lex.col, "parents list must look like \"[A, B]\"");
    inner = inner.substr(1, inner.size() - 2);
    std::istringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      size_t a = item.find_first_not_of(" \t");
      size_t b = item.find_last_not_of(" \t");
      if (a == std::string::npos) continue;
      mech.endo_parents.push_back(item.substr(a, b - a + 1));
    }
  }
  if (mech.name.rfind("f_", 0) != 0) throw SemanticError("mechanism name must start with f_");
  if (mech.exo_parent.rfind("U_", 0) != 0) throw SemanticError("exo parent must start with U_");

  lex.expect('{');
  bool saw_default = false;
  while (!lex.accept('}')) {
    std::string kw = lex.ident();
    if (kw == "when") {
      if (saw_default) throw SemanticError("rules after default in " + mech.name);
      Rule rule;
      rule.guard.conds.push_back(parse_cond(lex, mech));
      lex.skip_ws();
      while (lex.peek() == '&') {
        lex.amp_amp();
        rule.guard.conds.push_back(parse_cond(lex, mech));
        lex.skip_ws();
      }
      lex.arrow();
      rule.output = lex.quoted();
      lex.expect(';');
      mech.rules.rules.push_back(std::move(rule));
    } else if (kw == "default") {
      if (saw_default) throw SemanticError("multiple defaults in " + mech.name);
      lex.arrow();
      mech.rules.default_output = lex.quoted();
      lex.expect(';');
      saw_default = true;
    } else {
      lex.fail("expected 'when' or 'default', got '" + kw + "'");
    }
  }
  if (!saw_default) throw SemanticError("mechanism " + mech.name + " lacks a default rule");
  if (!lex.done()) lex.fail("trailing input after mechanism");
  return mech;
}

std::string render_mechanism(const Mechanism& mech) {
  std::ostringstream os;
  os << "mech " << quote(mech.name) << " out " << quote(mech.output_var) << " exo "
     << quote(mech.exo_parent) << " parents \"[";
  for (size_t i = 0; i < mech.endo_parents.size(); ++i) {
    if (i) os << ", ";
    os << mech.endo_parents[i];
  }
  os << "]\" {\n";
  for (const auto& rule : mech.rules.rules) {
    os << "  when ";
    for (size_t i = 0; i < rule.guard.conds.size(); ++i) {
      if (i) os << " && ";
      const Cond& c = rule.guard.conds[i];
      if (c.op == Cond::Op::EQ) {
        os << c.var << " == " << quote(c.values.at(0));
      } else {
        os << c.var << " in {";
        for (size_t j = 0; j < c.values.size(); ++j) {
          if (j) os << ", ";
          os << quote(c.values[j]);
        }
        os << "}";
      }
    }
    os << " -> " << quote(rule.output) << ";\n";
  }
  os << "  default -> " << quote(mech.rules.default_output) << ";\n";
  os << "}\n";
  return os.str();
}

CategoricalSampler parse_sampler(const std::string& text) {
  Lexer lex(text);
  CategoricalSampler sampler;
  lex.keyword("sampler");
  sampler.name = lex.quoted();
  if (sampler.name.rfind("U_", 0) != 0) throw SemanticError("sampler name must start with U_");
  lex.skip_ws();
  if (lex.peek() == 'd') {
    lex.keyword("doc");
    sampler.doc = lex.quoted();
  }
  lex.expect('{');
  while (!lex.accept('}')) {
    SymbolValue value = lex.quoted();
    lex.expect(':');
    std::int64_t num = lex.integer();
    std::int64_t den = 1;
    lex.skip_ws();
    if (lex.peek() == '/') {
      lex.expect('/');
      den = lex.integer();
    }
    lex.expect(';');
    sampler.entries.emplace_back(value, Rational(num, den));
  }
  if (!lex.done()) lex.fail("trailing input after sampler");
  return sampler;
}

std::string render_sampler(const CategoricalSampler& sampler) {
  std::ostringstream os;
  os << "sampler " << quote(sampler.name);
  if (!sampler.doc.empty()) os << " doc " << quote(sampler.doc);
  os << " {\n";
  for (const auto& [value, weight] : sampler.entries)
    os << "  " << quote(value) << ": " << weight.str() << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace causim
