#pragma once

#include <stdexcept>
#include <string>

namespace causim {

// Base for all library errors; `code()` carries the machine-readable name
// used in CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct SyntaxError : Error {
  SyntaxError(int line, int column, const std::string& what)
      : Error("SyntaxError",
              "line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct SemanticError : Error {
  explicit SemanticError(const std::string& what) : Error("SemanticError", what) {}
};

struct MissingInput : Error {
  explicit MissingInput(const std::string& var) : Error("MissingInput", var) {}
};

struct UnknownValue : Error {
  UnknownValue(const std::string& var, const std::string& value)
      : Error("UnknownValue", var + "=" + value) {}
};

struct CycleDetected : Error {
  explicit CycleDetected(const std::string& what) : Error("CycleDetected", what) {}
};

struct InformalParseError : Error {
  explicit InformalParseError(const std::string& what) : Error("InformalParseError", what) {}
};

struct NotExhausted : Error {
  explicit NotExhausted(const std::string& what) : Error("NotExhausted", what) {}
};

struct TooLarge : Error {
  explicit TooLarge(const std::string& what) : Error("TooLarge", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error("SchemaError", what) {}
};

struct NoJsonFound : Error {
  explicit NoJsonFound(const std::string& what) : Error("NoJsonFound", what) {}
};

struct MalformedJson : Error {
  explicit MalformedJson(const std::string& what) : Error("MalformedJson", what) {}
};

struct InsufficientSamples : Error {
  explicit InsufficientSamples(const std::string& what) : Error("InsufficientSamples", what) {}
};

struct NoFeasibleSelection : Error {
  explicit NoFeasibleSelection(const std::string& what) : Error("NoFeasibleSelection", what) {}
};

struct VersionMismatch : Error {
  explicit VersionMismatch(const std::string& what) : Error("VersionMismatch", what) {}
};

struct PlanRejected : Error {
  explicit PlanRejected(const std::string& what) : Error("PlanRejected", what) {}
};

struct ExecRejected : Error {
  explicit ExecRejected(const std::string& what) : Error("ExecRejected", what) {}
};

struct EndpointUnreachable : Error {
  explicit EndpointUnreachable(const std::string& what) : Error("EndpointUnreachable", what) {}
};

struct ProtocolViolation : Error {
  explicit ProtocolViolation(const std::string& excerpt) : Error("ProtocolViolation", excerpt) {}
};

}  // namespace causim
