#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rybu/lang/ast.hpp"

namespace rybu::lang {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  SourcePos pos;
  std::string message;
};

std::string to_string(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& diags);

/// A state variable type after constant evaluation.
struct Type {
  enum class Kind { Int, Enum, Vector };
  Kind kind = Kind::Int;
  std::int64_t min = 0;
  std::int64_t max = 0;
  std::vector<std::string> atoms;
  std::shared_ptr<const Type> element;
  std::int64_t length = 0;

  /// Number of values of the type (saturates at UINT64_MAX).
  std::uint64_t cardinality() const;
  bool contains_atom(std::string_view atom) const;
  friend bool operator==(const Type& a, const Type& b);
};

struct ServerInfo {
  const ServerDecl* decl = nullptr;
  std::vector<Type> var_types;  // parallel to decl->vars
  /// Return atoms per service, in order of first appearance among the actions.
  std::map<std::string, std::vector<std::string>> returns;

  std::optional<std::size_t> var_index(std::string_view name) const;
};

/// Compile-time facts about a program, shared by the typechecker and lowering.
struct ProgramInfo {
  std::map<std::string, std::int64_t> consts;
  std::map<std::string, ServerInfo> servers;
};

struct CheckResult {
  ProgramInfo info;
  std::vector<Diagnostic> diagnostics;
};

/// Resolves constants and types and checks the whole program. The returned
/// info is only complete when there are no error diagnostics.
CheckResult analyze(const RybuProgram& program);

/// Errors only; empty iff the program is well typed.
std::vector<Diagnostic> typecheck(const RybuProgram& program);

/// Evaluates an integer constant expression over literals and constants.
std::optional<std::int64_t> eval_const(const Expr& e, const std::map<std::string, std::int64_t>& consts);

}  // namespace rybu::lang
