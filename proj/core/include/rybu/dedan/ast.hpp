#pragma once

// Syntax tree for Dedan input text in the server view: server types with
// formal parameters, services, states and action templates, instance
// declarations and the init block.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rybu::dedan {

/// Index expression: `3`, `j`, `j+1`, `j-1`. `var` empty means a constant.
struct IndexExpr {
  std::string var;
  int offset = 0;
  friend bool operator==(const IndexExpr&, const IndexExpr&) = default;
};

/// Possibly indexed name: `sem`, `A[j]`, `proc[1]`.
struct Ref {
  std::string name;
  std::optional<IndexExpr> index;
  friend bool operator==(const Ref&, const Ref&) = default;
};

/// Declared name, possibly a vector: `wait`, `A[2]`.
struct DeclName {
  std::string name;
  std::optional<int> size;
  friend bool operator==(const DeclName&, const DeclName&) = default;
};

struct Repeater {
  std::string var;
  int low = 1;
  int high = 1;
  friend bool operator==(const Repeater&, const Repeater&) = default;
};

/// `agent.server.service`
struct MessageRef {
  Ref agent;
  Ref server;
  Ref service;
  friend bool operator==(const MessageRef&, const MessageRef&) = default;
};

/// `server.value`
struct StateRef {
  Ref server;
  Ref value;
  friend bool operator==(const StateRef&, const StateRef&) = default;
};

struct ActionTemplate {
  std::vector<Repeater> repeaters;
  MessageRef input;
  StateRef in_state;
  std::optional<MessageRef> output;
  StateRef out_state;
  friend bool operator==(const ActionTemplate&, const ActionTemplate&) = default;
};

enum class ParamKind { Agent, Server };

struct FormalParam {
  ParamKind kind = ParamKind::Agent;
  DeclName decl;
  friend bool operator==(const FormalParam&, const FormalParam&) = default;
};

struct ServerTypeDecl {
  std::string name;
  std::vector<FormalParam> formals;
  std::vector<DeclName> services;
  std::vector<DeclName> states;
  std::vector<ActionTemplate> actions;
  friend bool operator==(const ServerTypeDecl&, const ServerTypeDecl&) = default;
};

/// `A[2]`, `sem[2]`, `t:test`, `s[3]:sem`. For agents `type` is empty; for
/// servers an empty type means the type is named like the instance.
struct InstanceDecl {
  DeclName decl;
  std::string type;
  friend bool operator==(const InstanceDecl&, const InstanceDecl&) = default;
};

/// `server(actuals).state`
struct ServerInit {
  Ref server;
  std::vector<Ref> actuals;
  Ref state;
  friend bool operator==(const ServerInit&, const ServerInit&) = default;
};

struct InitItem {
  std::vector<Repeater> repeaters;
  std::optional<MessageRef> message;  // exactly one of message / server
  std::optional<ServerInit> server;
  friend bool operator==(const InitItem&, const InitItem&) = default;
};

struct DedanUnit {
  std::string system_name;
  std::vector<ServerTypeDecl> server_types;
  std::vector<InstanceDecl> agents;
  std::vector<InstanceDecl> servers;
  std::vector<InitItem> init;
  friend bool operator==(const DedanUnit&, const DedanUnit&) = default;
};

/// Syntax or semantic error in Dedan text; line/column are 1-based, 0 when
/// the error has no source position.
class DedanError : public std::runtime_error {
 public:
  DedanError(const std::string& message, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

std::string to_string(const IndexExpr& e);
std::string to_string(const Ref& r);

}  // namespace rybu::dedan
