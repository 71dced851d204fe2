#pragma once

// Syntax tree of a Rybu program: constants, reactive servers with typed state
// variables and guarded actions, server instances and threads.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rybu/lang/lexer.hpp"

namespace rybu::lang {

enum class BinaryOp { Add, Sub, Eq, Ne, Lt, Gt, Le, Ge };

std::string_view spelling(BinaryOp op);
bool is_comparison(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    Int,     // value
    Atom,    // name
    Name,    // name: variable or constant
    Index,   // name[args[0]]
    Negate,  // -args[0]
    Binary,  // args[0] op args[1]
    Vector,  // [args...], initializers only
  };

  Kind kind = Kind::Int;
  std::int64_t value = 0;
  std::string name;
  BinaryOp op = BinaryOp::Add;
  std::vector<ExprPtr> args;
  SourcePos pos;

  static ExprPtr integer(std::int64_t v, SourcePos pos = {});
  static ExprPtr atom(std::string name, SourcePos pos = {});
  static ExprPtr ref(std::string name, SourcePos pos = {});
  static ExprPtr index(std::string name, ExprPtr i, SourcePos pos = {});
  static ExprPtr negate(ExprPtr e, SourcePos pos = {});
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
  static ExprPtr vector(std::vector<ExprPtr> elems, SourcePos pos = {});
};

/// Deep structural equality (positions ignored).
bool operator==(const Expr& a, const Expr& b);
bool same_expr(const ExprPtr& a, const ExprPtr& b);

struct VarType;
using VarTypePtr = std::shared_ptr<const VarType>;

struct VarType {
  enum class Kind { IntRange, Enum, Vector };
  Kind kind = Kind::IntRange;
  ExprPtr min;                     // IntRange
  ExprPtr max;                     // IntRange
  std::vector<std::string> atoms;  // Enum
  VarTypePtr element;              // Vector
  ExprPtr length;                  // Vector
  SourcePos pos;
};

bool operator==(const VarType& a, const VarType& b);

struct VarDecl {
  std::string name;
  VarTypePtr type;
  SourcePos pos;
};
bool operator==(const VarDecl& a, const VarDecl& b);

struct Update {
  std::string var;
  ExprPtr index;  // set for `v[i] = ...`
  ExprPtr value;
  SourcePos pos;
};
bool operator==(const Update& a, const Update& b);

/// (service, predicate, return value, state update)
struct RybuAction {
  std::string service;
  ExprPtr predicate;  // null when absent
  std::vector<Update> updates;
  std::string return_value;
  SourcePos pos;
};
bool operator==(const RybuAction& a, const RybuAction& b);

struct ServerDecl {
  std::string name;
  std::vector<VarDecl> vars;
  std::vector<RybuAction> actions;
  SourcePos pos;
  friend bool operator==(const ServerDecl&, const ServerDecl&) = default;
};

struct Initializer {
  std::string var;
  ExprPtr value;
  SourcePos pos;
};
bool operator==(const Initializer& a, const Initializer& b);

struct InstanceDecl {
  std::string name;
  std::string server;
  std::vector<Initializer> init;
  SourcePos pos;
  friend bool operator==(const InstanceDecl&, const InstanceDecl&) = default;
};

struct Stmt;

struct MatchArm {
  std::string atom;
  std::vector<Stmt> body;
  SourcePos pos;
};

struct Stmt {
  enum class Kind { Call, Match, Loop };
  Kind kind = Kind::Call;
  std::string instance;         // Call, Match
  std::string service;          // Call, Match
  std::vector<MatchArm> arms;   // Match
  std::vector<Stmt> body;       // Loop
  SourcePos pos;

  static Stmt call(std::string instance, std::string service, SourcePos pos = {});
  static Stmt match(std::string instance, std::string service, std::vector<MatchArm> arms, SourcePos pos = {});
  static Stmt loop(std::vector<Stmt> body, SourcePos pos = {});
};

bool operator==(const MatchArm& a, const MatchArm& b);
bool operator==(const Stmt& a, const Stmt& b);

struct ThreadDecl {
  std::string name;
  std::vector<std::string> params;  // parsed, rejected by typecheck when non-empty
  std::vector<Stmt> body;
  SourcePos pos;
  friend bool operator==(const ThreadDecl&, const ThreadDecl&) = default;
};

struct ConstDecl {
  std::string name;
  ExprPtr value;
  SourcePos pos;
};
bool operator==(const ConstDecl& a, const ConstDecl& b);

struct RybuProgram {
  std::vector<ConstDecl> consts;
  std::vector<ServerDecl> servers;
  std::vector<InstanceDecl> instances;
  std::vector<ThreadDecl> threads;
  friend bool operator==(const RybuProgram&, const RybuProgram&) = default;

  const ServerDecl* find_server(std::string_view name) const;
  const InstanceDecl* find_instance(std::string_view name) const;
};

}  // namespace rybu::lang
