#include "rybu/lang/ast.hpp"

#include <algorithm>

namespace rybu::lang {

std::string_view spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Ge: return ">=";
  }
  return "?";
}

bool is_comparison(BinaryOp op) { return op != BinaryOp::Add && op != BinaryOp::Sub; }

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

ExprPtr Expr::integer(std::int64_t v, SourcePos pos) {
  Expr e;
  e.kind = Kind::Int;
  e.value = v;
  e.pos = pos;
  return make(std::move(e));
}

ExprPtr Expr::atom(std::string name, SourcePos pos) {
  Expr e;
  e.kind = Kind::Atom;
  e.name = std::move(name);
  e.pos = pos;
  return make(std::move(e));
}

ExprPtr Expr::ref(std::string name, SourcePos pos) {
  Expr e;
  e.kind = Kind::Name;
  e.name = std::move(name);
  e.pos = pos;
  return make(std::move(e));
}

ExprPtr Expr::index(std::string name, ExprPtr i, SourcePos pos) {
  Expr e;
  e.kind = Kind::Index;
  e.name = std::move(name);
  e.args.push_back(std::move(i));
  e.pos = pos;
  return make(std::move(e));
}

ExprPtr Expr::negate(ExprPtr inner, SourcePos pos) {
  Expr e;
  e.kind = Kind::Negate;
  e.args.push_back(std::move(inner));
  e.pos = pos;
  return make(std::move(e));
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  Expr e;
  e.kind = Kind::Binary;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  e.pos = pos;
  return make(std::move(e));
}

ExprPtr Expr::vector(std::vector<ExprPtr> elems, SourcePos pos) {
  Expr e;
  e.kind = Kind::Vector;
  e.args = std::move(elems);
  e.pos = pos;
  return make(std::move(e));
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.value != b.value || a.name != b.name || a.args.size() != b.args.size()) return false;
  if (a.kind == Expr::Kind::Binary && a.op != b.op) return false;
  return std::equal(a.args.begin(), a.args.end(), b.args.begin(), same_expr);
}

bool operator==(const VarType& a, const VarType& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case VarType::Kind::IntRange: return same_expr(a.min, b.min) && same_expr(a.max, b.max);
    case VarType::Kind::Enum: return a.atoms == b.atoms;
    case VarType::Kind::Vector:
      return same_expr(a.length, b.length) && a.element && b.element && *a.element == *b.element;
  }
  return false;
}

bool operator==(const VarDecl& a, const VarDecl& b) {
  return a.name == b.name && a.type && b.type && *a.type == *b.type;
}

bool operator==(const Update& a, const Update& b) {
  return a.var == b.var && same_expr(a.index, b.index) && same_expr(a.value, b.value);
}

bool operator==(const RybuAction& a, const RybuAction& b) {
  return a.service == b.service && same_expr(a.predicate, b.predicate) && a.updates == b.updates &&
         a.return_value == b.return_value;
}

bool operator==(const Initializer& a, const Initializer& b) {
  return a.var == b.var && same_expr(a.value, b.value);
}

bool operator==(const ConstDecl& a, const ConstDecl& b) {
  return a.name == b.name && same_expr(a.value, b.value);
}

bool operator==(const MatchArm& a, const MatchArm& b) { return a.atom == b.atom && a.body == b.body; }

bool operator==(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.instance == b.instance && a.service == b.service && a.arms == b.arms &&
         a.body == b.body;
}

Stmt Stmt::call(std::string instance, std::string service, SourcePos pos) {
  Stmt s;
  s.kind = Kind::Call;
  s.instance = std::move(instance);
  s.service = std::move(service);
  s.pos = pos;
  return s;
}

Stmt Stmt::match(std::string instance, std::string service, std::vector<MatchArm> arms, SourcePos pos) {
  Stmt s;
  s.kind = Kind::Match;
  s.instance = std::move(instance);
  s.service = std::move(service);
  s.arms = std::move(arms);
  s.pos = pos;
  return s;
}

Stmt Stmt::loop(std::vector<Stmt> body, SourcePos pos) {
  Stmt s;
  s.kind = Kind::Loop;
  s.body = std::move(body);
  s.pos = pos;
  return s;
}

const ServerDecl* RybuProgram::find_server(std::string_view name) const {
  auto it = std::find_if(servers.begin(), servers.end(), [&](const ServerDecl& s) { return s.name == name; });
  return it == servers.end() ? nullptr : &*it;
}

const InstanceDecl* RybuProgram::find_instance(std::string_view name) const {
  auto it = std::find_if(instances.begin(), instances.end(), [&](const InstanceDecl& s) { return s.name == name; });
  return it == instances.end() ? nullptr : &*it;
}

}  // namespace rybu::lang
