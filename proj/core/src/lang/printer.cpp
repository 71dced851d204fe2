#include <sstream>

#include "rybu/lang/parser.hpp"

namespace rybu::lang {

namespace {

int precedence(const Expr& e) {
  if (e.kind == Expr::Kind::Binary) return is_comparison(e.op) ? 1 : 2;
  if (e.kind == Expr::Kind::Negate) return 3;
  return 4;
}

void print(std::ostream& os, const Expr& e, int required) {
  bool parens = precedence(e) < required;
  if (parens) os << "(";
  switch (e.kind) {
    case Expr::Kind::Int: os << e.value; break;
    case Expr::Kind::Atom: os << ":" << e.name; break;
    case Expr::Kind::Name: os << e.name; break;
    case Expr::Kind::Index:
      os << e.name << "[";
      print(os, *e.args[0], 0);
      os << "]";
      break;
    case Expr::Kind::Negate:
      os << "-";
      print(os, *e.args[0], 3);
      break;
    case Expr::Kind::Binary:
      if (is_comparison(e.op)) {
        print(os, *e.args[0], 2);
        os << " " << spelling(e.op) << " ";
        print(os, *e.args[1], 2);
      } else {
        print(os, *e.args[0], 2);
        os << " " << spelling(e.op) << " ";
        print(os, *e.args[1], 3);
      }
      break;
    case Expr::Kind::Vector:
      os << "[";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print(os, *e.args[i], 0);
      }
      os << "]";
      break;
  }
  if (parens) os << ")";
}

void print_type(std::ostream& os, const VarType& t) {
  switch (t.kind) {
    case VarType::Kind::IntRange:
      print(os, *t.min, 2);
      os << "..";
      print(os, *t.max, 2);
      break;
    case VarType::Kind::Enum:
      os << "{";
      for (std::size_t i = 0; i < t.atoms.size(); ++i) os << (i ? ", " : "") << t.atoms[i];
      os << "}";
      break;
    case VarType::Kind::Vector:
      os << "(";
      print_type(os, *t.element);
      os << ")[";
      print(os, *t.length, 0);
      os << "]";
      break;
  }
}

void indent(std::ostream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
}

void print_stmts(std::ostream& os, const std::vector<Stmt>& body, int depth);

void print_stmt(std::ostream& os, const Stmt& s, int depth) {
  switch (s.kind) {
    case Stmt::Kind::Call:
      indent(os, depth);
      os << s.instance << "." << s.service << "();\n";
      break;
    case Stmt::Kind::Loop:
      indent(os, depth);
      os << "loop {\n";
      print_stmts(os, s.body, depth + 1);
      indent(os, depth);
      os << "}\n";
      break;
    case Stmt::Kind::Match:
      indent(os, depth);
      os << "match " << s.instance << "." << s.service << "() {\n";
      for (const MatchArm& arm : s.arms) {
        indent(os, depth + 1);
        os << ":" << arm.atom << " => ";
        if (arm.body.size() == 1 && arm.body[0].kind == Stmt::Kind::Call) {
          os << arm.body[0].instance << "." << arm.body[0].service << "();\n";
        } else {
          os << "{\n";
          print_stmts(os, arm.body, depth + 2);
          indent(os, depth + 1);
          os << "}\n";
        }
      }
      indent(os, depth);
      os << "}\n";
      break;
  }
}

void print_stmts(std::ostream& os, const std::vector<Stmt>& body, int depth) {
  for (const Stmt& s : body) print_stmt(os, s, depth);
}

}  // namespace

std::string print_expr(const Expr& expr) {
  std::ostringstream os;
  print(os, expr, 0);
  return os.str();
}

std::string print_program(const RybuProgram& p) {
  std::ostringstream os;
  for (const ConstDecl& c : p.consts) os << "const " << c.name << " = " << print_expr(*c.value) << ";\n";
  if (!p.consts.empty()) os << "\n";

  for (const ServerDecl& s : p.servers) {
    os << "server " << s.name << " {\n";
    for (const VarDecl& v : s.vars) {
      os << "  var " << v.name << " : ";
      print_type(os, *v.type);
      os << ";\n";
    }
    for (const RybuAction& a : s.actions) {
      os << "  { " << a.service;
      if (a.predicate) os << " | " << print_expr(*a.predicate);
      os << " } -> { ";
      for (const Update& u : a.updates) {
        os << u.var;
        if (u.index) os << "[" << print_expr(*u.index) << "]";
        os << " = " << print_expr(*u.value) << "; ";
      }
      os << "return :" << a.return_value << "; }\n";
    }
    os << "}\n\n";
  }

  for (const InstanceDecl& d : p.instances) {
    os << "var " << d.name << " = " << d.server << "() {";
    for (std::size_t i = 0; i < d.init.size(); ++i)
      os << (i ? ", " : " ") << d.init[i].var << " = " << print_expr(*d.init[i].value);
    os << (d.init.empty() ? "};\n" : " };\n");
  }
  if (!p.instances.empty()) os << "\n";

  for (const ThreadDecl& t : p.threads) {
    os << "thread " << t.name << "(";
    for (std::size_t i = 0; i < t.params.size(); ++i) os << (i ? ", " : "") << t.params[i];
    os << ") {\n";
    print_stmts(os, t.body, 1);
    os << "}\n\n";
  }
  return os.str();
}

}  // namespace rybu::lang
