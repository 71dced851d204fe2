#include "rybu/lang/typecheck.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "rybu/lang/parser.hpp"

namespace rybu::lang {

std::string to_string(const Diagnostic& d) {
  return to_string(d.pos) + ": " + (d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ") + d.message;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
}

std::uint64_t Type::cardinality() const {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  switch (kind) {
    case Kind::Int: return static_cast<std::uint64_t>(max - min) + 1;
    case Kind::Enum: return atoms.size();
    case Kind::Vector: {
      std::uint64_t base = element->cardinality();
      std::uint64_t total = 1;
      for (std::int64_t i = 0; i < length; ++i) {
        if (base != 0 && total > kMax / base) return kMax;
        total *= base;
      }
      return total;
    }
  }
  return 0;
}

bool Type::contains_atom(std::string_view atom) const {
  return kind == Kind::Enum && std::find(atoms.begin(), atoms.end(), atom) != atoms.end();
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Type::Kind::Int: return a.min == b.min && a.max == b.max;
    case Type::Kind::Enum: return a.atoms == b.atoms;
    case Type::Kind::Vector: return a.length == b.length && *a.element == *b.element;
  }
  return false;
}

std::optional<std::size_t> ServerInfo::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < decl->vars.size(); ++i)
    if (decl->vars[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::int64_t> eval_const(const Expr& e, const std::map<std::string, std::int64_t>& consts) {
  switch (e.kind) {
    case Expr::Kind::Int: return e.value;
    case Expr::Kind::Name: {
      auto it = consts.find(e.name);
      if (it == consts.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::Negate: {
      auto v = eval_const(*e.args[0], consts);
      if (!v) return std::nullopt;
      return -*v;
    }
    case Expr::Kind::Binary: {
      if (is_comparison(e.op)) return std::nullopt;
      auto l = eval_const(*e.args[0], consts);
      auto r = eval_const(*e.args[1], consts);
      if (!l || !r) return std::nullopt;
      return e.op == BinaryOp::Add ? *l + *r : *l - *r;
    }
    default: return std::nullopt;
  }
}

namespace {

struct StaticType {
  enum class Kind { Int, Atom, Bool, Vector, Error };
  Kind kind = Kind::Error;
  const Type* type = nullptr;  // enum or vector type when known
  std::string literal{};       // atom literal text
};

const char* describe(StaticType::Kind k) {
  switch (k) {
    case StaticType::Kind::Int: return "integer";
    case StaticType::Kind::Atom: return "atom";
    case StaticType::Kind::Bool: return "boolean";
    case StaticType::Kind::Vector: return "vector";
    case StaticType::Kind::Error: return "invalid";
  }
  return "?";
}

class Checker {
 public:
  explicit Checker(const RybuProgram& p) : p_(p) {}

  CheckResult run() {
    check_consts();
    check_servers();
    check_instances();
    check_threads();
    return std::move(result_);
  }

 private:
  void error(SourcePos pos, std::string message) {
    result_.diagnostics.push_back(Diagnostic{Diagnostic::Severity::Error, pos, std::move(message)});
  }

  std::map<std::string, std::int64_t>& consts() { return result_.info.consts; }

  void check_consts() {
    for (const ConstDecl& c : p_.consts) {
      if (consts().count(c.name)) {
        error(c.pos, "duplicate constant '" + c.name + "'");
        continue;
      }
      auto v = eval_const(*c.value, consts());
      if (!v) {
        error(c.pos, "constant '" + c.name + "' is not an integer expression over literals and earlier constants");
        continue;
      }
      consts()[c.name] = *v;
    }
  }

  std::optional<std::int64_t> constant(const Expr& e, const std::string& what) {
    auto v = eval_const(e, consts());
    if (!v) error(e.pos, what + " must be a compile-time integer constant");
    return v;
  }

  std::optional<Type> resolve(const VarType& t) {
    Type out;
    switch (t.kind) {
      case VarType::Kind::IntRange: {
        auto lo = constant(*t.min, "range bound");
        auto hi = constant(*t.max, "range bound");
        if (!lo || !hi) return std::nullopt;
        if (*lo > *hi) {
          error(t.pos, "empty range " + std::to_string(*lo) + ".." + std::to_string(*hi));
          return std::nullopt;
        }
        out.kind = Type::Kind::Int;
        out.min = *lo;
        out.max = *hi;
        return out;
      }
      case VarType::Kind::Enum: {
        std::set<std::string> seen;
        for (const std::string& a : t.atoms)
          if (!seen.insert(a).second) error(t.pos, "duplicate enumeration atom :" + a);
        if (t.atoms.empty()) error(t.pos, "empty enumeration");
        out.kind = Type::Kind::Enum;
        out.atoms = t.atoms;
        return out;
      }
      case VarType::Kind::Vector: {
        auto elem = resolve(*t.element);
        auto len = constant(*t.length, "vector length");
        if (!elem || !len) return std::nullopt;
        if (*len < 1) {
          error(t.pos, "vector length must be at least 1");
          return std::nullopt;
        }
        out.kind = Type::Kind::Vector;
        out.element = std::make_shared<const Type>(*elem);
        out.length = *len;
        return out;
      }
    }
    return std::nullopt;
  }

  void check_servers() {
    for (const ServerDecl& s : p_.servers) {
      if (result_.info.servers.count(s.name)) {
        error(s.pos, "duplicate server '" + s.name + "'");
        continue;
      }
      ServerInfo& info = result_.info.servers[s.name];
      info.decl = &s;
      std::set<std::string> names;
      for (const VarDecl& v : s.vars) {
        if (!names.insert(v.name).second) error(v.pos, "duplicate state variable '" + v.name + "'");
        if (consts().count(v.name)) error(v.pos, "state variable '" + v.name + "' shadows a constant");
        auto t = resolve(*v.type);
        info.var_types.push_back(t.value_or(Type{}));
      }
      for (const RybuAction& a : s.actions) {
        auto& atoms = info.returns[a.service];
        if (std::find(atoms.begin(), atoms.end(), a.return_value) == atoms.end()) atoms.push_back(a.return_value);
        check_action(info, a);
      }
    }
  }

  // Static type of an expression in the scope of a server's variables.
  StaticType type_of(const ServerInfo* server, const Expr& e) {
    using K = StaticType::Kind;
    switch (e.kind) {
      case Expr::Kind::Int: return {K::Int};
      case Expr::Kind::Atom: return {K::Atom, nullptr, e.name};
      case Expr::Kind::Name: {
        if (server) {
          if (auto i = server->var_index(e.name)) {
            const Type& t = server->var_types[*i];
            if (t.kind == Type::Kind::Int) return {K::Int, &t};
            if (t.kind == Type::Kind::Enum) return {K::Atom, &t};
            return {K::Vector, &t};
          }
        }
        if (consts().count(e.name)) return {K::Int};
        error(e.pos, "unknown name '" + e.name + "'");
        return {};
      }
      case Expr::Kind::Index: {
        const Type* t = nullptr;
        if (server)
          if (auto i = server->var_index(e.name)) t = &server->var_types[*i];
        if (!t) {
          error(e.pos, "unknown vector '" + e.name + "'");
          return {};
        }
        if (t->kind != Type::Kind::Vector) {
          error(e.pos, "'" + e.name + "' is not a vector");
          return {};
        }
        auto idx = eval_const(*e.args[0], consts());
        if (!idx) {
          error(e.pos, "vector index must be a compile-time constant");
        } else if (*idx < 0 || *idx >= t->length) {
          error(e.pos, "index " + std::to_string(*idx) + " out of range for '" + e.name + "' of length " +
                           std::to_string(t->length));
        }
        const Type& el = *t->element;
        if (el.kind == Type::Kind::Int) return {K::Int, &el};
        if (el.kind == Type::Kind::Enum) return {K::Atom, &el};
        return {K::Vector, &el};
      }
      case Expr::Kind::Negate: {
        StaticType inner = type_of(server, *e.args[0]);
        if (inner.kind != K::Int && inner.kind != K::Error) error(e.pos, "unary '-' needs an integer operand");
        return {K::Int};
      }
      case Expr::Kind::Binary: {
        StaticType l = type_of(server, *e.args[0]);
        StaticType r = type_of(server, *e.args[1]);
        if (l.kind == K::Error || r.kind == K::Error) return {is_comparison(e.op) ? K::Bool : K::Int};
        if (!is_comparison(e.op)) {
          if (l.kind != K::Int || r.kind != K::Int)
            error(e.pos, "operator '" + std::string(spelling(e.op)) + "' needs integer operands");
          return {K::Int};
        }
        bool equality = e.op == BinaryOp::Eq || e.op == BinaryOp::Ne;
        if (l.kind == K::Int && r.kind == K::Int) return {K::Bool};
        if (equality && l.kind == K::Atom && r.kind == K::Atom) {
          check_atom_fits(l, r, e.pos);
          check_atom_fits(r, l, e.pos);
          return {K::Bool};
        }
        error(e.pos, std::string("cannot compare ") + describe(l.kind) + " with " + describe(r.kind) + " using '" +
                         std::string(spelling(e.op)) + "'");
        return {K::Bool};
      }
      case Expr::Kind::Vector:
        error(e.pos, "vector literals are only allowed in instance initializers");
        return {};
    }
    return {};
  }

  // `literal` must be one of the atoms of `typed`'s enumeration.
  void check_atom_fits(const StaticType& typed, const StaticType& literal, SourcePos pos) {
    if (typed.type && !literal.literal.empty() && !typed.type->contains_atom(literal.literal))
      error(pos, "atom :" + literal.literal + " is not a value of the enumeration");
  }

  void check_assignable(const Type& target, const StaticType& value, SourcePos pos, const std::string& what) {
    using K = StaticType::Kind;
    if (value.kind == K::Error) return;
    switch (target.kind) {
      case Type::Kind::Int:
        if (value.kind != K::Int) error(pos, what + " expects an integer, got " + describe(value.kind));
        break;
      case Type::Kind::Enum:
        if (value.kind != K::Atom) {
          error(pos, what + " expects an atom, got " + describe(value.kind));
        } else if (!value.literal.empty() && !target.contains_atom(value.literal)) {
          error(pos, "atom :" + value.literal + " is not a value of the type of " + what);
        } else if (value.type && !(*value.type == target)) {
          error(pos, what + " is assigned a value of a different enumeration");
        }
        break;
      case Type::Kind::Vector:
        if (value.kind != K::Vector || !value.type || !(*value.type == target))
          error(pos, what + " expects a vector of the same type");
        break;
    }
  }

  void check_action(const ServerInfo& info, const RybuAction& a) {
    if (a.predicate) {
      StaticType t = type_of(&info, *a.predicate);
      if (t.kind != StaticType::Kind::Bool && t.kind != StaticType::Kind::Error)
        error(a.predicate->pos, "predicate of '" + a.service + "' is not a boolean expression");
    }
    std::set<std::string> whole;
    std::set<std::pair<std::string, std::int64_t>> elements;
    for (const Update& u : a.updates) {
      auto i = info.var_index(u.var);
      if (!i) {
        error(u.pos, "update of undeclared variable '" + u.var + "'");
        continue;
      }
      const Type& target = info.var_types[*i];
      StaticType value = type_of(&info, *u.value);
      if (u.index) {
        if (target.kind != Type::Kind::Vector) {
          error(u.pos, "'" + u.var + "' is not a vector");
          continue;
        }
        auto idx = eval_const(*u.index, consts());
        if (!idx) {
          error(u.pos, "vector index must be a compile-time constant");
          continue;
        }
        if (*idx < 0 || *idx >= target.length) {
          error(u.pos, "index " + std::to_string(*idx) + " out of range for '" + u.var + "'");
          continue;
        }
        if (whole.count(u.var) || !elements.insert({u.var, *idx}).second)
          error(u.pos, "'" + u.var + "[" + std::to_string(*idx) + "]' is assigned more than once");
        check_assignable(*target.element, value, u.pos, "'" + u.var + "[" + std::to_string(*idx) + "]'");
      } else {
        bool element_assigned = std::any_of(elements.begin(), elements.end(),
                                            [&](const auto& el) { return el.first == u.var; });
        if (!whole.insert(u.var).second || element_assigned)
          error(u.pos, "'" + u.var + "' is assigned more than once");
        check_assignable(target, value, u.pos, "'" + u.var + "'");
      }
    }
  }

  void check_init_value(const Type& t, const Expr& e, const std::string& what) {
    if (t.kind == Type::Kind::Vector) {
      if (e.kind != Expr::Kind::Vector) {
        error(e.pos, what + " expects a vector literal");
        return;
      }
      if (static_cast<std::int64_t>(e.args.size()) != t.length) {
        error(e.pos, what + " expects " + std::to_string(t.length) + " elements");
        return;
      }
      for (std::size_t i = 0; i < e.args.size(); ++i)
        check_init_value(*t.element, *e.args[i], what + "[" + std::to_string(i) + "]");
      return;
    }
    if (t.kind == Type::Kind::Enum) {
      if (e.kind != Expr::Kind::Atom) {
        error(e.pos, what + " expects an atom");
      } else if (!t.contains_atom(e.name)) {
        error(e.pos, "atom :" + e.name + " is not a value of the type of " + what);
      }
      return;
    }
    auto v = eval_const(e, consts());
    if (!v) {
      error(e.pos, what + " expects an integer constant");
    } else if (*v < t.min || *v > t.max) {
      error(e.pos, what + " = " + std::to_string(*v) + " is outside " + std::to_string(t.min) + ".." +
                       std::to_string(t.max));
    }
  }

  void check_instances() {
    std::set<std::string> names;
    for (const InstanceDecl& d : p_.instances) {
      if (!names.insert(d.name).second) error(d.pos, "duplicate instance '" + d.name + "'");
      auto it = result_.info.servers.find(d.server);
      if (it == result_.info.servers.end()) {
        error(d.pos, "instance '" + d.name + "' of unknown server '" + d.server + "'");
        continue;
      }
      const ServerInfo& info = it->second;
      std::set<std::string> seen;
      for (const Initializer& init : d.init) {
        auto i = info.var_index(init.var);
        if (!i) {
          error(init.pos, "server '" + d.server + "' has no variable '" + init.var + "'");
          continue;
        }
        if (!seen.insert(init.var).second) error(init.pos, "'" + init.var + "' initialized more than once");
        check_init_value(info.var_types[*i], *init.value, "'" + d.name + "." + init.var + "'");
      }
      for (const VarDecl& v : info.decl->vars)
        if (!seen.count(v.name)) error(d.pos, "instance '" + d.name + "' does not initialize '" + v.name + "'");
    }
  }

  const std::vector<std::string>* returns_of(const Stmt& s) {
    const InstanceDecl* inst = p_.find_instance(s.instance);
    if (!inst) {
      error(s.pos, "call to unknown instance '" + s.instance + "'");
      return nullptr;
    }
    auto it = result_.info.servers.find(inst->server);
    if (it == result_.info.servers.end()) return nullptr;
    auto r = it->second.returns.find(s.service);
    if (r == it->second.returns.end()) {
      error(s.pos, "server '" + inst->server + "' has no service '" + s.service + "'");
      return nullptr;
    }
    return &r->second;
  }

  void check_stmts(const std::vector<Stmt>& body) {
    for (const Stmt& s : body) {
      switch (s.kind) {
        case Stmt::Kind::Call:
          if (const auto* rets = returns_of(s)) {
            for (const std::string& r : *rets)
              if (r != "ok")
                error(s.pos, "unhandled return value :" + r + " of " + s.instance + "." + s.service +
                                 "(); use match");
          }
          break;
        case Stmt::Kind::Match: {
          const auto* rets = returns_of(s);
          if (s.arms.empty()) error(s.pos, "match needs at least one arm");
          std::set<std::string> seen;
          for (const MatchArm& arm : s.arms) {
            if (!seen.insert(arm.atom).second) error(arm.pos, "duplicate match arm :" + arm.atom);
            if (rets && std::find(rets->begin(), rets->end(), arm.atom) == rets->end())
              error(arm.pos, s.instance + "." + s.service + "() never returns :" + arm.atom);
            check_stmts(arm.body);
          }
          break;
        }
        case Stmt::Kind::Loop:
          if (s.body.empty()) error(s.pos, "loop body is empty");
          check_stmts(s.body);
          break;
      }
    }
  }

  void check_threads() {
    std::set<std::string> names;
    for (const ThreadDecl& t : p_.threads) {
      if (!names.insert(t.name).second) error(t.pos, "duplicate thread '" + t.name + "'");
      if (!t.params.empty()) error(t.pos, "thread '" + t.name + "' declares parameters; threads take none");
      check_stmts(t.body);
    }
  }

  const RybuProgram& p_;
  CheckResult result_;
};

}  // namespace

CheckResult analyze(const RybuProgram& program) { return Checker(program).run(); }

std::vector<Diagnostic> typecheck(const RybuProgram& program) {
  std::vector<Diagnostic> out;
  for (Diagnostic& d : analyze(program).diagnostics)
    if (d.severity == Diagnostic::Severity::Error) out.push_back(std::move(d));
  return out;
}

}  // namespace rybu::lang
