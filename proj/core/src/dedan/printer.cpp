#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "rybu/dedan/text.hpp"

namespace rybu::dedan {

DedanError::DedanError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? message + " at " + std::to_string(line) + ":" + std::to_string(column)
                                  : message),
      line_(line),
      column_(column) {}

std::string to_string(const IndexExpr& e) {
  if (e.var.empty()) return std::to_string(e.offset);
  if (e.offset == 0) return e.var;
  return e.var + (e.offset > 0 ? "+" : "-") + std::to_string(std::abs(e.offset));
}

std::string to_string(const Ref& r) {
  if (!r.index) return r.name;
  return r.name + "[" + to_string(*r.index) + "]";
}

namespace {

std::string decl(const DeclName& d) {
  return d.size ? d.name + "[" + std::to_string(*d.size) + "]" : d.name;
}

std::string repeaters(const std::vector<Repeater>& reps) {
  std::string out;
  for (const Repeater& r : reps)
    out += "<" + r.var + "=" + std::to_string(r.low) + ".." + std::to_string(r.high) + "> ";
  return out;
}

std::string message(const MessageRef& m) {
  return to_string(m.agent) + "." + to_string(m.server) + "." + to_string(m.service);
}

std::string state(const StateRef& s) { return to_string(s.server) + "." + to_string(s.value); }

std::string join(const std::vector<DeclName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + decl(names[i]);
  return out;
}

// Identifiers a template may mention, per category.
class Scope {
 public:
  explicit Scope(const ServerTypeDecl& type) : type_(type) {}

  void check(const ActionTemplate& a) const {
    for (const Repeater& r : a.repeaters)
      if (r.low > r.high)
        fail("repeater '" + r.var + "' has an empty range");
    check_agent(a.input.agent, a);
    check_self(a.input.server, a);
    check_declared(a.input.service, type_.services, a, "service");
    check_self(a.in_state.server, a);
    check_declared(a.in_state.value, type_.states, a, "state");
    if (a.output) {
      check_agent(a.output->agent, a);
      check_server(a.output->server, a);
      check_index(a.output->service, a);
    }
    check_self(a.out_state.server, a);
    check_declared(a.out_state.value, type_.states, a, "state");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DedanError(what + " in server type '" + type_.name + "'");
  }

  void unbound(const std::string& name) const { fail("unbound identifier '" + name + "'"); }

  const FormalParam* formal(const std::string& name) const {
    auto it = std::find_if(type_.formals.begin(), type_.formals.end(),
                           [&](const FormalParam& f) { return f.decl.name == name; });
    return it == type_.formals.end() ? nullptr : &*it;
  }

  void check_index(const Ref& r, const ActionTemplate& a) const {
    if (!r.index || r.index->var.empty()) return;
    bool bound = std::any_of(a.repeaters.begin(), a.repeaters.end(),
                             [&](const Repeater& rep) { return rep.var == r.index->var; });
    if (!bound) unbound(r.index->var);
  }

  void check_agent(const Ref& r, const ActionTemplate& a) const {
    const FormalParam* f = formal(r.name);
    if (!f || f->kind != ParamKind::Agent) unbound(r.name);
    check_index(r, a);
  }

  void check_server(const Ref& r, const ActionTemplate& a) const {
    const FormalParam* f = formal(r.name);
    if (!(f && f->kind == ParamKind::Server) && r.name != type_.name) unbound(r.name);
    check_index(r, a);
  }

  void check_self(const Ref& r, const ActionTemplate& a) const {
    if (r.name != type_.name || r.index) {
      if (formal(r.name)) fail("'" + to_string(r) + "' must refer to the server itself");
      unbound(r.name);
    }
    check_index(r, a);
  }

  void check_declared(const Ref& r, const std::vector<DeclName>& decls, const ActionTemplate& a,
                      const char* what) const {
    bool found = std::any_of(decls.begin(), decls.end(), [&](const DeclName& d) { return d.name == r.name; });
    if (!found) fail("unbound identifier '" + r.name + "' (undeclared " + what + ")");
    check_index(r, a);
  }

  const ServerTypeDecl& type_;
};

void print_formals(std::ostream& os, const std::vector<FormalParam>& formals) {
  if (formals.empty()) return;
  os << " (";
  for (std::size_t i = 0; i < formals.size(); ++i) {
    if (i == 0 || formals[i].kind != formals[i - 1].kind) {
      if (i) os << "; ";
      os << (formals[i].kind == ParamKind::Agent ? "agents " : "servers ");
    } else {
      os << ", ";
    }
    os << decl(formals[i].decl);
  }
  os << ")";
}

void print_instances(std::ostream& os, const char* keyword, const std::vector<InstanceDecl>& list) {
  if (list.empty()) return;
  os << keyword << ": ";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) os << ", ";
    os << decl(list[i].decl);
    if (!list[i].type.empty()) os << ":" << list[i].type;
  }
  os << ";\n";
}

}  // namespace

std::string print_dedan(const DedanUnit& unit) {
  std::ostringstream os;
  os << "system " << unit.system_name << ";\n\n";
  for (const ServerTypeDecl& type : unit.server_types) {
    Scope scope(type);
    os << "server: " << type.name;
    print_formals(os, type.formals);
    os << ",\n";
    os << "services {" << join(type.services) << "},\n";
    os << "states {" << join(type.states) << "},\n";
    if (type.actions.empty()) {
      os << "actions { }";
    } else {
      os << "actions {\n";
      for (const ActionTemplate& a : type.actions) {
        scope.check(a);
        os << "  " << repeaters(a.repeaters) << "{" << message(a.input) << ", " << state(a.in_state) << "} -> {";
        if (a.output) os << message(*a.output) << ", ";
        os << state(a.out_state) << "},\n";
      }
      os << "}";
    }
    os << ";\n\n";
  }
  print_instances(os, "agents", unit.agents);
  print_instances(os, "servers", unit.servers);
  os << "\ninit -> {\n";
  for (const InitItem& item : unit.init) {
    os << "  " << repeaters(item.repeaters);
    if (item.message) {
      os << message(*item.message);
    } else if (item.server) {
      os << to_string(item.server->server) << "(";
      for (std::size_t i = 0; i < item.server->actuals.size(); ++i)
        os << (i ? "," : "") << to_string(item.server->actuals[i]);
      os << ")." << to_string(item.server->state);
    }
    os << ",\n";
  }
  os << "}.\n";
  return os.str();
}

}  // namespace rybu::dedan
