#include <algorithm>
#include <map>
#include <unordered_map>

#include "rybu/dedan/text.hpp"

namespace rybu::dedan {

namespace {

using Env = std::map<std::string, int>;

std::string element_name(const std::string& base, int i) { return base + "[" + std::to_string(i) + "]"; }

std::vector<std::string> expand_decl(const DeclName& d) {
  if (!d.size) return {d.name};
  std::vector<std::string> out;
  for (int i = 1; i <= *d.size; ++i) out.push_back(element_name(d.name, i));
  return out;
}

// Visits every assignment of the repeater variables (first repeater varies slowest).
template <class F>
void for_each_binding(const std::vector<Repeater>& reps, F&& f) {
  Env env;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == reps.size()) {
      f(static_cast<const Env&>(env));
      return;
    }
    for (int v = reps[k].low; v <= reps[k].high; ++v) {
      env[reps[k].var] = v;
      self(self, k + 1);
    }
    env.erase(reps[k].var);
  };
  rec(rec, 0);
}

int eval_index(const IndexExpr& e, const Env& env) {
  if (e.var.empty()) return e.offset;
  auto it = env.find(e.var);
  if (it == env.end()) throw DedanError("unbound identifier '" + e.var + "'");
  return it->second + e.offset;
}

// Names declared by a list of (possibly vector) names, for element lookup.
class NameSet {
 public:
  void add(const DeclName& d, const std::string& what) {
    if (sizes_.count(d.name)) throw DedanError("duplicate " + what + " '" + d.name + "'");
    sizes_[d.name] = d.size;
  }
  bool has(const std::string& base) const { return sizes_.count(base) != 0; }

  /// Concrete element name for `r`, range-checked.
  std::string resolve(const Ref& r, const Env& env, const std::string& what) const {
    auto it = sizes_.find(r.name);
    if (it == sizes_.end()) throw DedanError("unknown " + what + " '" + r.name + "'");
    if (!it->second) {
      if (r.index) throw DedanError(what + " '" + r.name + "' is not a vector");
      return r.name;
    }
    if (!r.index) throw DedanError(what + " vector '" + r.name + "' used without an index");
    int i = eval_index(*r.index, env);
    if (i < 1 || i > *it->second)
      throw DedanError("index " + std::to_string(i) + " out of declared vector range for '" + r.name + "[" +
                       std::to_string(*it->second) + "]'");
    return element_name(r.name, i);
  }

 private:
  std::map<std::string, std::optional<int>> sizes_;
};

struct TypeInfo {
  const ServerTypeDecl* decl = nullptr;
  NameSet services;
  NameSet states;
  std::size_t arity = 0;
  struct Slot {
    ParamKind kind;
    std::size_t first;
    std::optional<int> size;
  };
  std::map<std::string, Slot> formals;
};

struct ServerInstance {
  std::string name;
  const TypeInfo* type = nullptr;
  std::vector<std::string> actuals;
  std::optional<std::string> initial_state;
};

class Expander {
 public:
  explicit Expander(const DedanUnit& unit) : unit_(unit) {}

  imds::SystemModel run() {
    collect_types();
    collect_instances();
    collect_init();
    imds::ModelBuilder b;
    for (const ServerInstance& s : servers_) b.add_server(s.name);
    for (const std::string& a : agents_) b.add_agent(a);

    for (const ServerInstance& s : servers_) {
      imds::ServerId id = *b.find_server(s.name);
      for (const DeclName& d : s.type->decl->states)
        for (const std::string& v : expand_decl(d)) b.declare_state({id, b.value(v)});
      if (!s.initial_state) throw DedanError("uninitialized server '" + s.name + "'");
      b.set_initial_state(id, b.value(*s.initial_state));
    }

    for (const ServerInstance& s : servers_) {
      for (const ActionTemplate& t : s.type->decl->actions) {
        for_each_binding(t.repeaters, [&](const Env& env) { b.add_action(instantiate(b, s, t, env)); });
      }
    }

    for (const auto& [agent, msg] : initial_messages_) {
      imds::Message m{*b.find_agent(agent), *b.find_server(msg.first), b.service(msg.second)};
      b.declare_message(m);
      b.set_initial_message(m);
    }
    return std::move(b).build();
  }

 private:
  void collect_types() {
    for (const ServerTypeDecl& t : unit_.server_types) {
      if (types_.count(t.name)) throw DedanError("duplicate server type '" + t.name + "'");
      TypeInfo& info = types_[t.name];
      info.decl = &t;
      for (const DeclName& d : t.services) info.services.add(d, "service");
      for (const DeclName& d : t.states) info.states.add(d, "state");
      for (const FormalParam& f : t.formals) {
        if (info.formals.count(f.decl.name))
          throw DedanError("duplicate formal parameter '" + f.decl.name + "' in server type '" + t.name + "'");
        info.formals[f.decl.name] = TypeInfo::Slot{f.kind, info.arity, f.decl.size};
        info.arity += f.decl.size.value_or(1);
      }
    }
  }

  void collect_instances() {
    for (const InstanceDecl& d : unit_.agents) {
      agent_names_.add(d.decl, "agent");
      for (std::string& n : expand_decl(d.decl)) agents_.push_back(std::move(n));
    }
    for (const InstanceDecl& d : unit_.servers) {
      if (agent_names_.has(d.decl.name)) throw DedanError("name '" + d.decl.name + "' is both agent and server");
      server_names_.add(d.decl, "server");
      const std::string& type = d.type.empty() ? d.decl.name : d.type;
      auto it = types_.find(type);
      if (it == types_.end()) throw DedanError("unknown server type '" + type + "'");
      for (std::string& n : expand_decl(d.decl)) {
        server_index_[n] = servers_.size();
        servers_.push_back(ServerInstance{std::move(n), &it->second, {}, std::nullopt});
      }
    }
  }

  ServerInstance& server(const std::string& name) { return servers_.at(server_index_.at(name)); }

  void collect_init() {
    for (const InitItem& item : unit_.init) {
      for_each_binding(item.repeaters, [&](const Env& env) {
        if (item.message) {
          std::string agent = agent_names_.resolve(item.message->agent, env, "agent");
          std::string srv = server_names_.resolve(item.message->server, env, "server");
          std::string svc = server(srv).type->services.resolve(item.message->service, env, "service");
          if (initial_messages_.count(agent))
            throw DedanError("agent '" + agent + "' has more than one initial message");
          initial_messages_[agent] = {srv, svc};
        } else if (item.server) {
          ServerInstance& s = server(server_names_.resolve(item.server->server, env, "server"));
          const std::vector<Ref>& actuals = item.server->actuals;
          if (actuals.size() != s.type->arity)
            throw DedanError("server '" + s.name + "' of type '" + s.type->decl->name + "' expects " +
                             std::to_string(s.type->arity) + " actual parameters, got " +
                             std::to_string(actuals.size()));
          if (s.initial_state) throw DedanError("server '" + s.name + "' initialized twice");
          s.actuals.clear();
          for (const Ref& r : actuals) {
            bool is_agent = agent_names_.has(r.name);
            s.actuals.push_back(is_agent ? agent_names_.resolve(r, env, "agent")
                                         : server_names_.resolve(r, env, "server"));
          }
          check_actual_kinds(s);
          s.initial_state = s.type->states.resolve(item.server->state, env, "state");
        }
      });
    }
    for (const std::string& a : agents_)
      if (!initial_messages_.count(a)) throw DedanError("agent '" + a + "' has no initial message");
    for (const ServerInstance& s : servers_)
      if (!s.initial_state) throw DedanError("uninitialized server '" + s.name + "'");
  }

  void check_actual_kinds(const ServerInstance& s) const {
    for (const auto& [name, slot] : s.type->formals) {
      for (int k = 0; k < slot.size.value_or(1); ++k) {
        const std::string& actual = s.actuals[slot.first + k];
        bool is_agent = std::find(agents_.begin(), agents_.end(), actual) != agents_.end();
        if (is_agent != (slot.kind == ParamKind::Agent))
          throw DedanError("actual '" + actual + "' of server '" + s.name + "' does not match formal '" + name +
                           "' (" + (slot.kind == ParamKind::Agent ? "agent" : "server") + " expected)");
      }
    }
  }

  std::string bind(const ServerInstance& s, const Ref& r, const Env& env, ParamKind kind) const {
    auto it = s.type->formals.find(r.name);
    if (it == s.type->formals.end() || it->second.kind != kind) {
      if (kind == ParamKind::Server && r.name == s.type->decl->name && !r.index) return s.name;
      throw DedanError("unbound identifier '" + r.name + "' in server type '" + s.type->decl->name + "'");
    }
    const TypeInfo::Slot& slot = it->second;
    if (!slot.size) {
      if (r.index) throw DedanError("formal '" + r.name + "' is not a vector");
      return s.actuals.at(slot.first);
    }
    if (!r.index) throw DedanError("formal vector '" + r.name + "' used without an index");
    int i = eval_index(*r.index, env);
    if (i < 1 || i > *slot.size)
      throw DedanError("index " + std::to_string(i) + " out of declared vector range for formal '" + r.name + "[" +
                       std::to_string(*slot.size) + "]' in server type '" + s.type->decl->name + "'");
    return s.actuals.at(slot.first + static_cast<std::size_t>(i - 1));
  }

  std::string self(const ServerInstance& s, const Ref& r) const {
    if (r.name != s.type->decl->name || r.index)
      throw DedanError("'" + to_string(r) + "' must refer to the server itself in server type '" +
                       s.type->decl->name + "'");
    return s.name;
  }

  imds::Action instantiate(imds::ModelBuilder& b, const ServerInstance& s, const ActionTemplate& t,
                           const Env& env) {
    imds::Action a;
    imds::ServerId own = *b.find_server(self(s, t.input.server));
    self(s, t.in_state.server);
    self(s, t.out_state.server);
    a.input = imds::Message{*b.find_agent(bind(s, t.input.agent, env, ParamKind::Agent)), own,
                            b.service(s.type->services.resolve(t.input.service, env, "service"))};
    a.in_state = imds::State{own, b.value(s.type->states.resolve(t.in_state.value, env, "state"))};
    a.out_state = imds::State{own, b.value(s.type->states.resolve(t.out_state.value, env, "state"))};
    if (t.output) {
      std::string target = bind(s, t.output->server, env, ParamKind::Server);
      const ServerInstance& dst = server(target);
      a.output = imds::Message{*b.find_agent(bind(s, t.output->agent, env, ParamKind::Agent)),
                               *b.find_server(target),
                               b.service(dst.type->services.resolve(t.output->service, env, "service"))};
    }
    return a;
  }

  const ServerInstance& server(const std::string& name) const { return servers_.at(server_index_.at(name)); }

  const DedanUnit& unit_;
  std::map<std::string, TypeInfo> types_;
  NameSet agent_names_;
  NameSet server_names_;
  std::vector<std::string> agents_;
  std::vector<ServerInstance> servers_;
  std::unordered_map<std::string, std::size_t> server_index_;
  std::map<std::string, std::pair<std::string, std::string>> initial_messages_;
};

}  // namespace

imds::SystemModel expand(const DedanUnit& unit) { return Expander(unit).run(); }

void check_unit(const DedanUnit& unit) {
  for (const ServerTypeDecl& t : unit.server_types) {
    // Printing performs the template binding checks.
    DedanUnit single;
    single.server_types.push_back(t);
    print_dedan(single);
  }
  (void)expand(unit);
}

}  // namespace rybu::dedan
