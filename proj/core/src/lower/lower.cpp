#include "rybu/lower/lower.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "rybu/dedan/text.hpp"

namespace rybu::lower {

namespace {

std::string summarize(const std::vector<lang::Diagnostic>& diags) {
  std::string out;
  for (const lang::Diagnostic& d : diags) {
    if (d.severity != lang::Diagnostic::Severity::Error) continue;
    if (!out.empty()) out += "\n";
    out += lang::to_string(d);
  }
  return out.empty() ? "lowering failed" : out;
}

lang::Diagnostic error_at(lang::SourcePos pos, std::string message) {
  return lang::Diagnostic{lang::Diagnostic::Severity::Error, pos, std::move(message)};
}

lang::Diagnostic warning_at(lang::SourcePos pos, std::string message) {
  return lang::Diagnostic{lang::Diagnostic::Severity::Warning, pos, std::move(message)};
}

template <class T>
void append_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

bool in_type(const Value& v, const lang::Type& t) {
  switch (t.kind) {
    case lang::Type::Kind::Int: return v.kind == Value::Kind::Int && v.number >= t.min && v.number <= t.max;
    case lang::Type::Kind::Enum: return v.kind == Value::Kind::Atom && t.contains_atom(v.atom);
    case lang::Type::Kind::Vector:
      return v.kind == Value::Kind::Vector && static_cast<std::int64_t>(v.elements.size()) == t.length &&
             std::all_of(v.elements.begin(), v.elements.end(), [&](const Value& e) { return in_type(e, *t.element); });
  }
  return false;
}

}  // namespace

LowerError::LowerError(std::vector<lang::Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string thread_server_name(std::string_view thread) { return "S_" + std::string(thread); }
std::string thread_agent_name(std::string_view thread) { return "A_" + std::string(thread); }

std::string to_string(const LoweredAction& a) {
  std::string out = "{" + a.agent + "." + a.server + "." + a.service + ", " + a.server + "." + a.in_state + "} -> {";
  if (a.out_server) out += a.agent + "." + *a.out_server + "." + *a.out_service + ", ";
  return out + a.server + "." + a.out_state + "}";
}

std::vector<LabeledState> enumerate_states(const lang::ServerInfo& server, const LowerOptions& options) {
  std::uint64_t total = 1;
  std::vector<std::vector<Value>> domains;
  for (const lang::Type& t : server.var_types) {
    domains.push_back(domain(t));
    std::uint64_t n = domains.back().size();
    if (n != 0 && total > options.max_states_per_server / n + 1) total = options.max_states_per_server + 1;
    total *= n;
    if (total > options.max_states_per_server) {
      throw LowerError({error_at(server.decl->pos, "server '" + server.decl->name + "' has more than " +
                                                       std::to_string(options.max_states_per_server) + " states")});
    }
  }

  std::vector<LabeledState> out;
  out.reserve(total);
  std::vector<std::size_t> digits(domains.size(), 0);
  for (;;) {
    LabeledState s;
    for (std::size_t i = 0; i < domains.size(); ++i)
      s.assignment.vars.emplace_back(server.decl->vars[i].name, domains[i][digits[i]]);
    s.label = state_label(s.assignment);
    out.push_back(std::move(s));
    std::size_t k = digits.size();
    while (k > 0 && ++digits[k - 1] == domains[k - 1].size()) digits[--k] = 0;
    if (k == 0) break;
  }

  std::unordered_set<std::string> seen;
  for (const LabeledState& s : out) {
    if (!seen.insert(s.label).second)
      throw LowerError({error_at(server.decl->pos, "state label '" + s.label + "' of server '" + server.decl->name +
                                                       "' is produced by two different assignments; rename its "
                                                       "variables so labels stay unique")});
  }
  return out;
}

std::map<std::string, std::vector<Caller>> collect_callers(const lang::RybuProgram& program) {
  std::map<std::string, std::vector<Caller>> out;
  for (const lang::ThreadDecl& t : program.threads) {
    auto visit = [&](auto&& self, const std::vector<lang::Stmt>& body) -> void {
      for (const lang::Stmt& s : body) {
        if (s.kind == lang::Stmt::Kind::Loop) {
          self(self, s.body);
          continue;
        }
        std::vector<Caller>& callers = out[s.instance];
        if (callers.empty() || callers.back().thread != t.name) callers.push_back(Caller{t.name, {}});
        append_unique(callers.back().services, s.service);
        for (const lang::MatchArm& arm : s.arms) self(self, arm.body);
      }
    };
    visit(visit, t.body);
  }
  return out;
}

std::vector<LoweredAction> lower_server(const lang::ProgramInfo& info, const lang::InstanceDecl& instance,
                                        const std::vector<Caller>& callers,
                                        std::vector<lang::Diagnostic>& warnings, const LowerOptions& options) {
  const lang::ServerInfo& server = info.servers.at(instance.server);
  const std::vector<LabeledState> states = enumerate_states(server, options);
  std::vector<lang::Diagnostic> errors;
  std::vector<LoweredAction> out;

  for (const auto& [service, returns] : server.returns) {
    bool called = std::any_of(callers.begin(), callers.end(), [&](const Caller& c) {
      return std::find(c.services.begin(), c.services.end(), service) != c.services.end();
    });
    if (!called)
      warnings.push_back(warning_at(instance.pos, "service '" + service + "' of '" + instance.name +
                                                      "' is never called; it produces no actions"));
  }

  for (const lang::RybuAction& action : server.decl->actions) {
    std::vector<const LabeledState*> satisfying;
    std::vector<std::string> targets;
    for (const LabeledState& s : states) {
      if (action.predicate && !eval_expr(*action.predicate, s.assignment, info.consts).truth) continue;
      StateAssignment next = s.assignment;
      std::vector<std::pair<Value*, Value>> writes;
      for (const lang::Update& u : action.updates) {
        Value v = eval_expr(*u.value, s.assignment, info.consts);
        Value* slot = next.find(u.var);
        if (u.index) {
          std::int64_t i = eval_expr(*u.index, s.assignment, info.consts).number;
          slot = &slot->elements.at(static_cast<std::size_t>(i));
        }
        writes.emplace_back(slot, std::move(v));
      }
      for (auto& [slot, v] : writes) *slot = std::move(v);
      bool ok = true;
      for (std::size_t i = 0; i < next.vars.size(); ++i) {
        if (!in_type(next.vars[i].second, server.var_types[i])) {
          errors.push_back(error_at(action.pos, "action '" + action.service + "' of server '" + server.decl->name +
                                                    "' drives '" + next.vars[i].first + "' to " +
                                                    display(next.vars[i].second) + " (outside its type) from state " +
                                                    s.label));
          ok = false;
        }
      }
      if (!ok) continue;
      satisfying.push_back(&s);
      targets.push_back(state_label(next));
    }
    if (satisfying.empty() && errors.empty())
      warnings.push_back(warning_at(action.pos, "predicate of action '" + action.service + "' in server '" +
                                                    server.decl->name + "' is never satisfied"));

    for (const Caller& c : callers) {
      if (std::find(c.services.begin(), c.services.end(), action.service) == c.services.end()) continue;
      for (std::size_t k = 0; k < satisfying.size(); ++k) {
        LoweredAction a;
        a.agent = thread_agent_name(c.thread);
        a.server = instance.name;
        a.service = action.service;
        a.in_state = satisfying[k]->label;
        a.out_server = thread_server_name(c.thread);
        a.out_service = action.return_value;
        a.out_state = targets[k];
        out.push_back(std::move(a));
      }
    }
  }
  if (!errors.empty()) throw LowerError(std::move(errors));
  return out;
}

namespace {

// Control flow of one thread: which call follows each response.
class ThreadFlow {
 public:
  static constexpr int kEnd = -1;

  ThreadFlow(const lang::ProgramInfo& info, const lang::RybuProgram& program, const lang::ThreadDecl& thread)
      : info_(info), program_(program), thread_(thread) {
    number(thread.body);
  }

  void build() { walk(thread_.body, kEnd); }

  const std::vector<const lang::Stmt*>& calls() const { return calls_; }
  int first() const { return first_call(thread_.body, 0, kEnd); }

  struct Edge {
    std::string atom;
    int target;
  };
  const std::vector<std::vector<Edge>>& edges() const { return edges_; }
  const std::vector<lang::Diagnostic>& errors() const { return errors_; }

  const std::vector<std::string>& returns(const lang::Stmt& s) const {
    static const std::vector<std::string> kNone;
    const lang::InstanceDecl* inst = program_.find_instance(s.instance);
    if (!inst) return kNone;
    const auto& server = info_.servers.at(inst->server);
    auto it = server.returns.find(s.service);
    return it == server.returns.end() ? kNone : it->second;
  }

 private:
  void number(const std::vector<lang::Stmt>& body) {
    for (const lang::Stmt& s : body) {
      if (s.kind == lang::Stmt::Kind::Loop) {
        number(s.body);
        continue;
      }
      index_[&s] = static_cast<int>(calls_.size());
      calls_.push_back(&s);
      for (const lang::MatchArm& arm : s.arms) number(arm.body);
    }
  }

  int first_call(const std::vector<lang::Stmt>& body, std::size_t i, int cont) const {
    if (i >= body.size()) return cont;
    const lang::Stmt& s = body[i];
    if (s.kind == lang::Stmt::Kind::Loop) return first_call(s.body, 0, kEnd);
    return index_.at(&s);
  }

  void walk(const std::vector<lang::Stmt>& body, int cont) {
    edges_.resize(calls_.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
      const lang::Stmt& s = body[i];
      const int next = first_call(body, i + 1, cont);
      switch (s.kind) {
        case lang::Stmt::Kind::Loop: walk(s.body, first_call(s.body, 0, kEnd)); break;
        case lang::Stmt::Kind::Call:
          for (const std::string& r : returns(s)) edges_[index_.at(&s)].push_back(Edge{r, next});
          break;
        case lang::Stmt::Kind::Match:
          for (const std::string& r : returns(s)) {
            auto arm = std::find_if(s.arms.begin(), s.arms.end(), [&](const lang::MatchArm& a) { return a.atom == r; });
            if (arm == s.arms.end()) {
              errors_.push_back(error_at(s.pos, "match on " + s.instance + "." + s.service + "() has no arm for :" + r +
                                                    "; the agent would be stranded"));
              continue;
            }
            edges_[index_.at(&s)].push_back(Edge{r, first_call(arm->body, 0, next)});
          }
          for (const lang::MatchArm& arm : s.arms) walk(arm.body, next);
          break;
      }
    }
  }

  const lang::ProgramInfo& info_;
  const lang::RybuProgram& program_;
  const lang::ThreadDecl& thread_;
  std::vector<const lang::Stmt*> calls_;
  std::unordered_map<const lang::Stmt*, int> index_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<lang::Diagnostic> errors_;
};

}  // namespace

LoweredThread lower_thread(const lang::ProgramInfo& info, const lang::RybuProgram& program,
                           const lang::ThreadDecl& thread, const LowerOptions& options) {
  if (thread.body.empty()) throw LowerError({error_at(thread.pos, "thread '" + thread.name + "' has an empty body")});

  ThreadFlow flow(info, program, thread);
  flow.build();
  if (!flow.errors().empty()) throw LowerError(flow.errors());

  LoweredThread out;
  out.server = thread_server_name(thread.name);
  out.agent = thread_agent_name(thread.name);

  std::vector<std::string> pc;
  for (std::size_t k = 0; k < flow.calls().size(); ++k) {
    const lang::Stmt& s = *flow.calls()[k];
    pc.push_back("s" + std::to_string(k) + "_" + s.instance + "_" + s.service);
    append_unique(out.used_instances, s.instance);
  }

  if (options.bootstrap) {
    out.states.push_back("ini");
    out.services.push_back("start");
  }
  out.states.insert(out.states.end(), pc.begin(), pc.end());

  auto emit = [&](const std::string& in_service, const std::string& in_state, int target) {
    LoweredAction a;
    a.agent = out.agent;
    a.server = out.server;
    a.service = in_service;
    a.in_state = in_state;
    if (target == ThreadFlow::kEnd) {
      a.out_state = "stop";
      append_unique(out.states, std::string("stop"));
    } else {
      const lang::Stmt& next = *flow.calls()[static_cast<std::size_t>(target)];
      a.out_server = next.instance;
      a.out_service = next.service;
      a.out_state = pc[static_cast<std::size_t>(target)];
    }
    out.actions.push_back(std::move(a));
  };

  const int first = flow.first();
  const lang::Stmt& first_stmt = *flow.calls()[static_cast<std::size_t>(first)];
  if (options.bootstrap) {
    emit("start", "ini", first);
    out.initial_state = "ini";
    out.initial_server = out.server;
    out.initial_service = "start";
  } else {
    out.initial_state = pc[static_cast<std::size_t>(first)];
    out.initial_server = first_stmt.instance;
    out.initial_service = first_stmt.service;
  }

  for (std::size_t k = 0; k < flow.calls().size(); ++k) {
    for (const ThreadFlow::Edge& e : flow.edges()[k]) {
      append_unique(out.services, e.atom);
      emit(e.atom, pc[k], e.target);
    }
  }
  return out;
}

namespace {

dedan::Ref name_ref(const std::string& name) { return dedan::Ref{name, std::nullopt}; }

dedan::ActionTemplate to_template(const LoweredAction& a) {
  dedan::ActionTemplate t;
  t.input = dedan::MessageRef{name_ref(a.agent), name_ref(a.server), name_ref(a.service)};
  t.in_state = dedan::StateRef{name_ref(a.server), name_ref(a.in_state)};
  if (a.out_server) t.output = dedan::MessageRef{name_ref(a.agent), name_ref(*a.out_server), name_ref(*a.out_service)};
  t.out_state = dedan::StateRef{name_ref(a.server), name_ref(a.out_state)};
  return t;
}

std::vector<dedan::DeclName> decls(const std::vector<std::string>& names) {
  std::vector<dedan::DeclName> out;
  for (const std::string& n : names) out.push_back(dedan::DeclName{n, std::nullopt});
  return out;
}

}  // namespace

LoweredProgram lower_program(const lang::RybuProgram& program, const LowerOptions& options,
                             std::string system_name) {
  lang::CheckResult checked = lang::analyze(program);
  if (lang::has_errors(checked.diagnostics)) throw LowerError(checked.diagnostics);
  const lang::ProgramInfo& info = checked.info;

  LoweredProgram out;
  std::vector<lang::Diagnostic> errors;

  // IMDS names of servers and agents must not collide.
  std::set<std::string> names;
  auto claim = [&](const std::string& name, lang::SourcePos pos) {
    if (!names.insert(name).second) errors.push_back(error_at(pos, "name '" + name + "' is used twice in the model"));
  };
  for (const lang::InstanceDecl& d : program.instances) claim(d.name, d.pos);
  for (const lang::ThreadDecl& t : program.threads) {
    claim(thread_server_name(t.name), t.pos);
    claim(thread_agent_name(t.name), t.pos);
  }
  if (!errors.empty()) throw LowerError(errors);

  const auto callers = collect_callers(program);
  dedan::DedanUnit& unit = out.dedan;
  unit.system_name = std::move(system_name);

  std::vector<dedan::InitItem> server_inits;
  for (const lang::InstanceDecl& inst : program.instances) {
    static const std::vector<Caller> kNoCallers;
    auto c = callers.find(inst.name);
    const std::vector<Caller>& cs = c == callers.end() ? kNoCallers : c->second;
    std::vector<LoweredAction> actions;
    std::vector<LabeledState> states;
    try {
      actions = lower_server(info, inst, cs, out.warnings, options);
      states = enumerate_states(info.servers.at(inst.server), options);
    } catch (const LowerError& e) {
      errors.insert(errors.end(), e.diagnostics().begin(), e.diagnostics().end());
      continue;
    }

    dedan::ServerTypeDecl type;
    type.name = inst.name;
    for (const Caller& caller : cs)
      type.formals.push_back({dedan::ParamKind::Agent, {thread_agent_name(caller.thread), std::nullopt}});
    for (const Caller& caller : cs)
      type.formals.push_back({dedan::ParamKind::Server, {thread_server_name(caller.thread), std::nullopt}});
    std::vector<std::string> services;
    for (const lang::RybuAction& a : info.servers.at(inst.server).decl->actions) append_unique(services, a.service);
    type.services = decls(services);
    auto& decomposition = out.decomposition[inst.name];
    std::vector<std::string> labels;
    for (const LabeledState& s : states) {
      labels.push_back(s.label);
      auto& parts = decomposition[s.label];
      for (const auto& [var, value] : s.assignment.vars) parts.emplace_back(var, display(value));
    }
    type.states = decls(labels);
    for (const LoweredAction& a : actions) type.actions.push_back(to_template(a));
    unit.server_types.push_back(std::move(type));
    unit.servers.push_back(dedan::InstanceDecl{{inst.name, std::nullopt}, {}});

    // Initial state from the initializer.
    StateAssignment init;
    const lang::ServerInfo& server = info.servers.at(inst.server);
    for (const lang::VarDecl& v : server.decl->vars) {
      auto it = std::find_if(inst.init.begin(), inst.init.end(),
                             [&](const lang::Initializer& i) { return i.var == v.name; });
      init.vars.emplace_back(v.name, eval_expr(*it->value, StateAssignment{}, info.consts));
    }
    dedan::ServerInit si;
    si.server = name_ref(inst.name);
    for (const dedan::FormalParam& f : unit.server_types.back().formals) si.actuals.push_back(name_ref(f.decl.name));
    si.state = name_ref(state_label(init));
    server_inits.push_back(dedan::InitItem{{}, std::nullopt, std::move(si)});
  }

  std::vector<dedan::InitItem> thread_inits;
  for (const lang::ThreadDecl& t : program.threads) {
    LoweredThread lt;
    try {
      lt = lower_thread(info, program, t, options);
    } catch (const LowerError& e) {
      errors.insert(errors.end(), e.diagnostics().begin(), e.diagnostics().end());
      continue;
    }
    dedan::ServerTypeDecl type;
    type.name = lt.server;
    type.formals.push_back({dedan::ParamKind::Agent, {lt.agent, std::nullopt}});
    for (const std::string& inst : lt.used_instances)
      type.formals.push_back({dedan::ParamKind::Server, {inst, std::nullopt}});
    type.services = decls(lt.services);
    type.states = decls(lt.states);
    for (const LoweredAction& a : lt.actions) type.actions.push_back(to_template(a));
    unit.server_types.push_back(std::move(type));
    unit.servers.push_back(dedan::InstanceDecl{{lt.server, std::nullopt}, {}});
    unit.agents.push_back(dedan::InstanceDecl{{lt.agent, std::nullopt}, {}});

    dedan::ServerInit si;
    si.server = name_ref(lt.server);
    for (const dedan::FormalParam& f : unit.server_types.back().formals) si.actuals.push_back(name_ref(f.decl.name));
    si.state = name_ref(lt.initial_state);
    thread_inits.push_back(dedan::InitItem{{}, std::nullopt, std::move(si)});
    thread_inits.push_back(dedan::InitItem{
        {}, dedan::MessageRef{name_ref(lt.agent), name_ref(lt.initial_server), name_ref(lt.initial_service)}, std::nullopt});

    auto& decomposition = out.decomposition[lt.server];
    for (const std::string& s : lt.states) decomposition[s];
  }
  if (!errors.empty()) throw LowerError(std::move(errors));

  unit.init = std::move(server_inits);
  unit.init.insert(unit.init.end(), thread_inits.begin(), thread_inits.end());

  try {
    out.model = dedan::expand(unit);
  } catch (const dedan::DedanError& e) {
    throw LowerError({error_at({}, std::string("internal: generated model does not expand: ") + e.what())});
  }
  return out;
}

}  // namespace rybu::lower
