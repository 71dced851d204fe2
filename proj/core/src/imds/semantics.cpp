#include "rybu/imds/semantics.hpp"

#include <algorithm>

namespace rybu::imds {

namespace {

void check_fits(const SystemModel& model, const Configuration& config) {
  if (config.server_count() != model.server_count() || config.agent_count() != model.agent_count())
    throw StructuralError("configuration shape does not match the model");
  for (std::size_t s = 0; s < config.server_count(); ++s)
    if (!config.state_of(ServerId(s)).valid())
      throw StructuralError("server '" + model.name(ServerId(s)) + "' has no state");
}

}  // namespace

std::vector<ActionId> enabled_actions(const SystemModel& model, const Configuration& config) {
  check_fits(model, config);
  std::vector<ActionId> out;
  for (AgentId a : config.pending_agents()) {
    const Message m = *config.pending(a);
    for (ActionId id : model.actions_consuming(m)) {
      const Action& act = model.action(id);
      if (config.state_of(act.in_state.server) == act.in_state.value) out.push_back(id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_enabled(const Configuration& config, const Action& action) {
  if (action.input.agent.index >= config.agent_count()) return false;
  if (action.in_state.server.index >= config.server_count()) return false;
  auto m = config.pending(action.input.agent);
  return m && *m == action.input && config.state_of(action.in_state.server) == action.in_state.value;
}

Configuration apply_action(const Configuration& config, const Action& action) {
  if (!is_enabled(config, action))
    throw NotEnabledError("action is not enabled in this configuration");
  Configuration next = config;
  next.set_state(action.out_state.server, action.out_state.value);
  if (action.output)
    next.set_pending(*action.output);
  else
    next.terminate(action.input.agent);
  return next;
}

std::map<ServerId, std::vector<ActionId>> server_view(const SystemModel& model) {
  std::map<ServerId, std::vector<ActionId>> view;
  for (std::size_t s = 0; s < model.server_count(); ++s) view[ServerId(s)];
  for (std::size_t i = 0; i < model.action_count(); ++i)
    view[model.action(ActionId(i)).in_state.server].emplace_back(i);
  return view;
}

std::map<AgentId, std::vector<ActionId>> agent_view(const SystemModel& model) {
  std::map<AgentId, std::vector<ActionId>> view;
  for (std::size_t a = 0; a < model.agent_count(); ++a) view[AgentId(a)];
  for (std::size_t i = 0; i < model.action_count(); ++i)
    view[model.action(ActionId(i)).input.agent].emplace_back(i);
  return view;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ServerContinuity: return "server continuity";
    case ViolationKind::AgentContinuity: return "agent continuity";
    case ViolationKind::MessageTarget: return "message target";
    case ViolationKind::UndeclaredState: return "undeclared state";
    case ViolationKind::UndeclaredMessage: return "undeclared message";
    case ViolationKind::InitialCompleteness: return "T0 completeness";
    case ViolationKind::InitialUndeclared: return "undeclared initial item";
  }
  return "unknown";
}

std::vector<Violation> validate_model(const SystemModel& model) {
  std::vector<Violation> out;
  auto report = [&out](ViolationKind k, std::string element, std::string detail) {
    out.push_back(Violation{k, std::move(element), std::move(detail)});
  };

  for (const Action& a : model.actions()) {
    const std::string rendered = to_string(model, a);
    if (a.out_state.server != a.in_state.server)
      report(ViolationKind::ServerContinuity, rendered, "output state belongs to another server");
    if (a.input.server != a.in_state.server)
      report(ViolationKind::MessageTarget, rendered, "input message is addressed to another server");
    if (a.output && a.output->agent != a.input.agent)
      report(ViolationKind::AgentContinuity, rendered, "output message carries another agent");
    if (!model.declares(a.in_state) || !model.declares(a.out_state))
      report(ViolationKind::UndeclaredState, rendered, "state not in the declared state set");
    if (!model.declares(a.input) || (a.output && !model.declares(*a.output)))
      report(ViolationKind::UndeclaredMessage, rendered, "message not in the declared message set");
  }

  const Configuration& init = model.initial();
  if (init.server_count() != model.server_count() || init.agent_count() != model.agent_count()) {
    report(ViolationKind::InitialCompleteness, "init", "initial configuration shape mismatch");
    return out;
  }
  for (std::size_t s = 0; s < model.server_count(); ++s) {
    ServerId id(s);
    ValueId v = init.state_of(id);
    if (!v.valid()) {
      report(ViolationKind::InitialCompleteness, model.name(id), "server has no initial state");
    } else if (!model.declares(State{id, v})) {
      report(ViolationKind::InitialUndeclared, to_string(model, State{id, v}), "initial state not declared");
    }
  }
  for (std::size_t a = 0; a < model.agent_count(); ++a) {
    AgentId id(a);
    auto m = init.pending(id);
    if (!m) {
      report(ViolationKind::InitialCompleteness, model.name(id), "agent has no initial message");
    } else if (!model.declares(*m)) {
      report(ViolationKind::InitialUndeclared, to_string(model, *m), "initial message not declared");
    }
  }
  return out;
}

}  // namespace rybu::imds
