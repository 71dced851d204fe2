#include "rybu/service/json_codec.hpp"

#include "rybu/imds/semantics.hpp"

namespace rybu::service {

using nlohmann::json;

json action_json(const imds::SystemModel& model, imds::ActionId id) {
  const imds::Action& a = model.action(id);
  json out = {
      {"id", id.index},
      {"agent", model.name(a.agent())},
      {"server", model.name(a.server())},
      {"service", model.name(a.input.service)},
      {"from", model.name(a.in_state.value)},
      {"to", model.name(a.out_state.value)},
      {"terminates", a.terminates()},
      {"text", imds::to_string(model, a)},
  };
  out["emits"] = a.output ? json{{"server", model.name(a.output->server)}, {"service", model.name(a.output->service)}}
                          : json(nullptr);
  return out;
}

json configuration_json(const imds::SystemModel& model, const imds::Configuration& c) {
  json servers = json::array();
  for (std::size_t s = 0; s < c.server_count(); ++s)
    servers.push_back({{"name", model.name(imds::ServerId(s))}, {"state", model.name(c.state_of(imds::ServerId(s)))}});
  json agents = json::array();
  for (std::size_t i = 0; i < c.agent_count(); ++i) {
    const imds::AgentId a(i);
    json entry = {{"name", model.name(a)}};
    switch (c.status(a)) {
      case imds::Configuration::AgentStatus::Pending: {
        const imds::Message m = *c.pending(a);
        entry["status"] = "pending";
        entry["message"] = {{"server", model.name(m.server)}, {"service", model.name(m.service)}};
        break;
      }
      case imds::Configuration::AgentStatus::Terminated:
        entry["status"] = "terminated";
        entry["message"] = nullptr;
        break;
      case imds::Configuration::AgentStatus::Idle:
        entry["status"] = "idle";
        entry["message"] = nullptr;
        break;
    }
    agents.push_back(std::move(entry));
  }
  return {{"servers", std::move(servers)}, {"agents", std::move(agents)}};
}

json model_json(const imds::SystemModel& model, const std::string& name) {
  json servers = json::array();
  for (std::size_t s = 0; s < model.server_count(); ++s) {
    const imds::ServerId id(s);
    json states = json::array();
    json services = json::array();
    for (const imds::State& p : model.declared_states())
      if (p.server == id) states.push_back(model.name(p.value));
    std::vector<std::string> seen;
    for (const imds::Message& m : model.declared_messages()) {
      if (m.server != id) continue;
      const std::string& svc = model.name(m.service);
      if (std::find(seen.begin(), seen.end(), svc) == seen.end()) seen.push_back(svc);
    }
    for (const std::string& svc : seen) services.push_back(svc);
    servers.push_back({{"name", model.name(id)},
                       {"states", std::move(states)},
                       {"services", std::move(services)},
                       {"initial", model.name(model.initial().state_of(id))}});
  }
  json agents = json::array();
  for (std::size_t a = 0; a < model.agent_count(); ++a) agents.push_back({{"name", model.name(imds::AgentId(a))}});
  json actions = json::array();
  for (std::size_t i = 0; i < model.action_count(); ++i) actions.push_back(action_json(model, imds::ActionId(i)));
  return {{"v", kSchemaVersion}, {"name", name},         {"servers", std::move(servers)},
          {"agents", std::move(agents)}, {"actions", std::move(actions)}};
}

json session_json(const std::string& id, const Session& session) {
  const imds::SystemModel& model = session.model();
  json enabled = json::array();
  for (imds::ActionId a : session.enabled()) enabled.push_back(action_json(model, a));
  json history = json::array();
  for (imds::ActionId a : session.path()) history.push_back(a.index);
  const imds::Configuration& c = session.current();
  const bool deadlock = session.enabled().empty() && !c.all_terminated();
  json blocked = json::array();
  if (deadlock)
    for (imds::AgentId a : c.pending_agents()) blocked.push_back(model.name(a));
  return {{"v", kSchemaVersion},
          {"session", id},
          {"configuration", configuration_json(model, c)},
          {"enabled", std::move(enabled)},
          {"history", std::move(history)},
          {"deadlock", deadlock},
          {"terminated", c.all_terminated()},
          {"blocked", std::move(blocked)}};
}

namespace {

json witness_json(const imds::SystemModel& model, const lts::Witness& w) {
  json steps = json::array();
  for (imds::ActionId a : w.actions) steps.push_back(action_json(model, a));
  return steps;
}

}  // namespace

json report_json(const imds::SystemModel& model, const lts::Lts& lts, const lts::DeadlockReport& report) {
  json total = json::array();
  for (const auto& t : report.total_deadlocks) {
    total.push_back({{"node", t.node},
                     {"configuration", configuration_json(model, lts.node(t.node))},
                     {"witness", witness_json(model, t.witness)}});
  }
  json partial = json::array();
  for (const auto& p : report.partial_deadlocks) {
    partial.push_back({{"agent", model.name(p.agent)},
                       {"node", p.node},
                       {"configuration", configuration_json(model, lts.node(p.node))},
                       {"witness", witness_json(model, p.witness)}});
  }
  return {{"v", kSchemaVersion},
          {"verdict", lts::to_string(report.verdict)},
          {"status", lts::to_string(report.status)},
          {"statistics",
           {{"nodes", report.statistics.nodes},
            {"edges", report.statistics.edges},
            {"elapsed_us", report.statistics.elapsed.count()}}},
          {"total_deadlocks", std::move(total)},
          {"partial_deadlocks", std::move(partial)}};
}

json graph_json(const lts::Lts& lts) {
  const imds::SystemModel& model = lts.model();
  json nodes = json::array();
  for (lts::NodeId n = 0; n < lts.node_count(); ++n) {
    const bool deadlock = lts.expanded(n) && lts.out_edges(n).empty() && !lts.node(n).all_terminated();
    nodes.push_back({{"id", n}, {"configuration", configuration_json(model, lts.node(n))}, {"deadlock", deadlock}});
  }
  json edges = json::array();
  for (const lts::Edge& e : lts.edges()) edges.push_back({{"source", e.source}, {"target", e.target}, {"action", e.action.index}});
  return {{"v", kSchemaVersion}, {"status", lts::to_string(lts.status())}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

json error_json(const std::string& message) { return {{"v", kSchemaVersion}, {"error", message}}; }

}  // namespace rybu::service
