#include "rybu/report/trace.hpp"

#include <sstream>

#include "rybu/imds/semantics.hpp"

namespace rybu::report {

namespace {

std::string servers_line(const imds::SystemModel& model, const imds::Configuration& c) {
  std::string out;
  for (std::size_t s = 0; s < c.server_count(); ++s) {
    if (s) out += " ";
    out += imds::to_string(model, imds::State{imds::ServerId(s), c.state_of(imds::ServerId(s))});
  }
  return out.empty() ? "-" : out;
}

std::string pending_line(const imds::SystemModel& model, const imds::Configuration& c) {
  std::string out;
  for (imds::AgentId a : c.pending_agents()) {
    if (!out.empty()) out += " ";
    out += imds::to_string(model, *c.pending(a));
  }
  return out.empty() ? "-" : out;
}

std::string step_line(std::size_t k, const TraceEvent& e) {
  std::string out = "step " + std::to_string(k) + ": " + e.agent + " | " + e.agent + "." + e.server + "." +
                    e.service + " | " + e.server + ": " + e.old_value + " -> " + e.new_value + " | ";
  if (e.terminates) return out + "TERMINATES";
  return out + "emits " + e.agent + "." + e.to_server + "." + e.to_service;
}

TraceEvent event_of(const imds::SystemModel& model, const imds::Action& a) {
  TraceEvent e;
  e.agent = model.name(a.input.agent);
  e.server = model.name(a.input.server);
  e.service = model.name(a.input.service);
  e.old_value = model.name(a.in_state.value);
  e.new_value = model.name(a.out_state.value);
  e.terminates = a.terminates();
  if (a.output) {
    e.to_server = model.name(a.output->server);
    e.to_service = model.name(a.output->service);
  }
  return e;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

TraceDocument make_trace(const imds::SystemModel& model, const std::vector<imds::ActionId>& actions,
                         std::string title) {
  TraceDocument doc;
  doc.title = std::move(title);
  doc.initial = model.initial();
  doc.final = model.initial();
  for (imds::ActionId id : actions) {
    const imds::Action& a = model.action(id);
    doc.final = imds::apply_action(doc.final, a);
    doc.events.push_back(event_of(model, a));
  }
  return doc;
}

std::string render_trace(const imds::SystemModel& model, const TraceDocument& doc) {
  std::ostringstream os;
  os << "trace of " << doc.title << ": " << doc.events.size() << (doc.events.size() == 1 ? " step" : " steps")
     << "\n";
  os << "initial: " << servers_line(model, doc.initial) << " | " << pending_line(model, doc.initial) << "\n";
  for (std::size_t k = 0; k < doc.events.size(); ++k) os << step_line(k + 1, doc.events[k]) << "\n";

  const imds::Configuration& c = doc.final;
  os << "final servers: " << servers_line(model, c) << "\n";
  os << "pending: " << pending_line(model, c) << "\n";
  std::string terminated;
  for (std::size_t a = 0; a < c.agent_count(); ++a) {
    if (!c.terminated(imds::AgentId(a))) continue;
    if (!terminated.empty()) terminated += " ";
    terminated += model.name(imds::AgentId(a));
  }
  os << "terminated: " << (terminated.empty() ? "-" : terminated) << "\n";

  // Agents whose message nothing can consume right now, and their targets.
  std::vector<bool> can_move(c.agent_count(), false);
  for (imds::ActionId id : imds::enabled_actions(model, c)) can_move[model.action(id).agent().index] = true;
  std::string agents, servers;
  std::vector<bool> listed(c.server_count(), false);
  for (imds::AgentId a : c.pending_agents()) {
    if (can_move[a.index]) continue;
    agents += " " + model.name(a);
    const imds::ServerId s = c.pending(a)->server;
    if (!listed[s.index]) {
      listed[s.index] = true;
      servers += " " + model.name(s);
    }
  }
  os << "blocked: agents" << (agents.empty() ? " -" : agents) << "; servers" << (servers.empty() ? " -" : servers)
     << "\n";
  return os.str();
}

std::vector<imds::ActionId> parse_trace(const imds::SystemModel& model, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<imds::ActionId> out;
  imds::Configuration current = model.initial();
  std::size_t expected = 1;
  while (std::getline(in, line)) {
    if (line.rfind("step ", 0) != 0) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw TraceParseError("malformed step line: " + line);
    if (trim(line.substr(5, colon - 5)) != std::to_string(expected))
      throw TraceParseError("expected step " + std::to_string(expected) + ": " + line);
    const std::string body = trim(line.substr(colon + 1));

    imds::ActionId match;
    for (imds::ActionId id : imds::enabled_actions(model, current)) {
      if (step_line(expected, event_of(model, model.action(id))) == "step " + std::to_string(expected) + ": " + body) {
        match = id;
        break;
      }
    }
    if (!match.valid())
      throw TraceParseError("step " + std::to_string(expected) + " does not match any enabled action: " + body);
    current = imds::apply_action(current, model.action(match));
    out.push_back(match);
    ++expected;
  }
  return out;
}

imds::Configuration replay_trace(const imds::SystemModel& model, const std::string& text) {
  imds::Configuration c = model.initial();
  for (imds::ActionId id : parse_trace(model, text)) c = imds::apply_action(c, model.action(id));
  return c;
}

}  // namespace rybu::report
