#include "rybu/report/dot.hpp"

#include <map>
#include <set>
#include <sstream>

#include "rybu/imds/semantics.hpp"

namespace rybu::report {

namespace {

std::string node_label(const imds::SystemModel& model, const imds::Configuration& c) {
  std::string out;
  for (std::size_t s = 0; s < c.server_count(); ++s) {
    if (s) out += " ";
    out += model.name(imds::ServerId(s)) + "." + model.name(c.state_of(imds::ServerId(s)));
  }
  for (std::size_t a = 0; a < c.agent_count(); ++a) {
    const imds::AgentId id(a);
    out += "\n";
    if (auto m = c.pending(id))
      out += imds::to_string(model, *m);
    else
      out += model.name(id) + (c.terminated(id) ? " terminated" : " idle");
  }
  return out;
}

std::string edge_label(const imds::SystemModel& model, imds::ActionId id) {
  const imds::Action& a = model.action(id);
  return model.name(a.agent()) + ":" + model.name(a.input.server) + "." + model.name(a.input.service);
}

void write_node(std::ostream& os, const lts::Lts& lts, lts::NodeId n) {
  const imds::Configuration& c = lts.node(n);
  os << "  n" << n << " [label=" << dot_quote(node_label(lts.model(), c));
  if (lts.expanded(n) && lts.out_edges(n).empty()) {
    if (c.all_terminated())
      os << ", shape=doublecircle";
    else
      os << ", shape=octagon, color=red, style=bold";
  }
  if (n == lts::Lts::kInitial) os << ", penwidth=2";
  os << "];\n";
}

}  // namespace

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

std::string render_dot(const lts::Lts& lts, const DotOptions& options) {
  if (lts.node_count() > options.max_nodes)
    throw GraphTooLargeError("the LTS has " + std::to_string(lts.node_count()) + " nodes, more than the cap of " +
                             std::to_string(options.max_nodes) +
                             "; raise the cap or render a server/agent projection instead");
  std::ostringstream os;
  os << "digraph " << dot_quote(options.graph_name) << " {\n  node [shape=box, fontsize=10];\n";
  for (lts::NodeId n = 0; n < lts.node_count(); ++n) write_node(os, lts, n);
  for (const lts::Edge& e : lts.edges())
    os << "  n" << e.source << " -> n" << e.target << " [label=" << dot_quote(edge_label(lts.model(), e.action))
       << "];\n";
  os << "}\n";
  return os.str();
}

std::string render_dot(const lts::Lts& lts, const lts::Witness& path, const DotOptions& options) {
  std::ostringstream os;
  os << "digraph " << dot_quote(options.graph_name) << " {\n  node [shape=box, fontsize=10];\n";
  std::set<lts::NodeId> written;
  for (lts::NodeId n : path.nodes)
    if (written.insert(n).second) write_node(os, lts, n);
  for (std::size_t k = 0; k < path.actions.size(); ++k)
    os << "  n" << path.nodes[k] << " -> n" << path.nodes[k + 1]
       << " [label=" << dot_quote(std::to_string(k + 1) + ". " + edge_label(lts.model(), path.actions[k])) << "];\n";
  os << "}\n";
  return os.str();
}

std::string render_server_projection(const imds::SystemModel& model, imds::ServerId server) {
  std::ostringstream os;
  const std::string& name = model.name(server);
  os << "digraph " << dot_quote(name) << " {\n  node [shape=ellipse];\n";
  const imds::ValueId initial = model.initial().state_of(server);
  for (const imds::State& p : model.declared_states()) {
    if (p.server != server) continue;
    os << "  " << dot_quote(model.name(p.value));
    if (p.value == initial) os << " [penwidth=2]";
    os << ";\n";
  }
  const auto view = imds::server_view(model);
  for (imds::ActionId id : view.at(server)) {
    const imds::Action& a = model.action(id);
    os << "  " << dot_quote(model.name(a.in_state.value)) << " -> " << dot_quote(model.name(a.out_state.value))
       << " [label=" << dot_quote(model.name(a.agent()) + "." + model.name(a.input.service)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string render_agent_projection(const imds::SystemModel& model, imds::AgentId agent) {
  std::ostringstream os;
  const std::string& name = model.name(agent);
  os << "digraph " << dot_quote(name) << " {\n  node [shape=box];\n";
  auto message_node = [&](const imds::Message& m) { return model.name(m.server) + "." + model.name(m.service); };
  std::set<std::string> nodes;
  std::string initial;
  if (auto m = model.initial().pending(agent)) initial = message_node(*m);
  for (const imds::Message& m : model.declared_messages())
    if (m.agent == agent) nodes.insert(message_node(m));
  const auto view = imds::agent_view(model);
  bool terminates = false;
  for (imds::ActionId id : view.at(agent)) terminates = terminates || model.action(id).terminates();
  for (const std::string& n : nodes)
    os << "  " << dot_quote(n) << (n == initial ? " [penwidth=2]" : "") << ";\n";
  if (terminates) os << "  \"(terminated)\" [shape=doublecircle];\n";
  for (imds::ActionId id : view.at(agent)) {
    const imds::Action& a = model.action(id);
    const std::string target = a.output ? message_node(*a.output) : "(terminated)";
    os << "  " << dot_quote(message_node(a.input)) << " -> " << dot_quote(target)
       << " [label=" << dot_quote(model.name(a.server()) + ": " + model.name(a.in_state.value) + "->" +
                                  model.name(a.out_state.value))
       << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace rybu::report
