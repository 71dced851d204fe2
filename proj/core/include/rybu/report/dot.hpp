#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "rybu/imds/model.hpp"
#include "rybu/lts/deadlock.hpp"
#include "rybu/lts/lts.hpp"

namespace rybu::report {

class GraphTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DotOptions {
  /// Refuse to render a whole LTS with more nodes than this.
  std::size_t max_nodes = 2000;
  std::string graph_name = "lts";
};

/// Whole LTS: nodes labeled with their configuration, edges
/// `agent:server.service`, total deadlocks drawn red and octagonal.
std::string render_dot(const lts::Lts& lts, const DotOptions& options = {});

/// Only the nodes and edges of a witness path.
std::string render_dot(const lts::Lts& lts, const lts::Witness& path, const DotOptions& options = {});

/// Automaton of one server: its values as states, its actions (server view)
/// as edges labeled `agent.service`.
std::string render_server_projection(const imds::SystemModel& model, imds::ServerId server);

/// Automaton of one agent: the messages it carries as states, its actions
/// (agent view) as edges labeled `server: old->new`.
std::string render_agent_projection(const imds::SystemModel& model, imds::AgentId agent);

/// `"..."` with quotes and backslashes escaped.
std::string dot_quote(const std::string& s);

}  // namespace rybu::report
