#pragma once

// Naive reference semantics for cross-checking the LTS engine. Works on
// names only: configurations are maps from server to value and agent to
// "server.service" (or "#" once terminated), actions are matched by string
// comparison, and the state space is explored by plain recursion.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "rybu/imds/model.hpp"
#include "rybu/lts/lts.hpp"

namespace oracle {

struct Config {
  std::map<std::string, std::string> servers;
  std::map<std::string, std::string> agents;
  friend auto operator<=>(const Config&, const Config&) = default;
};

struct Step {
  std::string agent;
  std::string server;
  std::string service;
  std::string from;
  std::string to;
  bool terminates = false;
  std::string next_server;
  std::string next_service;
};

struct Result {
  std::set<Config> nodes;
  std::set<std::tuple<Config, std::size_t, Config>> edges;  // by action index
  std::set<Config> total_deadlocks;
  std::set<std::pair<std::string, Config>> stuck;    // (agent, node)
  std::set<std::pair<std::string, Config>> entries;  // earliest stuck nodes
};

/// Explores everything reachable; for models of at most a few thousand
/// configurations.
Result explore(const rybu::imds::SystemModel& model);

/// The same configuration in the oracle's representation.
Config convert(const rybu::imds::SystemModel& model, const rybu::imds::Configuration& c);

}  // namespace oracle
