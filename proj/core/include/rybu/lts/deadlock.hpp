#pragma once

#include <chrono>
#include <stdexcept>
#include <vector>

#include "rybu/lts/lts.hpp"

namespace rybu::lts {

/// Deadlock analyses need the full reachable graph.
class IncompleteLtsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nodes without outgoing edges where some agent has not terminated.
std::vector<NodeId> find_total_deadlocks(const Lts& lts);

struct PartialDeadlock {
  imds::AgentId agent;
  NodeId node;
  friend bool operator==(const PartialDeadlock&, const PartialDeadlock&) = default;
};

/// Per agent, the nodes where its message pends and no edge of that agent
/// is reachable any more. Closed under successors.
class StuckSets {
 public:
  explicit StuckSets(const Lts& lts);
  bool stuck(imds::AgentId agent, NodeId node) const { return stuck_[agent.index][node]; }
  /// All stuck (agent, node) pairs, agent-major, nodes ascending.
  std::vector<PartialDeadlock> all() const;

 private:
  std::vector<std::vector<bool>> stuck_;
};

/// Stuck pairs reduced to the nodes where an agent becomes stuck: the
/// initial node, or a node with a predecessor where the agent was not yet
/// stuck. Sorted by agent, then node.
std::vector<PartialDeadlock> find_partial_deadlocks(const Lts& lts);

/// Alternating nodes and actions from the initial node; nodes.size() ==
/// actions.size() + 1.
struct Witness {
  std::vector<NodeId> nodes;
  std::vector<imds::ActionId> actions;
};

/// Shortest path from the initial node along BFS parent links.
Witness extract_counterexample(const Lts& lts, NodeId node);

enum class Verdict { DeadlockFree, Deadlock, Inconclusive };

std::string to_string(Verdict v);

struct DeadlockReport {
  struct Total {
    NodeId node;
    Witness witness;
  };
  struct Partial {
    imds::AgentId agent;
    NodeId node;
    Witness witness;
  };
  struct Statistics {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::chrono::microseconds elapsed{0};
  };

  Verdict verdict = Verdict::Inconclusive;
  LtsStatus status = LtsStatus::Complete;
  std::vector<Total> total_deadlocks;
  std::vector<Partial> partial_deadlocks;
  Statistics statistics;
};

/// Runs both analyses on a complete LTS. On an incomplete one, only
/// deadlocks at fully expanded nodes are reported (they are real); without
/// any the verdict is Inconclusive and partial deadlocks are not computed.
DeadlockReport analyze(const Lts& lts);

/// build_lts + analyze, timing both.
DeadlockReport verify(const imds::SystemModel& model, const ExplorationLimits& limits = {});

}  // namespace rybu::lts
