#include "rybu/lts/deadlock.hpp"

#include <algorithm>

namespace rybu::lts {

namespace {

void require_complete(const Lts& lts, const char* what) {
  if (!lts.complete())
    throw IncompleteLtsError(std::string(what) + " needs the complete state space (" + to_string(lts.status()) + ")");
}

bool total_deadlock_at(const Lts& lts, NodeId n) {
  return lts.expanded(n) && lts.out_edges(n).empty() && !lts.node(n).all_terminated();
}

}  // namespace

std::vector<NodeId> find_total_deadlocks(const Lts& lts) {
  require_complete(lts, "total deadlock detection");
  std::vector<NodeId> out;
  for (NodeId n = 0; n < lts.node_count(); ++n)
    if (total_deadlock_at(lts, n)) out.push_back(n);
  return out;
}

StuckSets::StuckSets(const Lts& lts) {
  require_complete(lts, "partial deadlock detection");
  const std::size_t nodes = lts.node_count();
  const imds::SystemModel& model = lts.model();

  std::vector<std::vector<NodeId>> preds(nodes);
  for (const Edge& e : lts.edges()) preds[e.target].push_back(e.source);

  stuck_.assign(model.agent_count(), std::vector<bool>(nodes, false));
  for (std::size_t a = 0; a < model.agent_count(); ++a) {
    const imds::AgentId agent(a);
    // Nodes from which some edge of the agent is still reachable.
    std::vector<bool> live(nodes, false);
    std::vector<NodeId> work;
    for (const Edge& e : lts.edges()) {
      if (model.action(e.action).agent() == agent && !live[e.source]) {
        live[e.source] = true;
        work.push_back(e.source);
      }
    }
    while (!work.empty()) {
      NodeId n = work.back();
      work.pop_back();
      for (NodeId p : preds[n]) {
        if (!live[p]) {
          live[p] = true;
          work.push_back(p);
        }
      }
    }
    for (NodeId n = 0; n < nodes; ++n)
      stuck_[a][n] = !live[n] && lts.node(n).status(agent) == imds::Configuration::AgentStatus::Pending;
  }
}

std::vector<PartialDeadlock> StuckSets::all() const {
  std::vector<PartialDeadlock> out;
  for (std::size_t a = 0; a < stuck_.size(); ++a)
    for (NodeId n = 0; n < stuck_[a].size(); ++n)
      if (stuck_[a][n]) out.push_back({imds::AgentId(a), n});
  return out;
}

std::vector<PartialDeadlock> find_partial_deadlocks(const Lts& lts) {
  const StuckSets stuck(lts);
  std::vector<std::vector<bool>> entry(lts.model().agent_count(), std::vector<bool>(lts.node_count(), false));
  for (std::size_t a = 0; a < entry.size(); ++a)
    entry[a][Lts::kInitial] = stuck.stuck(imds::AgentId(a), Lts::kInitial);
  for (const Edge& e : lts.edges()) {
    for (std::size_t a = 0; a < entry.size(); ++a) {
      const imds::AgentId agent(a);
      if (stuck.stuck(agent, e.target) && !stuck.stuck(agent, e.source)) entry[a][e.target] = true;
    }
  }
  std::vector<PartialDeadlock> out;
  for (std::size_t a = 0; a < entry.size(); ++a)
    for (NodeId n = 0; n < entry[a].size(); ++n)
      if (entry[a][n]) out.push_back({imds::AgentId(a), n});
  return out;
}

Witness extract_counterexample(const Lts& lts, NodeId node) {
  if (node >= lts.node_count()) throw std::out_of_range("node " + std::to_string(node) + " is not in the LTS");
  Witness w;
  NodeId n = node;
  w.nodes.push_back(n);
  while (auto e = lts.parent(n)) {
    w.actions.push_back(e->action);
    n = e->source;
    w.nodes.push_back(n);
  }
  if (n != Lts::kInitial) throw std::logic_error("parent chain does not reach the initial node");
  std::reverse(w.nodes.begin(), w.nodes.end());
  std::reverse(w.actions.begin(), w.actions.end());
  return w;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::DeadlockFree: return "deadlock-free";
    case Verdict::Deadlock: return "deadlock";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

DeadlockReport analyze(const Lts& lts) {
  DeadlockReport r;
  r.status = lts.status();
  r.statistics.nodes = lts.node_count();
  r.statistics.edges = lts.edge_count();
  for (NodeId n = 0; n < lts.node_count(); ++n)
    if (total_deadlock_at(lts, n)) r.total_deadlocks.push_back({n, extract_counterexample(lts, n)});
  if (lts.complete()) {
    for (const PartialDeadlock& p : find_partial_deadlocks(lts))
      r.partial_deadlocks.push_back({p.agent, p.node, extract_counterexample(lts, p.node)});
    r.verdict = r.total_deadlocks.empty() && r.partial_deadlocks.empty() ? Verdict::DeadlockFree : Verdict::Deadlock;
  } else {
    r.verdict = r.total_deadlocks.empty() ? Verdict::Inconclusive : Verdict::Deadlock;
  }
  return r;
}

DeadlockReport verify(const imds::SystemModel& model, const ExplorationLimits& limits) {
  const auto start = std::chrono::steady_clock::now();
  const Lts lts = build_lts(model, limits);
  DeadlockReport r = analyze(lts);
  r.statistics.elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
  return r;
}

}  // namespace rybu::lts
