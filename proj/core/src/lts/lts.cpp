#include "rybu/lts/lts.hpp"

#include <algorithm>
#include <limits>

namespace rybu::lts {

namespace {
constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();
}

std::string to_string(LtsStatus status) {
  switch (status) {
    case LtsStatus::Complete: return "complete";
    case LtsStatus::NodeLimitExceeded: return "node-limit-exceeded";
    case LtsStatus::DepthLimited: return "depth-limited";
  }
  return "?";
}

std::optional<NodeId> Lts::find(const imds::Configuration& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const Edge> Lts::out_edges(NodeId n) const {
  if (n + 1 >= first_edge_.size()) return {};
  return std::span<const Edge>(edges_).subspan(first_edge_[n], first_edge_[n + 1] - first_edge_[n]);
}

std::optional<Edge> Lts::parent(NodeId n) const {
  if (parent_edge_.at(n) == kNoParent) return std::nullopt;
  return edges_[parent_edge_[n]];
}

Lts build_lts(const imds::SystemModel& model, const ExplorationLimits& limits) {
  if (limits.max_nodes < 1) throw std::invalid_argument("max_nodes must be at least 1");
  const auto violations = imds::validate_model(model);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw imds::StructuralError("invalid model: " + imds::to_string(v.kind) + " at " + v.element +
                                (v.detail.empty() ? "" : " (" + v.detail + ")"));
  }

  Lts lts;
  lts.model_ = &model;
  auto add_node = [&](const imds::Configuration& c, std::uint32_t parent, std::size_t depth) {
    const auto id = static_cast<NodeId>(lts.nodes_.size());
    lts.nodes_.push_back(c);
    lts.index_.emplace(c, id);
    lts.expanded_.push_back(false);
    lts.parent_edge_.push_back(parent);
    lts.depth_.push_back(depth);
    return id;
  };
  add_node(model.initial(), kNoParent, 0);

  // Nodes are appended in discovery order, so the BFS queue is just a cursor.
  for (NodeId n = 0; n < lts.nodes_.size(); ++n) {
    lts.first_edge_.push_back(lts.edges_.size());
    if (lts.status_ == LtsStatus::NodeLimitExceeded) continue;
    if (limits.max_depth && lts.depth_[n] >= *limits.max_depth) {
      if (!imds::enabled_actions(model, lts.nodes_[n]).empty()) lts.status_ = LtsStatus::DepthLimited;
      continue;
    }
    lts.expanded_[n] = true;
    const imds::Configuration current = lts.nodes_[n];
    std::vector<Edge> out;
    for (imds::ActionId a : imds::enabled_actions(model, current)) {
      imds::Configuration next = imds::apply_action(current, model.action(a));
      NodeId target;
      if (auto it = lts.index_.find(next); it != lts.index_.end()) {
        target = it->second;
      } else if (lts.nodes_.size() >= limits.max_nodes) {
        lts.status_ = LtsStatus::NodeLimitExceeded;
        lts.expanded_[n] = false;
        break;
      } else {
        target = add_node(next, static_cast<std::uint32_t>(lts.edges_.size() + out.size()), lts.depth_[n] + 1);
      }
      out.push_back(Edge{n, a, target});
    }
    if (!lts.expanded_[n]) {
      // Drop the partial expansion and any node it discovered.
      while (lts.nodes_.size() > n + 1 && lts.parent_edge_.back() >= lts.edges_.size()) {
        lts.index_.erase(lts.nodes_.back());
        lts.nodes_.pop_back();
        lts.expanded_.pop_back();
        lts.parent_edge_.pop_back();
        lts.depth_.pop_back();
      }
      continue;
    }
    lts.edges_.insert(lts.edges_.end(), out.begin(), out.end());
  }
  lts.first_edge_.push_back(lts.edges_.size());
  return lts;
}

StepResult simulate_step(const imds::SystemModel& model, const imds::Configuration& config,
                         imds::ActionId chosen) {
  std::vector<imds::ActionId> enabled = imds::enabled_actions(model, config);
  if (!chosen.valid() || chosen.index >= model.action_count() ||
      std::find(enabled.begin(), enabled.end(), chosen) == enabled.end()) {
    const std::string what = chosen.valid() && chosen.index < model.action_count()
                                 ? imds::to_string(model, model.action(chosen))
                                 : "#" + std::to_string(chosen.index);
    throw StepRejected("action " + what + " is not enabled", std::move(enabled));
  }
  StepResult out;
  out.config = imds::apply_action(config, model.action(chosen));
  out.enabled = imds::enabled_actions(model, out.config);
  return out;
}

}  // namespace rybu::lts
