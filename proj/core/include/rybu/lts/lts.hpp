#pragma once

// Reachable labeled transition system of an IMDS model, built breadth-first
// so parent links give shortest paths.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rybu/imds/model.hpp"
#include "rybu/imds/semantics.hpp"

namespace rybu::lts {

using NodeId = std::uint32_t;

struct ExplorationLimits {
  std::size_t max_nodes = 1'000'000;
  std::optional<std::size_t> max_depth;
};

enum class LtsStatus { Complete, NodeLimitExceeded, DepthLimited };

std::string to_string(LtsStatus status);

struct Edge {
  NodeId source;
  imds::ActionId action;
  NodeId target;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable once built. Keeps a pointer to the model, which must outlive it.
class Lts {
 public:
  static constexpr NodeId kInitial = 0;

  const imds::SystemModel& model() const { return *model_; }
  LtsStatus status() const { return status_; }
  bool complete() const { return status_ == LtsStatus::Complete; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const imds::Configuration& node(NodeId n) const { return nodes_.at(n); }
  std::optional<NodeId> find(const imds::Configuration& c) const;

  std::span<const Edge> edges() const { return edges_; }
  /// Outgoing edges of `n`, in action id order.
  std::span<const Edge> out_edges(NodeId n) const;
  /// False for nodes left unexplored when a limit was hit.
  bool expanded(NodeId n) const { return expanded_.at(n); }

  /// Edge through which `n` was first discovered; none for the initial node.
  std::optional<Edge> parent(NodeId n) const;
  std::size_t depth(NodeId n) const { return depth_.at(n); }

 private:
  friend Lts build_lts(const imds::SystemModel& model, const ExplorationLimits& limits);

  const imds::SystemModel* model_ = nullptr;
  LtsStatus status_ = LtsStatus::Complete;
  std::vector<imds::Configuration> nodes_;
  std::unordered_map<imds::Configuration, NodeId, imds::ConfigurationHash> index_;
  std::vector<Edge> edges_;           // grouped by source, sources ascending
  std::vector<std::size_t> first_edge_;  // per node, into edges_; size nodes+1
  std::vector<bool> expanded_;
  std::vector<std::uint32_t> parent_edge_;
  std::vector<std::size_t> depth_;
};

/// Throws imds::StructuralError if the model fails validate_model.
Lts build_lts(const imds::SystemModel& model, const ExplorationLimits& limits = {});

/// Rejected step; carries the actions that are enabled instead.
class StepRejected : public imds::NotEnabledError {
 public:
  StepRejected(const std::string& message, std::vector<imds::ActionId> enabled)
      : imds::NotEnabledError(message), enabled_(std::move(enabled)) {}
  const std::vector<imds::ActionId>& enabled() const { return enabled_; }

 private:
  std::vector<imds::ActionId> enabled_;
};

struct StepResult {
  imds::Configuration config;
  std::vector<imds::ActionId> enabled;
};

/// Fires `chosen` and reports what is enabled afterwards. The one stepping
/// primitive behind the simulator and the HTTP sessions.
StepResult simulate_step(const imds::SystemModel& model, const imds::Configuration& config,
                         imds::ActionId chosen);

}  // namespace rybu::lts
