#pragma once

#include <optional>
#include <vector>

#include "rybu/lts/lts.hpp"

namespace rybu::lts {

/// A node bijection and an agent bijection under which the two graphs have
/// the same initial node and the same edges, each edge labeled by its agent.
struct Isomorphism {
  std::vector<NodeId> node_map;             // left node -> right node
  std::vector<imds::AgentId> agent_map;     // left agent -> right agent
};

/// Rooted isomorphism of two complete LTSs with agent-labeled edges.
/// Configurations themselves are not compared, so a lowered model can be
/// checked against a hand-written one with different state names.
/// Agent permutations are searched exhaustively (at most 8 agents).
std::optional<Isomorphism> find_isomorphism(const Lts& left, const Lts& right);

}  // namespace rybu::lts
