#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rybu/imds/model.hpp"

namespace rybu::imds {

/// Raised when an action is applied to a configuration that does not enable it.
class NotEnabledError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Actions whose input message is pending in `config` and whose input state
/// is the current state of its server. Sorted by id; possibly empty.
/// Throws StructuralError if `config` does not fit `model`.
std::vector<ActionId> enabled_actions(const SystemModel& model, const Configuration& config);

bool is_enabled(const Configuration& config, const Action& action);

/// Fires `action`: the input message and state are replaced by the output
/// state and, unless the action terminates the agent, the output message.
Configuration apply_action(const Configuration& config, const Action& action);

/// Server view B: actions grouped by the server whose state they consume.
/// Every server of the model has an entry, possibly empty.
std::map<ServerId, std::vector<ActionId>> server_view(const SystemModel& model);

/// Agent view C: actions grouped by the agent whose message they consume.
std::map<AgentId, std::vector<ActionId>> agent_view(const SystemModel& model);

enum class ViolationKind {
  ServerContinuity,   // out_state.server != in_state.server
  AgentContinuity,    // out_message.agent != in_message.agent
  MessageTarget,      // in_message.server != in_state.server
  UndeclaredState,
  UndeclaredMessage,
  InitialCompleteness,  // T0: a server without state or an agent without message
  InitialUndeclared,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string element;  // the offending action/state/message, rendered
  std::string detail;
};

/// Checks every well-formedness constraint. Empty iff the model is valid.
std::vector<Violation> validate_model(const SystemModel& model);

}  // namespace rybu::imds
