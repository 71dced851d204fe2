#pragma once

// Integrated Model of Distributed Systems: servers hold states, agents carry
// messages, and behavior is a set of (message, state) -> (message?, state)
// actions executed one at a time.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rybu::imds {

template <class Tag>
struct Id {
  std::uint32_t index = std::numeric_limits<std::uint32_t>::max();

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t i) : index(i) {}
  constexpr explicit Id(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}
  constexpr bool valid() const { return index != std::numeric_limits<std::uint32_t>::max(); }
  friend constexpr auto operator<=>(Id, Id) = default;
};

struct ServerTag;
struct AgentTag;
struct ValueTag;
struct ServiceTag;
struct ActionTag;

using ServerId = Id<ServerTag>;
using AgentId = Id<AgentTag>;
using ValueId = Id<ValueTag>;
using ServiceId = Id<ServiceTag>;
using ActionId = Id<ActionTag>;

/// A server's state: the pair (server, value).
struct State {
  ServerId server;
  ValueId value;
  friend constexpr auto operator<=>(const State&, const State&) = default;
};

/// A message: agent `agent` invokes `service` on `server`.
struct Message {
  AgentId agent;
  ServerId server;
  ServiceId service;
  friend constexpr auto operator<=>(const Message&, const Message&) = default;
};

struct MessageHash {
  std::size_t operator()(const Message& m) const noexcept {
    std::uint64_t h = m.agent.index;
    h = h * 0x9E3779B97F4A7C15ULL + m.server.index;
    h = h * 0x9E3779B97F4A7C15ULL + m.service.index;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// An action consumes `input` together with `in_state` and produces
/// `out_state` plus, unless the agent terminates, `output`.
struct Action {
  Message input;
  State in_state;
  std::optional<Message> output;
  State out_state;

  bool terminates() const { return !output.has_value(); }
  AgentId agent() const { return input.agent; }
  ServerId server() const { return in_state.server; }
  friend bool operator==(const Action&, const Action&) = default;
};

/// Structural problem with a model or configuration (e.g. a server without
/// a state).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One state per server and, per agent, either a pending message, nothing,
/// or termination. Canonical by construction: slots are indexed by id.
class Configuration {
 public:
  enum class AgentStatus : std::uint8_t { Idle, Pending, Terminated };

  Configuration() = default;
  Configuration(std::size_t servers, std::size_t agents);

  std::size_t server_count() const { return states_.size(); }
  std::size_t agent_count() const { return agents_.size(); }

  ValueId state_of(ServerId s) const { return states_.at(s.index); }
  void set_state(ServerId s, ValueId v) { states_.at(s.index) = v; }

  AgentStatus status(AgentId a) const { return agents_.at(a.index).status; }
  std::optional<Message> pending(AgentId a) const;
  bool terminated(AgentId a) const { return status(a) == AgentStatus::Terminated; }
  void set_pending(const Message& m);
  void terminate(AgentId a);

  /// Agents that still carry a message.
  std::vector<AgentId> pending_agents() const;
  bool all_terminated() const;

  std::size_t hash() const noexcept;
  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  struct AgentSlot {
    AgentStatus status = AgentStatus::Idle;
    ServerId server;
    ServiceId service;
    friend bool operator==(const AgentSlot&, const AgentSlot&) = default;
  };

  std::vector<ValueId> states_;
  std::vector<AgentSlot> agents_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept { return c.hash(); }
};

class ModelBuilder;

/// The IMDS quadruple with declared states P, messages M, the action set and
/// the initial configuration. Immutable once built.
class SystemModel {
 public:
  SystemModel() = default;

  std::size_t server_count() const { return servers_.size(); }
  std::size_t agent_count() const { return agents_.size(); }
  std::size_t value_count() const { return values_.size(); }
  std::size_t service_count() const { return services_.size(); }
  std::size_t action_count() const { return actions_.size(); }

  const std::string& name(ServerId s) const { return servers_.at(s.index); }
  const std::string& name(AgentId a) const { return agents_.at(a.index); }
  const std::string& name(ValueId v) const { return values_.at(v.index); }
  const std::string& name(ServiceId r) const { return services_.at(r.index); }

  std::optional<ServerId> find_server(std::string_view name) const;
  std::optional<AgentId> find_agent(std::string_view name) const;
  std::optional<ValueId> find_value(std::string_view name) const;
  std::optional<ServiceId> find_service(std::string_view name) const;

  std::span<const State> declared_states() const { return states_; }
  std::span<const Message> declared_messages() const { return messages_; }
  bool declares(const State& p) const;
  bool declares(const Message& m) const;

  std::span<const Action> actions() const { return actions_; }
  const Action& action(ActionId id) const { return actions_.at(id.index); }

  const Configuration& initial() const { return initial_; }

  /// Actions whose input message is `m`, in id order.
  std::span<const ActionId> actions_consuming(const Message& m) const;

 private:
  friend class ModelBuilder;

  std::vector<std::string> servers_;
  std::vector<std::string> agents_;
  std::vector<std::string> values_;
  std::vector<std::string> services_;
  std::unordered_map<std::string, std::uint32_t> server_index_;
  std::unordered_map<std::string, std::uint32_t> agent_index_;
  std::unordered_map<std::string, std::uint32_t> value_index_;
  std::unordered_map<std::string, std::uint32_t> service_index_;
  std::vector<State> states_;      // sorted
  std::vector<Message> messages_;  // sorted
  std::vector<Action> actions_;
  std::unordered_map<Message, std::vector<ActionId>, MessageHash> by_input_;
  Configuration initial_;
};

/// Accumulates names, declarations and actions; `build()` freezes them.
/// Servers and agents are registered explicitly (duplicates are rejected);
/// values and services are interned.
class ModelBuilder {
 public:
  ServerId add_server(std::string name);
  AgentId add_agent(std::string name);
  ValueId value(std::string_view name);
  ServiceId service(std::string_view name);

  std::optional<ServerId> find_server(std::string_view name) const;
  std::optional<AgentId> find_agent(std::string_view name) const;

  void declare_state(State p);
  void declare_message(Message m);
  /// Adds the action and declares every state/message it mentions.
  ActionId add_action(const Action& action);
  /// Adds the action exactly as given, without declaring its parts.
  ActionId add_action_raw(const Action& action);

  void set_initial_state(ServerId s, ValueId v);
  void set_initial_message(const Message& m);

  SystemModel build() &&;

 private:
  SystemModel model_;
  std::vector<std::optional<ValueId>> initial_states_;
  std::vector<std::optional<Message>> initial_messages_;
};

// Name rendering in Dedan notation: `agent.server.service`, `server.value`.
std::string to_string(const SystemModel& model, const Message& m);
std::string to_string(const SystemModel& model, const State& p);
std::string to_string(const SystemModel& model, const Action& a);
std::string to_string(const SystemModel& model, const Configuration& c);

}  // namespace rybu::imds
