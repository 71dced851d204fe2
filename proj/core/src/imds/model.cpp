#include "rybu/imds/model.hpp"

#include <algorithm>
#include <sstream>

namespace rybu::imds {

Configuration::Configuration(std::size_t servers, std::size_t agents)
    : states_(servers), agents_(agents) {}

std::optional<Message> Configuration::pending(AgentId a) const {
  const AgentSlot& slot = agents_.at(a.index);
  if (slot.status != AgentStatus::Pending) return std::nullopt;
  return Message{a, slot.server, slot.service};
}

void Configuration::set_pending(const Message& m) {
  AgentSlot& slot = agents_.at(m.agent.index);
  slot.status = AgentStatus::Pending;
  slot.server = m.server;
  slot.service = m.service;
}

void Configuration::terminate(AgentId a) {
  AgentSlot& slot = agents_.at(a.index);
  slot = AgentSlot{};
  slot.status = AgentStatus::Terminated;
}

std::vector<AgentId> Configuration::pending_agents() const {
  std::vector<AgentId> out;
  for (std::size_t i = 0; i < agents_.size(); ++i)
    if (agents_[i].status == AgentStatus::Pending) out.emplace_back(i);
  return out;
}

bool Configuration::all_terminated() const {
  return std::all_of(agents_.begin(), agents_.end(),
                     [](const AgentSlot& s) { return s.status == AgentStatus::Terminated; });
}

std::size_t Configuration::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  };
  for (ValueId v : states_) mix(v.index);
  for (const AgentSlot& s : agents_) {
    mix(static_cast<std::uint64_t>(s.status));
    mix((static_cast<std::uint64_t>(s.server.index) << 32) | s.service.index);
  }
  return static_cast<std::size_t>(h);
}

namespace {

template <class IdT>
std::optional<IdT> lookup(const std::unordered_map<std::string, std::uint32_t>& index,
                          std::string_view name) {
  auto it = index.find(std::string(name));
  if (it == index.end()) return std::nullopt;
  return IdT(it->second);
}

std::uint32_t intern(std::vector<std::string>& names,
                     std::unordered_map<std::string, std::uint32_t>& index,
                     std::string_view name) {
  auto [it, inserted] = index.try_emplace(std::string(name), static_cast<std::uint32_t>(names.size()));
  if (inserted) names.emplace_back(name);
  return it->second;
}

}  // namespace

std::optional<ServerId> SystemModel::find_server(std::string_view name) const {
  return lookup<ServerId>(server_index_, name);
}
std::optional<AgentId> SystemModel::find_agent(std::string_view name) const {
  return lookup<AgentId>(agent_index_, name);
}
std::optional<ValueId> SystemModel::find_value(std::string_view name) const {
  return lookup<ValueId>(value_index_, name);
}
std::optional<ServiceId> SystemModel::find_service(std::string_view name) const {
  return lookup<ServiceId>(service_index_, name);
}

bool SystemModel::declares(const State& p) const {
  return std::binary_search(states_.begin(), states_.end(), p);
}

bool SystemModel::declares(const Message& m) const {
  return std::binary_search(messages_.begin(), messages_.end(), m);
}

std::span<const ActionId> SystemModel::actions_consuming(const Message& m) const {
  auto it = by_input_.find(m);
  if (it == by_input_.end()) return {};
  return it->second;
}

ServerId ModelBuilder::add_server(std::string name) {
  if (model_.server_index_.count(name)) throw StructuralError("duplicate server '" + name + "'");
  return ServerId(intern(model_.servers_, model_.server_index_, name));
}

AgentId ModelBuilder::add_agent(std::string name) {
  if (model_.agent_index_.count(name)) throw StructuralError("duplicate agent '" + name + "'");
  return AgentId(intern(model_.agents_, model_.agent_index_, name));
}

ValueId ModelBuilder::value(std::string_view name) {
  return ValueId(intern(model_.values_, model_.value_index_, name));
}

ServiceId ModelBuilder::service(std::string_view name) {
  return ServiceId(intern(model_.services_, model_.service_index_, name));
}

std::optional<ServerId> ModelBuilder::find_server(std::string_view name) const {
  return lookup<ServerId>(model_.server_index_, name);
}

std::optional<AgentId> ModelBuilder::find_agent(std::string_view name) const {
  return lookup<AgentId>(model_.agent_index_, name);
}

void ModelBuilder::declare_state(State p) { model_.states_.push_back(p); }

void ModelBuilder::declare_message(Message m) { model_.messages_.push_back(m); }

ActionId ModelBuilder::add_action(const Action& action) {
  declare_state(action.in_state);
  declare_state(action.out_state);
  declare_message(action.input);
  if (action.output) declare_message(*action.output);
  return add_action_raw(action);
}

ActionId ModelBuilder::add_action_raw(const Action& action) {
  model_.actions_.push_back(action);
  return ActionId(model_.actions_.size() - 1);
}

void ModelBuilder::set_initial_state(ServerId s, ValueId v) {
  if (initial_states_.size() <= s.index) initial_states_.resize(s.index + 1);
  initial_states_[s.index] = v;
}

void ModelBuilder::set_initial_message(const Message& m) {
  if (initial_messages_.size() <= m.agent.index) initial_messages_.resize(m.agent.index + 1);
  initial_messages_[m.agent.index] = m;
}

SystemModel ModelBuilder::build() && {
  SystemModel& m = model_;
  std::sort(m.states_.begin(), m.states_.end());
  m.states_.erase(std::unique(m.states_.begin(), m.states_.end()), m.states_.end());
  std::sort(m.messages_.begin(), m.messages_.end());
  m.messages_.erase(std::unique(m.messages_.begin(), m.messages_.end()), m.messages_.end());

  m.by_input_.clear();
  for (std::size_t i = 0; i < m.actions_.size(); ++i)
    m.by_input_[m.actions_[i].input].emplace_back(i);

  m.initial_ = Configuration(m.servers_.size(), m.agents_.size());
  for (std::size_t s = 0; s < initial_states_.size() && s < m.servers_.size(); ++s)
    if (initial_states_[s]) m.initial_.set_state(ServerId(s), *initial_states_[s]);
  for (std::size_t a = 0; a < initial_messages_.size() && a < m.agents_.size(); ++a)
    if (initial_messages_[a]) m.initial_.set_pending(*initial_messages_[a]);
  return std::move(model_);
}

std::string to_string(const SystemModel& model, const Message& m) {
  return model.name(m.agent) + "." + model.name(m.server) + "." + model.name(m.service);
}

std::string to_string(const SystemModel& model, const State& p) {
  return model.name(p.server) + "." + model.name(p.value);
}

std::string to_string(const SystemModel& model, const Action& a) {
  std::string out = "{" + to_string(model, a.input) + ", " + to_string(model, a.in_state) + "} -> {";
  if (a.output) out += to_string(model, *a.output) + ", ";
  out += to_string(model, a.out_state) + "}";
  return out;
}

std::string to_string(const SystemModel& model, const Configuration& c) {
  std::ostringstream os;
  os << "{";
  for (std::size_t s = 0; s < c.server_count(); ++s) {
    if (s) os << ", ";
    ValueId v = c.state_of(ServerId(s));
    os << model.name(ServerId(s)) << "." << (v.valid() ? model.name(v) : std::string("?"));
  }
  for (std::size_t a = 0; a < c.agent_count(); ++a) {
    AgentId id(a);
    if (auto m = c.pending(id)) {
      os << ", " << to_string(model, *m);
    } else if (c.terminated(id)) {
      os << ", " << model.name(id) << ".<terminated>";
    }
  }
  os << "}";
  return os.str();
}

}  // namespace rybu::imds
