#include "rybu/service/session.hpp"

#include "rybu/imds/semantics.hpp"

namespace rybu::service {

Session::Session(std::shared_ptr<const imds::SystemModel> model) : model_(std::move(model)) { reset(); }

std::vector<imds::ActionId> Session::path() const {
  std::vector<imds::ActionId> out;
  for (const auto& [config, action] : history_) out.push_back(action);
  return out;
}

void Session::step(imds::ActionId action) {
  lts::StepResult r = lts::simulate_step(*model_, current_, action);
  history_.emplace_back(current_, action);
  current_ = std::move(r.config);
  enabled_ = std::move(r.enabled);
}

bool Session::undo() {
  if (history_.empty()) return false;
  current_ = history_.back().first;
  history_.pop_back();
  enabled_ = imds::enabled_actions(*model_, current_);
  return true;
}

void Session::reset() {
  current_ = model_->initial();
  history_.clear();
  enabled_ = imds::enabled_actions(*model_, current_);
}

std::string SessionStore::create(std::shared_ptr<const imds::SystemModel> model) {
  std::lock_guard lock(mutex_);
  std::string id = "s" + std::to_string(next_++);
  sessions_.emplace(id, std::make_shared<Entry>(std::move(model)));
  return id;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace rybu::service
