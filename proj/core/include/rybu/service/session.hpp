#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rybu/imds/model.hpp"
#include "rybu/lts/lts.hpp"

namespace rybu::service {

/// A simulation: the current configuration and the steps that led to it.
/// Not synchronized; SessionStore serializes access.
class Session {
 public:
  explicit Session(std::shared_ptr<const imds::SystemModel> model);

  const imds::SystemModel& model() const { return *model_; }
  const imds::Configuration& current() const { return current_; }
  const std::vector<imds::ActionId>& enabled() const { return enabled_; }
  /// Configurations before each step, with the step taken.
  const std::vector<std::pair<imds::Configuration, imds::ActionId>>& history() const { return history_; }
  std::vector<imds::ActionId> path() const;

  /// Throws lts::StepRejected when `action` is not enabled.
  void step(imds::ActionId action);
  /// False when already at the initial configuration.
  bool undo();
  void reset();

 private:
  std::shared_ptr<const imds::SystemModel> model_;
  imds::Configuration current_;
  std::vector<imds::ActionId> enabled_;
  std::vector<std::pair<imds::Configuration, imds::ActionId>> history_;
};

/// Sessions by id, each behind its own lock.
class SessionStore {
 public:
  std::string create(std::shared_ptr<const imds::SystemModel> model);

  /// Runs `fn` on the session with its lock held; false if the id is unknown.
  template <class Fn>
  bool with(const std::string& id, Fn&& fn) {
    std::shared_ptr<Entry> entry;
    {
      std::lock_guard lock(mutex_);
      auto it = sessions_.find(id);
      if (it == sessions_.end()) return false;
      entry = it->second;
    }
    std::lock_guard lock(entry->mutex);
    fn(entry->session);
    return true;
  }

  std::size_t size() const;

 private:
  struct Entry {
    explicit Entry(std::shared_ptr<const imds::SystemModel> m) : session(std::move(m)) {}
    std::mutex mutex;
    Session session;
  };

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_ = 1;
};

}  // namespace rybu::service
