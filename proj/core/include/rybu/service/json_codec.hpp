#pragma once

// JSON documents of the local API. Every top-level document carries "v": 1.

#include <json.hpp>

#include "rybu/imds/model.hpp"
#include "rybu/lts/deadlock.hpp"
#include "rybu/lts/lts.hpp"
#include "rybu/service/session.hpp"

namespace rybu::service {

inline constexpr int kSchemaVersion = 1;

nlohmann::json action_json(const imds::SystemModel& model, imds::ActionId id);
nlohmann::json configuration_json(const imds::SystemModel& model, const imds::Configuration& c);

nlohmann::json model_json(const imds::SystemModel& model, const std::string& name);
nlohmann::json session_json(const std::string& id, const Session& session);
nlohmann::json report_json(const imds::SystemModel& model, const lts::Lts& lts, const lts::DeadlockReport& report);
nlohmann::json graph_json(const lts::Lts& lts);
nlohmann::json error_json(const std::string& message);

}  // namespace rybu::service
