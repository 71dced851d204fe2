#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rybu/dedan/ast.hpp"
#include "rybu/service/loader.hpp"

namespace fixtures {

std::string model_path(const std::string& file);
std::string read_model(const std::string& file);
rybu::service::LoadedModel load(const std::string& file, bool bootstrap = false);

/// Every file in the models directory with the given extension, sorted.
std::vector<std::string> model_files(const std::string& extension);

/// Small Rybu sources exercised across the suites, besides the model files.
const std::vector<std::string>& rybu_snippets();

struct NamedModel {
  std::string name;
  std::shared_ptr<const rybu::imds::SystemModel> model;
};

/// Small models checked against the oracle: every model file except the
/// large warehouse (Rybu files with and without bootstrap), the snippets
/// and a few random units.
std::vector<NamedModel> oracle_suite();

/// A random unit that passes check_unit: vector and scalar formals,
/// repeaters, constant and variable indices, terminating actions.
rybu::dedan::DedanUnit random_unit(std::mt19937& rng);

}  // namespace fixtures
