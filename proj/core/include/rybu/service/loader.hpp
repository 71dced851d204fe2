#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rybu/imds/model.hpp"
#include "rybu/lang/typecheck.hpp"
#include "rybu/lower/lower.hpp"

namespace rybu::service {

enum class Language { Rybu, Dedan };

std::optional<Language> language_from_extension(const std::filesystem::path& path);
std::optional<Language> language_from_name(std::string_view name);

/// Anything that stops a source from becoming a model: unreadable file,
/// syntax, typecheck, lowering or Dedan errors. The message is ready to print.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedModel {
  Language language = Language::Rybu;
  std::string name;
  std::shared_ptr<const imds::SystemModel> model;
  std::vector<lang::Diagnostic> warnings;
};

LoadedModel load_source(std::string_view text, Language language, std::string name,
                        const lower::LowerOptions& options = {});

/// Reads and loads a file; the language comes from `language` or else the
/// extension. The model is named after the file stem.
LoadedModel load_file(const std::filesystem::path& path, std::optional<Language> language = std::nullopt,
                      const lower::LowerOptions& options = {});

/// Rybu source to Dedan text.
std::string compile_to_dedan(std::string_view source, std::string system_name, const lower::LowerOptions& options,
                             std::vector<lang::Diagnostic>* warnings = nullptr);

std::string read_file(const std::filesystem::path& path);

}  // namespace rybu::service
