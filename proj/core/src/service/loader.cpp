#include "rybu/service/loader.hpp"

#include <fstream>
#include <sstream>

#include "rybu/dedan/text.hpp"
#include "rybu/lang/lexer.hpp"
#include "rybu/lang/parser.hpp"

namespace rybu::service {

namespace {

std::string format_diagnostics(const std::vector<lang::Diagnostic>& diags) {
  std::string out;
  for (const lang::Diagnostic& d : diags) {
    if (d.severity != lang::Diagnostic::Severity::Error) continue;
    if (!out.empty()) out += "\n";
    out += lang::to_string(d);
  }
  return out;
}

lower::LoweredProgram lower_source(std::string_view source, std::string system_name,
                                   const lower::LowerOptions& options) {
  try {
    if (lang::tokenize(source).empty()) throw LoadError("empty program");
    lang::RybuProgram program = lang::parse_program(source);
    return lower::lower_program(program, options, std::move(system_name));
  } catch (const lang::SyntaxError& e) {
    throw LoadError(e.what());
  } catch (const lower::LowerError& e) {
    throw LoadError(format_diagnostics(e.diagnostics()));
  }
}

}  // namespace

std::optional<Language> language_from_extension(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".rybu") return Language::Rybu;
  if (ext == ".dedan") return Language::Dedan;
  return std::nullopt;
}

std::optional<Language> language_from_name(std::string_view name) {
  if (name == "rybu") return Language::Rybu;
  if (name == "dedan") return Language::Dedan;
  return std::nullopt;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

LoadedModel load_source(std::string_view text, Language language, std::string name,
                        const lower::LowerOptions& options) {
  LoadedModel out;
  out.language = language;
  out.name = name;
  if (language == Language::Rybu) {
    lower::LoweredProgram lowered = lower_source(text, std::move(name), options);
    out.model = std::make_shared<const imds::SystemModel>(std::move(lowered.model));
    out.warnings = std::move(lowered.warnings);
    return out;
  }
  try {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) throw LoadError("empty program");
    dedan::DedanUnit unit = dedan::parse_dedan(text);
    if (!unit.system_name.empty()) out.name = unit.system_name;
    out.model = std::make_shared<const imds::SystemModel>(dedan::expand(unit));
  } catch (const dedan::DedanError& e) {
    throw LoadError(e.what());
  }
  return out;
}

LoadedModel load_file(const std::filesystem::path& path, std::optional<Language> language,
                      const lower::LowerOptions& options) {
  if (!language) language = language_from_extension(path);
  if (!language)
    throw LoadError("cannot tell the language of " + path.string() + "; use a .rybu or .dedan extension or --lang");
  return load_source(read_file(path), *language, path.stem().string(), options);
}

std::string compile_to_dedan(std::string_view source, std::string system_name, const lower::LowerOptions& options,
                             std::vector<lang::Diagnostic>* warnings) {
  lower::LoweredProgram lowered = lower_source(source, std::move(system_name), options);
  if (warnings) *warnings = lowered.warnings;
  return dedan::print_dedan(lowered.dedan);
}

}  // namespace rybu::service
