#pragma once

// JSON run configuration for the falsify command-line tool.

#include "falsify/extern_blackbox.hpp"
#include "falsify/optim.hpp"
#include "falsify/runner.hpp"

#include <json.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace falsify::cli {

/// Configuration problem; the message names the offending key.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class OutputFormat { Csv, Json };

struct BuiltinSystem {
  std::string name;
};

struct ExternSystem {
  ExternCommand command;
  BlackboxModel::Settings settings;
};

struct RunConfig {
  std::string requirement;
  PredicateMap predicates;
  std::variant<BuiltinSystem, ExternSystem> system;
  Options options;
  std::string optimizer = "uniform-random";
  nlohmann::json optimizer_options = nlohmann::json::object();
  std::optional<std::filesystem::path> output_path;
  OutputFormat format = OutputFormat::Csv;
};

/// Builds a RunConfig. Builtin systems supply defaults for every key the
/// document omits; unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);
/// Also resolves a relative extern command containing a slash against the
/// directory of `path`.
RunConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError for an unknown name or invalid engine options.
std::unique_ptr<Optimizer> make_optimizer(const std::string& name, const nlohmann::json& options);

std::shared_ptr<Model> make_model(const RunConfig& config);

std::vector<std::string> optimizer_names();
OutputFormat parse_format(const std::string& text);

}  // namespace falsify::cli
