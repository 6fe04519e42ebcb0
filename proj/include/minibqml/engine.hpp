#pragma once

#include "minibqml/catalog.hpp"
#include "minibqml/sql/ast.hpp"
#include "minibqml/table.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace minibqml {

struct EngineConfig {
  std::uint64_t default_seed = 42; ///< used by models without a `seed` option
  /// When set, trained models are saved here as <name>.mbqml.json and
  /// unknown model names are looked up here.
  std::optional<std::filesystem::path> model_dir;
};

struct StatementResult {
  std::optional<Table> table;        ///< result rows, if the statement yields any
  std::vector<std::string> notices;  ///< informational lines
  std::vector<std::string> warnings; ///< e.g. ConvergenceWarning
};

/// Executes parsed statements against an in-memory catalog. Statements run
/// serially; the engine is not thread-safe.
class Engine {
public:
  explicit Engine(EngineConfig config = {});

  StatementResult execute(const sql::Statement &stmt);
  /// Parses and executes a single statement.
  StatementResult execute(std::string_view sql);

  Catalog &catalog() { return catalog_; }
  const Catalog &catalog() const { return catalog_; }
  const EngineConfig &config() const { return config_; }

  /// Catalog model, falling back to `model_dir/<name>.mbqml.json`.
  /// Throws NameError when neither exists.
  const train::ModelArtifact &model(std::string_view name);

  /// Path used for auto-saving `name`, if a model_dir is configured.
  std::optional<std::filesystem::path> model_path(std::string_view name) const;

private:
  StatementResult run(const sql::SelectStmt &stmt);
  StatementResult run(const sql::CreateModelStmt &stmt);
  StatementResult run(const sql::CreateTableFromCsvStmt &stmt);
  StatementResult run(const sql::MlEvaluateStmt &stmt);
  StatementResult run(const sql::MlPredictStmt &stmt);
  StatementResult run(const sql::MlFeatureImportanceStmt &stmt);
  StatementResult run(const sql::MlRocCurveStmt &stmt);

  EngineConfig config_;
  Catalog catalog_;
};

} // namespace minibqml
