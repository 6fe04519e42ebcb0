#include "minibqml/engine.hpp"

#include "minibqml/error.hpp"
#include "minibqml/eval/report.hpp"
#include "minibqml/model_io.hpp"
#include "minibqml/query/exec.hpp"
#include "minibqml/sql/parser.hpp"

#include <sstream>

namespace minibqml {

Engine::Engine(EngineConfig config) : config_(std::move(config)) {}

StatementResult Engine::execute(std::string_view sql) {
  return execute(sql::parse_statement(sql));
}

StatementResult Engine::execute(const sql::Statement &stmt) {
  return std::visit([this](const auto &s) { return run(s); }, stmt);
}

std::optional<std::filesystem::path> Engine::model_path(std::string_view name) const {
  if (!config_.model_dir)
    return std::nullopt;
  return *config_.model_dir / (std::string(name) + std::string(kModelFileExtension));
}

const train::ModelArtifact &Engine::model(std::string_view name) {
  if (catalog_.has_model(name))
    return catalog_.model(name);
  if (auto path = model_path(name); path && std::filesystem::exists(*path))
    return catalog_.add_model(load_model(*path), true);
  return catalog_.model(name);
}

StatementResult Engine::run(const sql::SelectStmt &stmt) {
  StatementResult r;
  r.table = query::execute_select(stmt, catalog_);
  return r;
}

StatementResult Engine::run(const sql::CreateTableFromCsvStmt &stmt) {
  StatementResult r;
  const auto &t = catalog_.load_csv(stmt.path, stmt.name.last(), stmt.replace);
  r.notices.push_back("loaded table " + t.name() + ": " + std::to_string(t.row_count()) +
                      " rows, " + std::to_string(t.column_count()) + " columns");
  return r;
}

StatementResult Engine::run(const sql::CreateModelStmt &stmt) {
  const auto &name = stmt.name.last();
  if (!stmt.replace && catalog_.has_model(name))
    throw CatalogError("model '" + name + "' already exists");
  const auto options = train::TrainOptions::from_options(stmt.options, config_.default_seed);
  const Table input = query::execute_select(stmt.query, catalog_);

  auto artifact = train::train_model(name, input, options);
  StatementResult r;
  r.warnings = artifact.warnings;
  const auto iterations = artifact.training_log.back().iteration;
  const auto loss = artifact.training_log.back().loss;
  std::ostringstream msg;
  msg << "trained model " << name << " (" << to_string(options.model_type) << "): "
      << iterations << " iterations, training loss " << format_double(loss) << ", "
      << artifact.eval_rows.row_count() << " evaluation rows";
  r.notices.push_back(msg.str());
  if (auto path = model_path(name)) {
    save_model(artifact, *path);
    r.notices.push_back("saved model to " + path->string());
  }
  catalog_.add_model(std::move(artifact), true);
  return r;
}

StatementResult Engine::run(const sql::MlEvaluateStmt &stmt) {
  const auto &m = model(stmt.model.last());
  StatementResult r;
  std::optional<Table> input;
  if (stmt.input)
    input = query::execute_select(*stmt.input, catalog_);
  const auto report = eval::evaluate_model(m, input ? &*input : nullptr);
  if (report.source == eval::EvalSource::TrainingData)
    r.warnings.push_back("model " + m.name +
                         " was trained with NO_SPLIT; metrics are computed on training data");
  r.table = eval::report_table(report);
  return r;
}

StatementResult Engine::run(const sql::MlPredictStmt &stmt) {
  const auto &m = model(stmt.model.last());
  StatementResult r;
  r.table = eval::predict_table(m, query::execute_select(stmt.input, catalog_), stmt.threshold);
  return r;
}

StatementResult Engine::run(const sql::MlFeatureImportanceStmt &stmt) {
  StatementResult r;
  r.table = eval::importance_table(model(stmt.model.last()));
  return r;
}

StatementResult Engine::run(const sql::MlRocCurveStmt &stmt) {
  StatementResult r;
  r.table = eval::curve_table(eval::model_roc_points(model(stmt.model.last())));
  return r;
}

} // namespace minibqml
