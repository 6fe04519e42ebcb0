#pragma once

#include "minibqml/prep/preprocessor.hpp"
#include "minibqml/table.hpp"
#include "minibqml/train/boosted_tree.hpp"
#include "minibqml/train/dnn.hpp"
#include "minibqml/train/logistic.hpp"
#include "minibqml/train/options.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace minibqml::train {

inline constexpr int kSchemaVersion = 1;

/// Margins are clipped to this magnitude before the sigmoid, keeping
/// probabilities strictly inside (0, 1).
inline constexpr double kMarginClip = 30.0;

using ModelParams = std::variant<LinearParams, TreeEnsembleParams, DnnParams>;

struct InputColumn {
  std::string name;
  ColumnType type = ColumnType::Float64;
  bool operator==(const InputColumn &) const = default;
};

struct ModelArtifact {
  std::string name;
  TrainOptions options;
  prep::PreprocessorState preprocessor;
  ModelParams params;
  std::vector<LogEntry> training_log;
  std::vector<InputColumn> input_schema; ///< training query output columns
  Table eval_rows; ///< the eval split, or the training rows under NO_SPLIT
  std::uint64_t seed_used = 0;
  int schema_version = kSchemaVersion;
  std::vector<std::string> warnings; ///< not persisted

  ModelType model_type() const { return options.model_type; }
  const std::string &label_col() const { return options.label_col; }
  bool evaluates_on_training_data() const {
    return options.split_method == SplitMethod::NoSplit;
  }
};

/// Drops NULL-label rows, splits, fits preprocessing on the training side,
/// and runs the trainer selected by `options.model_type`.
/// Throws LabelError, EmptyError, SplitError, or DataError.
ModelArtifact train_model(std::string name, const Table &input, const TrainOptions &options);

/// Model margins for an already-transformed design matrix (unclipped).
std::vector<double> predict_margins(const ModelParams &params, const kernels::Matrix &x);

/// P(label = 1) for every row of `rows`. Throws SchemaError.
std::vector<double> predict_proba(const ModelArtifact &artifact, const Table &rows);

/// Sum of split gains per source column (one-hot spans merged), every input
/// feature listed, sorted by gain descending then by feature order.
/// Throws ModelTypeError for non-tree models.
std::vector<std::pair<std::string, double>> feature_importance(const ModelArtifact &artifact);

} // namespace minibqml::train
