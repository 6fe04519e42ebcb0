#pragma once

#include "minibqml/eval/curves.hpp"
#include "minibqml/eval/metrics.hpp"
#include "minibqml/table.hpp"
#include "minibqml/train/model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace minibqml::eval {

enum class EvalSource { StoredEvalSplit, UserTable, TrainingData };

std::string_view to_string(EvalSource source);

struct EvaluationReport {
  double threshold = kDefaultThreshold;
  ConfusionCounts counts;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  std::optional<double> f1_score;
  double log_loss = 0.0;
  std::optional<double> roc_auc; ///< nullopt for single-class labels
  std::optional<double> pr_auc;  ///< nullopt without positives
  EvalSource source = EvalSource::StoredEvalSplit;
};

EvaluationReport evaluate_scores(std::span<const double> labels,
                                 std::span<const double> scores, double threshold,
                                 EvalSource source);

/// Labels and predicted probabilities for an evaluation source: the stored
/// eval rows when `input` is null, otherwise `input` minus NULL-label rows.
struct ScoredRows {
  std::vector<double> labels;
  std::vector<double> scores;
  EvalSource source = EvalSource::StoredEvalSplit;
};
ScoredRows score_rows(const train::ModelArtifact &model, const Table *input);

/// ML.EVALUATE; throws SchemaError when `input` lacks the label column.
EvaluationReport evaluate_model(const train::ModelArtifact &model, const Table *input,
                                double threshold = kDefaultThreshold);

/// One-row table: precision, recall, accuracy, f1_score, log_loss, roc_auc,
/// pr_auc, threshold, tp, fp, tn, fn, source. Undefined metrics are NULL.
Table report_table(const EvaluationReport &report);

/// ML.PREDICT: input columns plus predicted_<label> (INT64 0/1) and
/// predicted_<label>_prob (FLOAT64), row order preserved.
Table predict_table(const train::ModelArtifact &model, const Table &input, double threshold);

/// ML.FEATURE_IMPORTANCE: (feature, importance_gain) sorted by gain descending.
Table importance_table(const train::ModelArtifact &model);

/// ML.ROC_CURVE over the stored evaluation rows without the leading origin:
/// threshold, recall, false_positive_rate, precision.
std::vector<CurvePoint> model_roc_points(const train::ModelArtifact &model);
Table curve_table(std::span<const CurvePoint> points);

} // namespace minibqml::eval
