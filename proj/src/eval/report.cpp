#include "minibqml/eval/report.hpp"

#include "minibqml/error.hpp"

namespace minibqml::eval {

std::string_view to_string(EvalSource source) {
  switch (source) {
  case EvalSource::StoredEvalSplit:
    return "stored_eval_split";
  case EvalSource::UserTable:
    return "user_table";
  case EvalSource::TrainingData:
    return "training_data";
  }
  return "?";
}

EvaluationReport evaluate_scores(std::span<const double> labels,
                                 std::span<const double> scores, double threshold,
                                 EvalSource source) {
  EvaluationReport r;
  r.threshold = threshold;
  r.source = source;
  r.counts = confusion(labels, scores, threshold);
  const auto m = classification_metrics(r.counts, labels, scores);
  r.precision = m.precision;
  r.recall = m.recall;
  r.accuracy = m.accuracy;
  r.f1_score = m.f1_score;
  r.log_loss = m.log_loss;
  const std::size_t pos = r.counts.tp + r.counts.fn;
  if (pos > 0 && pos < r.counts.total())
    r.roc_auc = roc_auc(labels, scores);
  if (pos > 0)
    r.pr_auc = pr_auc(labels, scores);
  return r;
}

ScoredRows score_rows(const train::ModelArtifact &model, const Table *input) {
  ScoredRows out;
  const Table *rows = &model.eval_rows;
  Table filtered;
  if (input != nullptr) {
    out.source = EvalSource::UserTable;
    auto idx = input->find_column(model.label_col());
    if (!idx)
      throw SchemaError("evaluation input has no label column '" + model.label_col() + "'");
    const Column &label = input->column(*idx);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < input->row_count(); ++i)
      if (!label.is_null(i))
        keep.push_back(i);
    filtered = input->take(keep);
    rows = &filtered;
  } else {
    out.source = model.evaluates_on_training_data() ? EvalSource::TrainingData
                                                    : EvalSource::StoredEvalSplit;
  }
  if (rows->row_count() == 0)
    throw EmptyError("no labelled rows to evaluate");
  out.labels = prep::transform(model.preprocessor, *rows, true).y;
  out.scores = train::predict_proba(model, *rows);
  return out;
}

EvaluationReport evaluate_model(const train::ModelArtifact &model, const Table *input,
                                double threshold) {
  const auto scored = score_rows(model, input);
  return evaluate_scores(scored.labels, scored.scores, threshold, scored.source);
}

namespace {

void put(Table &t, const std::string &name, const std::optional<double> &v) {
  Column c(name, ColumnType::Float64);
  if (v)
    c.append(Value(*v));
  else
    c.append_null();
  t.add_column(std::move(c));
}

void put_count(Table &t, const std::string &name, std::size_t v) {
  Column c(name, ColumnType::Int64);
  c.append(Value(static_cast<std::int64_t>(v)));
  t.add_column(std::move(c));
}

} // namespace

Table report_table(const EvaluationReport &r) {
  Table t("evaluation");
  put(t, "precision", r.precision);
  put(t, "recall", r.recall);
  put(t, "accuracy", r.accuracy);
  put(t, "f1_score", r.f1_score);
  put(t, "log_loss", r.log_loss);
  put(t, "roc_auc", r.roc_auc);
  put(t, "pr_auc", r.pr_auc);
  put(t, "threshold", r.threshold);
  put_count(t, "tp", r.counts.tp);
  put_count(t, "fp", r.counts.fp);
  put_count(t, "tn", r.counts.tn);
  put_count(t, "fn", r.counts.fn);
  Column source("source", ColumnType::String);
  source.append(Value(std::string(to_string(r.source))));
  t.add_column(std::move(source));
  t.set_row_count(1);
  return t;
}

Table predict_table(const train::ModelArtifact &model, const Table &input, double threshold) {
  const auto probs = train::predict_proba(model, input);
  Table out = input;
  out.set_name("predictions");
  Column label("predicted_" + model.label_col(), ColumnType::Int64);
  Column prob("predicted_" + model.label_col() + "_prob", ColumnType::Float64);
  label.reserve(probs.size());
  prob.reserve(probs.size());
  for (double p : probs) {
    label.append(Value(static_cast<std::int64_t>(p >= threshold ? 1 : 0)));
    prob.append(Value(p));
  }
  out.put_column(std::move(label));
  out.put_column(std::move(prob));
  return out;
}

Table importance_table(const train::ModelArtifact &model) {
  const auto gains = train::feature_importance(model);
  Table t("feature_importance");
  Column feature("feature", ColumnType::String);
  Column gain("importance_gain", ColumnType::Float64);
  for (const auto &[name, g] : gains) {
    feature.append(Value(name));
    gain.append(Value(g));
  }
  t.add_column(std::move(feature));
  t.add_column(std::move(gain));
  t.set_row_count(gains.size());
  return t;
}

std::vector<CurvePoint> model_roc_points(const train::ModelArtifact &model) {
  const auto scored = score_rows(model, nullptr);
  auto points = roc_curve(scored.labels, scored.scores);
  points.erase(points.begin());
  return points;
}

Table curve_table(std::span<const CurvePoint> points) {
  Table t("roc_curve");
  Column threshold("threshold", ColumnType::Float64);
  Column recall("recall", ColumnType::Float64);
  Column fpr("false_positive_rate", ColumnType::Float64);
  Column precision("precision", ColumnType::Float64);
  for (const auto &p : points) {
    threshold.append(Value(p.threshold));
    recall.append(Value(p.recall));
    fpr.append(Value(p.false_positive_rate));
    if (p.precision)
      precision.append(Value(*p.precision));
    else
      precision.append_null();
  }
  t.add_column(std::move(threshold));
  t.add_column(std::move(recall));
  t.add_column(std::move(fpr));
  t.add_column(std::move(precision));
  t.set_row_count(points.size());
  return t;
}

} // namespace minibqml::eval
