#include "minibqml/eval/metrics.hpp"

#include "minibqml/error.hpp"

#include <algorithm>
#include <cmath>

namespace minibqml::eval {

namespace {

void check_lengths(std::span<const double> labels, std::span<const double> scores) {
  if (labels.size() != scores.size())
    throw LengthError("labels and scores differ in length (" + std::to_string(labels.size()) +
                      " vs " + std::to_string(scores.size()) + ")");
  if (labels.empty())
    throw LengthError("no rows to evaluate");
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0)
    return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

ConfusionCounts confusion(std::span<const double> labels, std::span<const double> scores,
                          double threshold) {
  check_lengths(labels, scores);
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] == 1.0;
    if (predicted)
      ++(actual ? c.tp : c.fp);
    else
      ++(actual ? c.fn : c.tn);
  }
  return c;
}

double log_loss(std::span<const double> labels, std::span<const double> scores) {
  check_lengths(labels, scores);
  double s = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = std::clamp(scores[i], kLogLossEpsilon, 1.0 - kLogLossEpsilon);
    s += labels[i] == 1.0 ? std::log(p) : std::log(1.0 - p);
  }
  return -s / static_cast<double>(labels.size());
}

ClassificationMetrics classification_metrics(const ConfusionCounts &c,
                                             std::span<const double> labels,
                                             std::span<const double> scores) {
  ClassificationMetrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.accuracy = ratio(c.tp + c.tn, c.total());
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0)
    m.f1_score = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  m.log_loss = log_loss(labels, scores);
  return m;
}

} // namespace minibqml::eval
