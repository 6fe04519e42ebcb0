#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace minibqml::eval {

inline constexpr double kLogLossEpsilon = 1e-15;
inline constexpr double kDefaultThreshold = 0.5;

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts &) const = default;
};

/// A row is predicted positive iff score >= threshold.
/// Throws LengthError on mismatched or empty inputs.
ConfusionCounts confusion(std::span<const double> labels, std::span<const double> scores,
                          double threshold);

/// Ratios with a zero denominator are nullopt rather than 0.
struct ClassificationMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  std::optional<double> f1_score;
  double log_loss = 0.0;
};

ClassificationMetrics classification_metrics(const ConfusionCounts &counts,
                                             std::span<const double> labels,
                                             std::span<const double> scores);

/// Mean cross-entropy with probabilities clipped to [eps, 1 - eps].
double log_loss(std::span<const double> labels, std::span<const double> scores);

} // namespace minibqml::eval
