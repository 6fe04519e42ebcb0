#pragma once

#include <optional>
#include <span>
#include <vector>

namespace minibqml::eval {

/// Operating point for "predict positive iff score >= threshold".
struct CurvePoint {
  double threshold = 0.0;
  double recall = 0.0; ///< true-positive rate
  double false_positive_rate = 0.0;
  std::optional<double> precision; ///< undefined when nothing is predicted positive
};

/// One point per distinct score, thresholds descending, preceded by the
/// (0, 0) origin at threshold +inf. Throws DegenerateError unless both
/// classes are present.
std::vector<CurvePoint> roc_curve(std::span<const double> labels,
                                  std::span<const double> scores);

/// Trapezoidal area under recall over false_positive_rate, starting from the
/// origin (a leading origin point in `points` adds nothing).
double auc_from_points(std::span<const CurvePoint> points);

double roc_auc(std::span<const double> labels, std::span<const double> scores);

/// One point per distinct score, thresholds descending.
/// Throws DegenerateError when no positives are present.
std::vector<CurvePoint> pr_curve(std::span<const double> labels,
                                 std::span<const double> scores);

/// Step-wise area: sum over points of (recall increment) * precision.
double pr_auc_from_points(std::span<const CurvePoint> points);

double pr_auc(std::span<const double> labels, std::span<const double> scores);

} // namespace minibqml::eval
