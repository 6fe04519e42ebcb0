#include "minibqml/eval/curves.hpp"

#include "minibqml/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace minibqml::eval {

namespace {

/// Sweep over distinct scores in descending order, grouping ties.
std::vector<CurvePoint> sweep(std::span<const double> labels, std::span<const double> scores,
                              std::size_t positives, std::size_t negatives) {
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<CurvePoint> out;
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    while (k < order.size() && scores[order[k]] == s) {
      ++(labels[order[k]] == 1.0 ? tp : fp);
      ++k;
    }
    CurvePoint p;
    p.threshold = s;
    p.recall = positives ? static_cast<double>(tp) / static_cast<double>(positives) : 0.0;
    p.false_positive_rate =
        negatives ? static_cast<double>(fp) / static_cast<double>(negatives) : 0.0;
    p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    out.push_back(p);
  }
  return out;
}

std::pair<std::size_t, std::size_t> class_counts(std::span<const double> labels,
                                                 std::span<const double> scores) {
  if (labels.size() != scores.size())
    throw LengthError("labels and scores differ in length");
  std::size_t pos = 0;
  for (double y : labels)
    pos += y == 1.0;
  return {pos, labels.size() - pos};
}

} // namespace

std::vector<CurvePoint> roc_curve(std::span<const double> labels,
                                  std::span<const double> scores) {
  auto [pos, neg] = class_counts(labels, scores);
  if (pos == 0 || neg == 0)
    throw DegenerateError("ROC curve needs both classes (positives " + std::to_string(pos) +
                          ", negatives " + std::to_string(neg) + ")");
  std::vector<CurvePoint> out;
  out.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0, std::nullopt});
  auto rest = sweep(labels, scores, pos, neg);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

double auc_from_points(std::span<const CurvePoint> points) {
  double area = 0.0, x = 0.0, y = 0.0;
  for (const auto &p : points) {
    area += (p.false_positive_rate - x) * (p.recall + y) / 2.0;
    x = p.false_positive_rate;
    y = p.recall;
  }
  return area;
}

double roc_auc(std::span<const double> labels, std::span<const double> scores) {
  return auc_from_points(roc_curve(labels, scores));
}

std::vector<CurvePoint> pr_curve(std::span<const double> labels,
                                 std::span<const double> scores) {
  auto [pos, neg] = class_counts(labels, scores);
  if (pos == 0)
    throw DegenerateError("precision-recall curve needs at least one positive");
  return sweep(labels, scores, pos, neg);
}

double pr_auc_from_points(std::span<const CurvePoint> points) {
  double area = 0.0, r = 0.0;
  for (const auto &p : points) {
    if (p.precision)
      area += (p.recall - r) * *p.precision;
    r = p.recall;
  }
  return area;
}

double pr_auc(std::span<const double> labels, std::span<const double> scores) {
  return pr_auc_from_points(pr_curve(labels, scores));
}

} // namespace minibqml::eval
