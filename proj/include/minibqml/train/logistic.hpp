#pragma once

#include "minibqml/kernels/matrix.hpp"
#include "minibqml/train/options.hpp"

#include <span>
#include <string>
#include <vector>

namespace minibqml::train {

struct LinearParams {
  std::vector<double> weights;
  double intercept = 0.0;
  bool operator==(const LinearParams &) const = default;
};

/// Smooth part of the logistic objective and its gradient:
///   mean_i logloss(w.x_i + b, y_i) + l2 * |w|^2 / (2n)
struct LogisticObjective {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_intercept = 0.0;
};

LogisticObjective logistic_objective(const kernels::Matrix &x, std::span<const double> y,
                                     const LinearParams &params, double l2);

template <class Params> struct TrainOutcome {
  Params params;
  std::vector<LogEntry> log; ///< entry 0 is the initial objective
  std::vector<std::string> warnings;
};

/// Full-batch proximal gradient descent from w = 0 on
///   mean_i logloss + (l2 * |w|^2 / 2 + l1 * |w|_1) / n:
/// a gradient step of size learn_rate on the smooth part, then
/// soft-thresholding of the weights by learn_rate * l1 / n (the intercept is
/// never regularized). The log records the full objective.
/// Throws DataError when x is empty or y holds a single class.
TrainOutcome<LinearParams> train_logistic(const kernels::Matrix &x,
                                          std::span<const double> y,
                                          const TrainOptions &opts);

/// Throws DataError unless x is nonempty, sizes agree, and y has both classes.
void check_training_data(const kernels::Matrix &x, std::span<const double> y);

} // namespace minibqml::train
