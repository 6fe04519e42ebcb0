#pragma once

#include "minibqml/kernels/matrix.hpp"
#include "minibqml/train/logistic.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace minibqml::train {

/// Layer l maps width in_l to out_l: weights[l] is out_l x in_l.
/// Hidden layers use ReLU; the last layer has one output fed to a sigmoid.
struct DnnParams {
  std::vector<kernels::Matrix> weights;
  std::vector<std::vector<double>> biases;

  /// Output-layer margins (pre-sigmoid) for every row of x.
  std::vector<double> margins(const kernels::Matrix &x) const;
  bool operator==(const DnnParams &) const = default;
};

/// Layer sizes input -> hidden... -> 1; hidden layers draw from
/// U(-sqrt(6/fan_in), sqrt(6/fan_in)), the output layer from
/// U(-sqrt(3/fan_in), sqrt(3/fan_in)); biases start at zero.
DnnParams init_dnn(std::size_t inputs, std::span<const int> hidden, std::uint64_t seed);

struct DnnObjective {
  double loss = 0.0;
  DnnParams grad; ///< same shapes as the parameters
};

/// mean_i logloss(net(x_i), y_i) + l2 * sum |W|^2 / (2 * reg_rows), with the
/// gradient by back-propagation. Biases are not regularized.
DnnObjective dnn_objective(const kernels::Matrix &x, std::span<const double> y,
                           const DnnParams &params, double l2, std::size_t reg_rows);

/// Adam over seeded per-epoch mini-batch shuffles; one iteration is one epoch
/// and the log records the full-data objective after each epoch.
TrainOutcome<DnnParams> train_dnn(const kernels::Matrix &x, std::span<const double> y,
                                  const TrainOptions &opts);

} // namespace minibqml::train
