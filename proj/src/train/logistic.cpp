#include "minibqml/train/logistic.hpp"

#include "minibqml/error.hpp"
#include "minibqml/kernels/kernels.hpp"

#include <cmath>

namespace minibqml::train {

void check_training_data(const kernels::Matrix &x, std::span<const double> y) {
  if (x.rows == 0)
    throw DataError("training data is empty");
  if (y.size() != x.rows)
    throw DataError("label count does not match row count");
  bool pos = false, neg = false;
  for (double v : y) {
    pos |= v == 1.0;
    neg |= v == 0.0;
  }
  if (!pos || !neg)
    throw DataError("training labels contain a single class");
}

LogisticObjective logistic_objective(const kernels::Matrix &x, std::span<const double> y,
                                     const LinearParams &params, double l2) {
  const std::size_t n = x.rows;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> margin(n);
  kernels::parallel::affine(x, params.weights, params.intercept, margin);

  LogisticObjective out;
  out.loss = kernels::parallel::logistic_loss_sum(margin, y) * inv_n;

  // margin now holds the residual p - y
  double residual_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    margin[i] = kernels::sigmoid(margin[i]) - y[i];
    residual_sum += margin[i];
  }
  out.grad_weights.assign(x.cols, 0.0);
  kernels::parallel::transpose_times(x, margin, out.grad_weights);

  double sq = 0.0;
  for (std::size_t j = 0; j < x.cols; ++j) {
    out.grad_weights[j] = out.grad_weights[j] * inv_n + l2 * params.weights[j] * inv_n;
    sq += params.weights[j] * params.weights[j];
  }
  out.loss += l2 * sq * 0.5 * inv_n;
  out.grad_intercept = residual_sum * inv_n;
  return out;
}

namespace {

double l1_norm(const std::vector<double> &w) {
  double s = 0.0;
  for (double v : w)
    s += std::fabs(v);
  return s;
}

} // namespace

TrainOutcome<LinearParams> train_logistic(const kernels::Matrix &x,
                                          std::span<const double> y,
                                          const TrainOptions &opts) {
  check_training_data(x, y);
  TrainOutcome<LinearParams> out;
  LinearParams &p = out.params;
  p.weights.assign(x.cols, 0.0);
  p.intercept = 0.0;

  // Both penalties sit on the summed-loss scale, so they enter the mean
  // objective divided by n.
  const double step = opts.learn_rate;
  const double l1 = opts.l1_reg / static_cast<double>(x.rows);
  const double shrink = step * l1;

  LogisticObjective obj = logistic_objective(x, y, p, opts.l2_reg);
  double prev = obj.loss + l1 * l1_norm(p.weights);
  out.log.push_back({0, prev});

  bool converged = false;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    for (std::size_t j = 0; j < x.cols; ++j) {
      double w = p.weights[j] - step * obj.grad_weights[j];
      double mag = std::fabs(w) - shrink;
      p.weights[j] = mag > 0.0 ? std::copysign(mag, w) : 0.0;
    }
    p.intercept -= step * obj.grad_intercept;

    obj = logistic_objective(x, y, p, opts.l2_reg);
    double cur = obj.loss + l1 * l1_norm(p.weights);
    out.log.push_back({it, cur});
    if (should_stop(prev, cur, opts.min_rel_progress)) {
      converged = true;
      break;
    }
    prev = cur;
  }
  if (!converged)
    out.warnings.push_back("ConvergenceWarning: logistic regression reached max_iterations=" +
                           std::to_string(opts.max_iterations) +
                           " with relative progress above min_rel_progress");
  return out;
}

} // namespace minibqml::train
