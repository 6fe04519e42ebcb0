#include "minibqml/train/dnn.hpp"

#include "minibqml/kernels/kernels.hpp"
#include "minibqml/train/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace minibqml::train {

using kernels::Matrix;

namespace {

void relu_inplace(Matrix &m) {
  for (double &v : m.data)
    v = v > 0.0 ? v : 0.0;
}

double squared_norm(const std::vector<Matrix> &ws) {
  double s = 0.0;
  for (const auto &w : ws)
    for (double v : w.data)
      s += v * v;
  return s;
}

/// Activations of every layer: acts[0] = x, acts[l + 1] = layer l output
/// (post-ReLU for hidden layers, raw margin for the last).
std::vector<Matrix> forward(const DnnParams &p, const Matrix &x) {
  std::vector<Matrix> acts;
  acts.reserve(p.weights.size() + 1);
  acts.push_back(x);
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    Matrix out;
    kernels::parallel::dense_forward(acts.back(), p.weights[l], p.biases[l], out);
    if (l + 1 < p.weights.size())
      relu_inplace(out);
    acts.push_back(std::move(out));
  }
  return acts;
}

} // namespace

std::vector<double> DnnParams::margins(const Matrix &x) const {
  auto acts = forward(*this, x);
  return std::move(acts.back().data);
}

DnnParams init_dnn(std::size_t inputs, std::span<const int> hidden, std::uint64_t seed) {
  Rng rng(seed);
  DnnParams p;
  std::size_t fan_in = inputs;
  const std::size_t layers = hidden.size() + 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const bool last = l + 1 == layers;
    const std::size_t width = last ? 1 : static_cast<std::size_t>(hidden[l]);
    const double limit =
        std::sqrt((last ? 3.0 : 6.0) / static_cast<double>(std::max<std::size_t>(fan_in, 1)));
    Matrix w(width, fan_in);
    for (double &v : w.data)
      v = rng.symmetric(limit);
    p.weights.push_back(std::move(w));
    p.biases.emplace_back(width, 0.0);
    fan_in = width;
  }
  return p;
}

DnnObjective dnn_objective(const Matrix &x, std::span<const double> y,
                           const DnnParams &params, double l2, std::size_t reg_rows) {
  const std::size_t n = x.rows;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double reg = l2 / static_cast<double>(reg_rows);
  auto acts = forward(params, x);

  DnnObjective out;
  const auto &margin = acts.back().data;
  out.loss = kernels::parallel::logistic_loss_sum(margin, y) * inv_n +
             0.5 * reg * squared_norm(params.weights);

  // delta = dLoss/dz for the current layer, batch x width.
  Matrix delta(n, 1);
  for (std::size_t i = 0; i < n; ++i)
    delta.data[i] = (kernels::sigmoid(margin[i]) - y[i]) * inv_n;

  const std::size_t layers = params.weights.size();
  out.grad.weights.resize(layers);
  out.grad.biases.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    const Matrix &input = acts[l];
    Matrix &gw = out.grad.weights[l];
    kernels::parallel::dense_weight_grad(delta, input, gw);
    const Matrix &w = params.weights[l];
    for (std::size_t k = 0; k < gw.data.size(); ++k)
      gw.data[k] += reg * w.data[k];

    auto &gb = out.grad.biases[l];
    gb.assign(delta.cols, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t o = 0; o < delta.cols; ++o)
        gb[o] += delta(i, o);

    if (l == 0)
      break;
    Matrix back;
    kernels::parallel::dense_input_grad(delta, w, back);
    // ReLU derivative: the activation is positive exactly where z was.
    for (std::size_t k = 0; k < back.data.size(); ++k)
      if (!(input.data[k] > 0.0))
        back.data[k] = 0.0;
    delta = std::move(back);
  }
  return out;
}

namespace {

struct Adam {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  std::vector<std::vector<double>> m, v;
  long step = 0;

  explicit Adam(const DnnParams &p) {
    for (const auto &w : p.weights) {
      m.emplace_back(w.data.size(), 0.0);
      v.emplace_back(w.data.size(), 0.0);
    }
    for (const auto &b : p.biases) {
      m.emplace_back(b.size(), 0.0);
      v.emplace_back(b.size(), 0.0);
    }
  }

  void update(std::size_t slot, std::vector<double> &param, const std::vector<double> &grad,
              double lr_t) {
    auto &ms = m[slot];
    auto &vs = v[slot];
    for (std::size_t k = 0; k < param.size(); ++k) {
      ms[k] = kBeta1 * ms[k] + (1.0 - kBeta1) * grad[k];
      vs[k] = kBeta2 * vs[k] + (1.0 - kBeta2) * grad[k] * grad[k];
      param[k] -= lr_t * ms[k] / (std::sqrt(vs[k]) + kEps);
    }
  }

  void apply(DnnParams &p, const DnnParams &g, double lr) {
    ++step;
    const double t = static_cast<double>(step);
    const double lr_t =
        lr * std::sqrt(1.0 - std::pow(kBeta2, t)) / (1.0 - std::pow(kBeta1, t));
    const std::size_t layers = p.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
      update(l, p.weights[l].data, g.weights[l].data, lr_t);
      update(layers + l, p.biases[l], g.biases[l], lr_t);
    }
  }
};

Matrix gather_rows(const Matrix &x, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), x.cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy_n(x.row(rows[i]).begin(), x.cols, out.row(i).begin());
  return out;
}

double full_objective(const Matrix &x, std::span<const double> y, const DnnParams &p,
                      double l2) {
  const auto margin = p.margins(x);
  return kernels::parallel::logistic_loss_sum(margin, y) / static_cast<double>(x.rows) +
         0.5 * l2 / static_cast<double>(x.rows) * squared_norm(p.weights);
}

} // namespace

TrainOutcome<DnnParams> train_dnn(const Matrix &x, std::span<const double> y,
                                  const TrainOptions &opts) {
  check_training_data(x, y);
  const std::size_t n = x.rows;
  TrainOutcome<DnnParams> out;
  DnnParams &p = out.params;
  p = init_dnn(x.cols, opts.hidden_units, opts.seed);

  // Separate streams so that changing the architecture does not change the
  // batch order.
  Rng order_rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  Adam adam(p);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(opts.batch_size);

  double prev = full_objective(x, y, p, opts.l2_reg);
  out.log.push_back({0, prev});
  bool converged = false;
  std::vector<double> yb;
  for (int epoch = 1; epoch <= opts.max_iterations; ++epoch) {
    order_rng.shuffle(order.begin(), order.end());
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      std::span<const std::size_t> idx(order.data() + start, end - start);
      Matrix xb = gather_rows(x, idx);
      yb.resize(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i)
        yb[i] = y[idx[i]];
      auto obj = dnn_objective(xb, yb, p, opts.l2_reg, n);
      adam.apply(p, obj.grad, opts.learn_rate);
    }
    const double cur = full_objective(x, y, p, opts.l2_reg);
    out.log.push_back({epoch, cur});
    if (should_stop(prev, cur, opts.min_rel_progress)) {
      converged = true;
      break;
    }
    prev = cur;
  }
  if (!converged)
    out.warnings.push_back("ConvergenceWarning: dnn reached max_iterations=" +
                           std::to_string(opts.max_iterations) +
                           " with relative progress above min_rel_progress");
  return out;
}

} // namespace minibqml::train
