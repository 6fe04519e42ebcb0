#include "minibqml/train/boosted_tree.hpp"

#include "minibqml/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace minibqml::train {

using kernels::BinnedFeature;
using kernels::GradStats;

double Tree::predict(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto &n = nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] < n.threshold
                                     ? n.left
                                     : n.right);
  }
  return nodes[i].weight;
}

int Tree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

double TreeEnsembleParams::margin(std::span<const double> row) const {
  double sum = 0.0;
  for (const auto &t : trees)
    sum += t.predict(row);
  return base_score + shrinkage * sum;
}

double leaf_weight(GradStats s, double l1, double l2) {
  const double denom = s.hess + l2;
  if (!(denom > 0.0))
    return 0.0;
  const double mag = std::max(std::fabs(s.grad) - l1, 0.0);
  return -std::copysign(mag, s.grad) / denom;
}

namespace {

double score(GradStats s, double l2) { return s.grad * s.grad / (s.hess + l2); }

} // namespace

double split_gain(GradStats left, GradStats right, double l2) {
  GradStats parent = left;
  parent += right;
  return 0.5 * (score(left, l2) + score(right, l2) - score(parent, l2));
}

std::vector<BinnedFeature> bin_features(const kernels::Matrix &x) {
  std::vector<BinnedFeature> out(x.cols);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(x.cols); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    auto &f = out[j];
    f.values.resize(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
      f.values[i] = x(i, j);
    std::sort(f.values.begin(), f.values.end());
    f.values.erase(std::unique(f.values.begin(), f.values.end()), f.values.end());
    f.bin.resize(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
      f.bin[i] = static_cast<std::uint32_t>(
          std::lower_bound(f.values.begin(), f.values.end(), x(i, j)) - f.values.begin());
  }
  return out;
}

namespace {

struct SplitChoice {
  int feature = -1;
  std::uint32_t last_left_bin = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

class TreeBuilder {
public:
  TreeBuilder(std::span<const BinnedFeature> features, std::span<const double> g,
              std::span<const double> h, const TrainOptions &opts)
      : features_(features), g_(g), h_(h), opts_(opts) {}

  /// Grows a tree over `rows`; writes each row's leaf weight into `leaf_out`.
  Tree grow(std::vector<std::uint32_t> rows, std::vector<double> &leaf_out) {
    Tree tree;
    tree.nodes.emplace_back();
    grow_node(tree, 0, std::move(rows), 0, leaf_out);
    return tree;
  }

private:
  std::span<const BinnedFeature> features_;
  std::span<const double> g_;
  std::span<const double> h_;
  const TrainOptions &opts_;
  std::vector<std::vector<GradStats>> hist_;

  SplitChoice best_split(std::span<const std::uint32_t> rows) {
    kernels::parallel::build_histograms(features_, rows, g_, h_, hist_);
    std::vector<SplitChoice> per_feature(features_.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t ff = 0; ff < static_cast<std::ptrdiff_t>(features_.size()); ++ff) {
      const auto f = static_cast<std::size_t>(ff);
      const auto &hist = hist_[f];
      const auto &values = features_[f].values;
      GradStats total;
      for (const auto &c : hist)
        total += c;
      SplitChoice best;
      GradStats left;
      std::ptrdiff_t prev_bin = -1;
      for (std::size_t b = 0; b < hist.size(); ++b) {
        if (hist[b].count == 0)
          continue;
        if (prev_bin >= 0) {
          GradStats right{total.grad - left.grad, total.hess - left.hess,
                          total.count - left.count};
          if (left.hess + opts_.l2_reg > 0.0 && right.hess + opts_.l2_reg > 0.0) {
            double gain = split_gain(left, right, opts_.l2_reg);
            if (gain > best.gain) {
              const double lo = values[static_cast<std::size_t>(prev_bin)];
              const double hi = values[b];
              double mid = lo + (hi - lo) / 2.0;
              if (!(mid > lo) || mid > hi)
                mid = hi;
              best = {static_cast<int>(f), static_cast<std::uint32_t>(prev_bin), mid, gain};
            }
          }
        }
        left += hist[b];
        prev_bin = static_cast<std::ptrdiff_t>(b);
      }
      per_feature[f] = best;
    }
    SplitChoice best;
    for (const auto &c : per_feature)
      if (c.feature >= 0 && c.gain > best.gain)
        best = c;
    return best;
  }

  GradStats sum_stats(std::span<const std::uint32_t> rows) const {
    GradStats stats;
    for (auto r : rows) {
      stats.grad += g_[r];
      stats.hess += h_[r];
    }
    stats.count = rows.size();
    return stats;
  }

  void make_leaf(Tree &tree, std::size_t index, std::span<const std::uint32_t> rows,
                 std::vector<double> &leaf_out) {
    const double w = leaf_weight(tree.nodes[index].stats, opts_.l1_reg, opts_.l2_reg);
    tree.nodes[index].weight = w;
    for (auto r : rows)
      leaf_out[r] = w;
  }

  void grow_node(Tree &tree, std::size_t index, std::vector<std::uint32_t> rows, int depth,
                 std::vector<double> &leaf_out) {
    tree.nodes[index].stats = sum_stats(rows);

    SplitChoice split;
    if (depth < opts_.max_tree_depth && rows.size() > 1)
      split = best_split(rows);
    if (split.feature < 0) {
      make_leaf(tree, index, rows, leaf_out);
      return;
    }

    std::vector<std::uint32_t> left_rows, right_rows;
    const auto &bins = features_[static_cast<std::size_t>(split.feature)].bin;
    for (auto r : rows)
      (bins[r] <= split.last_left_bin ? left_rows : right_rows).push_back(r);

    // The recorded gain is recomputed from the children's own sums so that it
    // can be reproduced exactly from the stored node statistics.
    const GradStats left_stats = sum_stats(left_rows);
    const GradStats right_stats = sum_stats(right_rows);
    const double gain = split_gain(left_stats, right_stats, opts_.l2_reg);
    if (!(gain > 0.0)) {
      make_leaf(tree, index, rows, leaf_out);
      return;
    }
    rows.clear();
    rows.shrink_to_fit();

    const auto left = tree.nodes.size();
    tree.nodes.emplace_back();
    const auto right = tree.nodes.size();
    tree.nodes.emplace_back();
    auto &node = tree.nodes[index];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.gain = gain;
    node.left = static_cast<int>(left);
    node.right = static_cast<int>(right);

    grow_node(tree, left, std::move(left_rows), depth + 1, leaf_out);
    grow_node(tree, right, std::move(right_rows), depth + 1, leaf_out);
  }
};

} // namespace

TrainOutcome<TreeEnsembleParams> train_boosted_tree(const kernels::Matrix &x,
                                                    std::span<const double> y,
                                                    const TrainOptions &opts) {
  check_training_data(x, y);
  const std::size_t n = x.rows;
  TrainOutcome<TreeEnsembleParams> out;
  auto &model = out.params;
  model.shrinkage = opts.learn_rate;

  double positives = 0.0;
  for (double v : y)
    positives += v;
  const double rate = positives / static_cast<double>(n);
  model.base_score = std::log(rate / (1.0 - rate));

  const auto features = bin_features(x);
  std::vector<double> margin(n, model.base_score);
  std::vector<double> g(n), h(n), leaf(n);
  std::vector<std::uint32_t> all_rows(n);
  for (std::size_t i = 0; i < n; ++i)
    all_rows[i] = static_cast<std::uint32_t>(i);

  double prev = kernels::parallel::logistic_loss_sum(margin, y) / static_cast<double>(n);
  out.log.push_back({0, prev});

  TreeBuilder builder(features, g, h, opts);
  bool converged = false;
  for (int round = 1; round <= opts.max_iterations; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = kernels::sigmoid(margin[i]);
      g[i] = p - y[i];
      h[i] = p * (1.0 - p);
    }
    model.trees.push_back(builder.grow(all_rows, leaf));
    for (std::size_t i = 0; i < n; ++i)
      margin[i] += model.shrinkage * leaf[i];

    const double cur =
        kernels::parallel::logistic_loss_sum(margin, y) / static_cast<double>(n);
    out.log.push_back({round, cur});
    if (should_stop(prev, cur, opts.min_rel_progress)) {
      converged = true;
      break;
    }
    prev = cur;
  }
  if (!converged)
    out.warnings.push_back("ConvergenceWarning: boosting reached max_iterations=" +
                           std::to_string(opts.max_iterations) +
                           " with relative progress above min_rel_progress");
  return out;
}

} // namespace minibqml::train
