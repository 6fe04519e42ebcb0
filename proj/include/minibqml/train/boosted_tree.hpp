#pragma once

#include "minibqml/kernels/matrix.hpp"
#include "minibqml/train/logistic.hpp"

#include <span>
#include <vector>

namespace minibqml::train {

/// Tree node. Internal nodes route x[feature] < threshold to `left`.
/// `stats` holds the (G, H) sums of the rows that reached the node. A leaf's
/// `weight` derives from its own stats; an internal node's `gain` equals
/// split_gain(left child stats, right child stats, l2) exactly.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  double weight = 0.0;
  kernels::GradStats stats;
  int left = -1;
  int right = -1;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode &o) const {
    return feature == o.feature && threshold == o.threshold && gain == o.gain &&
           weight == o.weight && stats.grad == o.stats.grad &&
           stats.hess == o.stats.hess && left == o.left && right == o.right;
  }
};

/// Nodes stored flat; index 0 is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> row) const;
  int depth() const;
  bool operator==(const Tree &) const = default;
};

struct TreeEnsembleParams {
  double base_score = 0.0; ///< log-odds of the training positive rate
  double shrinkage = 0.3;
  std::vector<Tree> trees;

  /// base_score + shrinkage * sum of leaf weights (unclipped).
  double margin(std::span<const double> row) const;
  bool operator==(const TreeEnsembleParams &) const = default;
};

/// -sign(G) * max(|G| - l1, 0) / (H + l2)
double leaf_weight(kernels::GradStats s, double l1, double l2);

/// 0.5 * [G_L^2/(H_L+l2) + G_R^2/(H_R+l2) - (G_L+G_R)^2/(H_L+H_R+l2)]
double split_gain(kernels::GradStats left, kernels::GradStats right, double l2);

/// Maps every design-matrix column onto its sorted distinct values.
std::vector<kernels::BinnedFeature> bin_features(const kernels::Matrix &x);

/// Second-order gradient boosting on the logistic loss with exact greedy
/// split search. A split is kept only when its gain is strictly positive;
/// ties go to the lowest feature index, then the lowest threshold.
TrainOutcome<TreeEnsembleParams> train_boosted_tree(const kernels::Matrix &x,
                                                    std::span<const double> y,
                                                    const TrainOptions &opts);

} // namespace minibqml::train
