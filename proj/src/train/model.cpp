#include "minibqml/train/model.hpp"

#include "minibqml/error.hpp"
#include "minibqml/kernels/kernels.hpp"
#include "minibqml/train/split.hpp"

#include <algorithm>
#include <numeric>

namespace minibqml::train {

namespace {

Table drop_null_labels(const Table &input, const std::string &label) {
  const Column &col = input.column(label);
  std::vector<std::size_t> keep;
  keep.reserve(input.row_count());
  for (std::size_t i = 0; i < input.row_count(); ++i)
    if (!col.is_null(i))
      keep.push_back(i);
  if (keep.size() == input.row_count())
    return input;
  Table out = input.take(keep);
  out.set_name(input.name());
  return out;
}

} // namespace

ModelArtifact train_model(std::string name, const Table &input, const TrainOptions &options) {
  prep::validate_label(input, options.label_col);
  Table rows = drop_null_labels(input, options.label_col);
  if (rows.row_count() == 0)
    throw EmptyError("no rows with a non-NULL label");

  ModelArtifact art;
  art.name = std::move(name);
  art.options = options;
  art.seed_used = options.seed;
  // Canonical label spelling is the one in the data.
  art.options.label_col = rows.column(options.label_col).name();
  for (const auto &c : rows.columns())
    art.input_schema.push_back({c.name(), c.type()});

  Table train_rows;
  if (options.split_method == SplitMethod::Random) {
    auto split = split_random(rows, options.eval_fraction, options.seed);
    train_rows = std::move(split.train_rows);
    art.eval_rows = std::move(split.eval_rows);
  } else {
    train_rows = rows;
    art.eval_rows = std::move(rows);
  }
  art.eval_rows.set_name(art.name + "_eval");

  art.preprocessor = prep::fit(train_rows, art.options.label_col, options.model_type);
  const auto design = prep::transform(art.preprocessor, train_rows, true);

  auto finish = [&](auto outcome) {
    art.params = std::move(outcome.params);
    art.training_log = std::move(outcome.log);
    art.warnings = std::move(outcome.warnings);
  };
  switch (options.model_type) {
  case ModelType::LogisticReg:
    finish(train_logistic(design.x, design.y, options));
    break;
  case ModelType::BoostedTreeClassifier:
    finish(train_boosted_tree(design.x, design.y, options));
    break;
  case ModelType::DnnClassifier:
    finish(train_dnn(design.x, design.y, options));
    break;
  }
  if (options.split_method == SplitMethod::NoSplit)
    art.warnings.push_back(
        "NO_SPLIT: evaluation without input uses the training data");
  return art;
}

std::vector<double> predict_margins(const ModelParams &params, const kernels::Matrix &x) {
  return std::visit(
      [&](const auto &p) -> std::vector<double> {
        using P = std::decay_t<decltype(p)>;
        std::vector<double> m(x.rows);
        if constexpr (std::is_same_v<P, LinearParams>) {
          if (p.weights.size() != x.cols)
            throw SchemaError("design width does not match the model");
          kernels::parallel::affine(x, p.weights, p.intercept, m);
        } else if constexpr (std::is_same_v<P, TreeEnsembleParams>) {
#pragma omp parallel for schedule(static)
          for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x.rows); ++i)
            m[static_cast<std::size_t>(i)] = p.margin(x.row(static_cast<std::size_t>(i)));
        } else {
          if (p.weights.empty() || p.weights.front().cols != x.cols)
            throw SchemaError("design width does not match the model");
          m = p.margins(x);
        }
        return m;
      },
      params);
}

std::vector<double> predict_proba(const ModelArtifact &artifact, const Table &rows) {
  const auto design = prep::transform(artifact.preprocessor, rows, false);
  auto m = predict_margins(artifact.params, design.x);
  for (double &v : m)
    v = kernels::sigmoid(std::clamp(v, -kMarginClip, kMarginClip));
  return m;
}

std::vector<std::pair<std::string, double>> feature_importance(const ModelArtifact &artifact) {
  const auto *trees = std::get_if<TreeEnsembleParams>(&artifact.params);
  if (trees == nullptr)
    throw ModelTypeError("feature importance requires a boosted_tree_classifier model, got " +
                         std::string(to_string(artifact.model_type())));
  const auto &features = artifact.preprocessor.features;
  std::vector<double> gain(features.size(), 0.0);
  // Preorder, so the summation order does not depend on the node layout.
  std::vector<int> stack;
  for (const auto &tree : trees->trees) {
    if (tree.nodes.empty())
      continue;
    stack.assign(1, 0);
    while (!stack.empty()) {
      const TreeNode &node = tree.nodes[static_cast<std::size_t>(stack.back())];
      stack.pop_back();
      if (node.is_leaf())
        continue;
      const auto &spec =
          artifact.preprocessor.feature_of(static_cast<std::size_t>(node.feature));
      gain[static_cast<std::size_t>(&spec - features.data())] += node.gain;
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });
  std::vector<std::pair<std::string, double>> out;
  for (auto i : order)
    out.emplace_back(features[i].name, gain[i]);
  return out;
}

} // namespace minibqml::train
