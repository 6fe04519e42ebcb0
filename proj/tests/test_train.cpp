#include "minibqml/error.hpp"
#include "minibqml/kernels/kernels.hpp"
#include "minibqml/train/boosted_tree.hpp"
#include "minibqml/train/dnn.hpp"
#include "minibqml/train/logistic.hpp"
#include "minibqml/train/model.hpp"
#include "minibqml/train/split.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace minibqml;
using namespace minibqml::train;
using kernels::Matrix;

namespace {

Table id_table(std::size_t n) {
  std::string csv = "id,v\n";
  for (std::size_t i = 0; i < n; ++i)
    csv += std::to_string(i) + "," + std::to_string(i % 7) + "\n";
  return fixtures::csv_table(csv);
}

std::vector<std::int64_t> ids(const Table &t) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < t.row_count(); ++i)
    out.push_back(t.column("id").int_at(i));
  return out;
}

TrainOptions long_run(ModelType type, int iterations) {
  TrainOptions o = TrainOptions::defaults(type);
  o.max_iterations = iterations;
  o.min_rel_progress = 1e-300;
  return o;
}

double final_loss(const std::vector<LogEntry> &log) { return log.back().loss; }

double rel_error(const std::vector<double> &a, const std::vector<double> &b) {
  double diff = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-300});
}

} // namespace

// ---- split ----

TEST(Split, PaperSize) {
  EXPECT_EQ(eval_size(70'692, 0.2), 14'138u);
  auto s = split_random(id_table(70'692), 0.2, 42);
  EXPECT_EQ(s.eval_rows.row_count(), 14'138u);
  EXPECT_EQ(s.train_rows.row_count(), 56'554u);
  EXPECT_EQ(eval_size(100, 0.29), 29u);
}

TEST(Split, DegenerateSplits) {
  EXPECT_THROW(split_random(id_table(10), 0.05, 1), SplitError);
  EXPECT_THROW(split_random(id_table(1), 0.5, 1), SplitError);
  EXPECT_THROW(split_random(id_table(10), 0.0, 1), SplitError);
  EXPECT_THROW(split_random(id_table(10), 1.0, 1), SplitError);
}

TEST(Split, RandomizedProperties) {
  Rng rng(11);
  int checked = 0;
  while (checked < 200) {
    const std::size_t n = 2 + rng.below(400);
    const double f = 0.01 + 0.98 * rng.unit();
    const std::uint64_t seed = rng.next();
    const std::size_t expected = static_cast<std::size_t>(std::floor(n * f + 1e-9));
    Table t = id_table(n);
    if (expected == 0 || expected == n) {
      EXPECT_THROW(split_random(t, f, seed), SplitError);
      continue;
    }
    ++checked;
    auto s = split_random(t, f, seed);
    EXPECT_EQ(s.seed_used, seed);
    ASSERT_EQ(s.eval_rows.row_count(), expected) << n << " " << f;
    ASSERT_EQ(s.train_rows.row_count(), n - expected);
    auto e = ids(s.eval_rows), tr = ids(s.train_rows);
    std::vector<std::int64_t> all(e);
    all.insert(all.end(), tr.begin(), tr.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < n; ++i)
      ASSERT_EQ(all[i], static_cast<std::int64_t>(i));
    auto again = split_random(t, f, seed);
    ASSERT_EQ(ids(again.eval_rows), e);
    ASSERT_EQ(ids(again.train_rows), tr);
    // Other columns travel with their row.
    for (std::size_t i = 0; i < s.eval_rows.row_count(); ++i)
      ASSERT_EQ(s.eval_rows.column("v").int_at(i), e[i] % 7);
  }
}

TEST(Split, SeedChangesAssignment) {
  Table t = id_table(200);
  EXPECT_NE(ids(split_random(t, 0.2, 1).eval_rows), ids(split_random(t, 0.2, 2).eval_rows));
}

// ---- logistic regression ----

TEST(Logistic, TwoPointSeparable) {
  Matrix x(2, 1);
  x.data = {-1.0, 1.0};
  std::vector<double> y = {0.0, 1.0};
  TrainOptions o = long_run(ModelType::LogisticReg, 200);
  o.l2_reg = 0.0;
  auto out = train_logistic(x, y, o);
  EXPECT_GT(out.params.weights[0], 0.0);
  EXPECT_LT(final_loss(out.log), std::log(2.0));
  EXPECT_EQ(out.log.front().loss, std::log(2.0));
}

TEST(Logistic, LargeL1ZeroesWeights) {
  auto data = fixtures::logistic_data(300, 5, 4);
  TrainOptions o = long_run(ModelType::LogisticReg, 100);
  o.l1_reg = 1e3;
  auto out = train_logistic(data.x, data.y, o);
  for (double w : out.params.weights)
    EXPECT_EQ(w, 0.0);
  EXPECT_NE(out.params.intercept, 0.0);
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto data = fixtures::logistic_data(40, 4, 100 + seed);
    Rng rng(seed);
    LinearParams p;
    p.weights.resize(4);
    for (auto &w : p.weights)
      w = rng.symmetric(1.5);
    p.intercept = rng.symmetric(1.0);
    const double l2 = rng.unit() * 2.0;
    auto obj = logistic_objective(data.x, data.y, p, l2);

    const double h = 1e-5;
    std::vector<double> analytic = obj.grad_weights, numeric;
    analytic.push_back(obj.grad_intercept);
    for (std::size_t j = 0; j <= p.weights.size(); ++j) {
      LinearParams plus = p, minus = p;
      double &vp = j < p.weights.size() ? plus.weights[j] : plus.intercept;
      double &vm = j < p.weights.size() ? minus.weights[j] : minus.intercept;
      vp += h;
      vm -= h;
      numeric.push_back((logistic_objective(data.x, data.y, plus, l2).loss -
                         logistic_objective(data.x, data.y, minus, l2).loss) /
                        (2 * h));
    }
    EXPECT_LT(rel_error(analytic, numeric), 1e-5) << "seed " << seed;
  }
}

TEST(Logistic, MoreIterationsNeverHurt) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto data = fixtures::logistic_data(500, 6, seed);
    double prev = INFINITY;
    for (int iters : {5, 10, 20, 40, 80, 160}) {
      auto out = train_logistic(data.x, data.y, long_run(ModelType::LogisticReg, iters));
      EXPECT_LE(final_loss(out.log), prev);
      EXPECT_LE(final_loss(out.log), out.log.front().loss);
      prev = final_loss(out.log);
    }
  }
}

TEST(Logistic, ConvergenceWarningAndDataErrors) {
  auto data = fixtures::logistic_data(200, 3, 9);
  auto out = train_logistic(data.x, data.y, long_run(ModelType::LogisticReg, 2));
  EXPECT_EQ(out.log.size(), 3u);
  EXPECT_FALSE(out.warnings.empty());
  std::vector<double> ones(data.y.size(), 1.0);
  EXPECT_THROW(train_logistic(data.x, ones, TrainOptions{}), DataError);
  EXPECT_THROW(train_logistic(Matrix(), std::vector<double>{}, TrainOptions{}), DataError);
}

// ---- boosted trees ----

TEST(BoostedTree, LeafWeightCases) {
  kernels::GradStats s{2.0, 3.0, 4};
  EXPECT_DOUBLE_EQ(leaf_weight(s, 0.0, 2.0), -0.4);
  EXPECT_DOUBLE_EQ(leaf_weight(s, 0.1, 2.0), -0.38);
  EXPECT_EQ(leaf_weight(kernels::GradStats{0.05, 1.0, 1}, 0.1, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(leaf_weight(kernels::GradStats{-2.0, 3.0, 4}, 0.1, 2.0), 0.38);
}

TEST(BoostedTree, SplitGainFormula) {
  const kernels::GradStats l{1.5, 2.0, 3}, r{-2.5, 1.0, 2};
  const double lambda = 0.5;
  const double expected =
      0.5 * (1.5 * 1.5 / 2.5 + 2.5 * 2.5 / 1.5 - 1.0 * 1.0 / 3.5);
  EXPECT_NEAR(split_gain(l, r, lambda), expected, 1e-15);
}

TEST(BoostedTree, SingleFeatureThreshold) {
  Matrix x(6, 1);
  x.data = {0.1, 0.9, 0.2, 0.6, 0.4, 0.7};
  std::vector<double> y = {0, 1, 0, 1, 0, 1};
  auto out = train_boosted_tree(x, y, TrainOptions::defaults(ModelType::BoostedTreeClassifier));
  ASSERT_FALSE(out.params.trees.empty());
  const TreeNode &root = out.params.trees[0].nodes[0];
  ASSERT_FALSE(root.is_leaf());
  EXPECT_EQ(root.feature, 0);
  EXPECT_GT(root.threshold, 0.4);
  EXPECT_LE(root.threshold, 0.6);
  EXPECT_GT(root.gain, 0.0);
  EXPECT_NEAR(out.params.base_score, 0.0, 1e-15);
}

TEST(BoostedTree, MonotoneLossAndNodeInvariants) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto data = fixtures::logistic_data(300, 4, 50 + seed, 1.5);
    // Coarsen one column so ties and repeated values are exercised.
    for (std::size_t i = 0; i < data.x.rows; ++i)
      data.x(i, 1) = std::round(data.x(i, 1));
    TrainOptions o = long_run(ModelType::BoostedTreeClassifier, 150);
    o.max_tree_depth = 3 + static_cast<int>(seed % 3);
    o.l1_reg = seed % 2 ? 0.05 : 0.0;
    auto out = train_boosted_tree(data.x, data.y, o);
    ASSERT_GE(out.log.size(), 2u);
    for (std::size_t i = 1; i < out.log.size(); ++i)
      ASSERT_LE(out.log[i].loss, out.log[i - 1].loss + 1e-9) << "seed " << seed << " round " << i;
    EXPECT_LT(final_loss(out.log), out.log.front().loss);

    for (const Tree &tree : out.params.trees) {
      EXPECT_LE(tree.depth(), o.max_tree_depth);
      for (const TreeNode &node : tree.nodes) {
        if (node.is_leaf()) {
          EXPECT_EQ(node.weight, leaf_weight(node.stats, o.l1_reg, o.l2_reg));
          continue;
        }
        ASSERT_LT(node.feature, static_cast<int>(data.x.cols));
        EXPECT_GT(node.gain, 0.0);
        const auto &l = tree.nodes[static_cast<std::size_t>(node.left)].stats;
        const auto &r = tree.nodes[static_cast<std::size_t>(node.right)].stats;
        EXPECT_EQ(node.gain, split_gain(l, r, o.l2_reg));
        EXPECT_EQ(l.count + r.count, node.stats.count);
        EXPECT_NEAR(l.grad + r.grad, node.stats.grad, 1e-9);
      }
    }

    // The ensemble margin reproduces the loss recorded for the last round.
    double loss = 0;
    for (std::size_t i = 0; i < data.x.rows; ++i)
      loss += kernels::logistic_loss(out.params.margin(data.x.row(i)), data.y[i]);
    EXPECT_NEAR(loss / static_cast<double>(data.x.rows), final_loss(out.log), 1e-9);
  }
}

// ---- DNN ----

// XOR in the +-1 coding that standardization produces. Early stopping is
// disabled so every run gets the full 500 epochs. A 2-4-1 ReLU net falls
// into a dead-unit plateau on roughly one seed in five, so the success rate
// is measured over many seeds instead of five.
TEST(Dnn, LearnsXor) {
  Matrix x(4, 2);
  x.data = {-1, -1, -1, 1, 1, -1, 1, 1};
  std::vector<double> y = {0, 1, 1, 0};
  int solved = 0;
  const int seeds = 100;
  for (int seed = 1; seed <= seeds; ++seed) {
    TrainOptions o = TrainOptions::defaults(ModelType::DnnClassifier);
    o.max_iterations = 500;
    o.min_rel_progress = -INFINITY;
    o.hidden_units = {4};
    o.l2_reg = 0.0;
    o.batch_size = 4;
    o.seed = static_cast<std::uint64_t>(seed);
    auto out = train_dnn(x, y, o);
    ASSERT_EQ(out.log.size(), 501u);
    const auto m = out.params.margins(x);
    bool ok = true;
    for (std::size_t i = 0; i < 4; ++i)
      ok = ok && ((kernels::sigmoid(m[i]) >= 0.5) == (y[i] == 1.0));
    solved += ok;
  }
  RecordProperty("xor_solved_of_100", solved);
  EXPECT_GE(solved, 70);
}

TEST(Dnn, WiderNetSolvesXorOnEverySeed) {
  Matrix x(4, 2);
  x.data = {-1, -1, -1, 1, 1, -1, 1, 1};
  std::vector<double> y = {0, 1, 1, 0};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainOptions o = TrainOptions::defaults(ModelType::DnnClassifier);
    o.max_iterations = 500;
    o.min_rel_progress = -INFINITY;
    o.hidden_units = {16};
    o.l2_reg = 0.0;
    o.batch_size = 4;
    o.seed = seed;
    const auto m = train_dnn(x, y, o).params.margins(x);
    for (std::size_t i = 0; i < 4; ++i)
      EXPECT_EQ(m[i] >= 0.0, y[i] == 1.0) << "seed " << seed << " row " << i;
  }
}

TEST(Dnn, GradientMatchesFiniteDifferences) {
  const int hidden[] = {3};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto data = fixtures::logistic_data(12, 3, 500 + seed);
    DnnParams p = init_dnn(3, hidden, seed);
    Rng rng(seed * 7 + 1);
    for (auto &b : p.biases)
      for (auto &v : b)
        v = rng.symmetric(0.5);
    const double l2 = 0.3;
    auto obj = dnn_objective(data.x, data.y, p, l2, data.x.rows);

    std::vector<double> analytic, numeric;
    const double h = 1e-5;
    auto probe = [&](auto select) {
      DnnParams plus = p, minus = p;
      select(plus) += h;
      select(minus) -= h;
      numeric.push_back((dnn_objective(data.x, data.y, plus, l2, data.x.rows).loss -
                         dnn_objective(data.x, data.y, minus, l2, data.x.rows).loss) /
                        (2 * h));
    };
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
      for (std::size_t k = 0; k < p.weights[l].data.size(); ++k) {
        analytic.push_back(obj.grad.weights[l].data[k]);
        probe([&](DnnParams &q) -> double & { return q.weights[l].data[k]; });
      }
      for (std::size_t k = 0; k < p.biases[l].size(); ++k) {
        analytic.push_back(obj.grad.biases[l][k]);
        probe([&](DnnParams &q) -> double & { return q.biases[l][k]; });
      }
    }
    EXPECT_EQ(analytic.size(), 3u * 3 + 3 + 3 + 1);
    EXPECT_LT(rel_error(analytic, numeric), 1e-4) << "seed " << seed;
  }
}

TEST(Dnn, NoHiddenLayerMatchesLogistic) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto data = fixtures::logistic_data(600, 5, 900 + seed);
    auto lin = train_logistic(data.x, data.y, long_run(ModelType::LogisticReg, 400));
    TrainOptions o = long_run(ModelType::DnnClassifier, 200);
    o.hidden_units = {};
    o.batch_size = 64;
    auto net = train_dnn(data.x, data.y, o);
    EXPECT_NEAR(final_loss(net.log), final_loss(lin.log), 0.02) << "seed " << seed;
  }
}

TEST(Dnn, InitShapesAndScale) {
  const int hidden[] = {5, 2};
  DnnParams p = init_dnn(4, hidden, 3);
  ASSERT_EQ(p.weights.size(), 3u);
  EXPECT_EQ(p.weights[0].rows, 5u);
  EXPECT_EQ(p.weights[0].cols, 4u);
  EXPECT_EQ(p.weights[2].rows, 1u);
  EXPECT_EQ(p.weights[2].cols, 2u);
  for (double w : p.weights[0].data)
    EXPECT_LE(std::abs(w), std::sqrt(6.0 / 4));
  for (const auto &b : p.biases)
    for (double v : b)
      EXPECT_EQ(v, 0.0);
  EXPECT_EQ(init_dnn(4, hidden, 3), p);
}

// ---- whole-model behaviour ----

namespace {

Table brfss_table(std::size_t n, std::uint64_t seed) {
  return fixtures::csv_table(fixtures::brfss_like_csv(n, seed), "diabetes");
}

TrainOptions model_options(ModelType type) {
  TrainOptions o = TrainOptions::defaults(type, 7);
  o.label_col = "Diabetes_binary";
  o.max_iterations = 15;
  if (type == ModelType::DnnClassifier)
    o.hidden_units = {8, 4};
  return o;
}

const ModelType kTypes[] = {ModelType::LogisticReg, ModelType::BoostedTreeClassifier,
                            ModelType::DnnClassifier};

} // namespace

TEST(Model, TrainingIsBitDeterministic) {
  Table t = brfss_table(1500, 1);
  for (ModelType type : kTypes) {
    auto a = train_model("m", t, model_options(type));
    auto b = train_model("m", t, model_options(type));
    EXPECT_TRUE(a.params == b.params) << to_string(type);
    EXPECT_EQ(a.training_log, b.training_log);
    EXPECT_TRUE(a.eval_rows.same_contents(b.eval_rows));
    EXPECT_EQ(predict_proba(a, t), predict_proba(b, t));
  }
}

TEST(Model, ProbabilitiesStrictlyInsideUnitInterval) {
  Table t = brfss_table(1000, 2);
  // Extreme feature values push raw margins far past the clip.
  std::string extreme = fixtures::brfss_like_csv(0, 0);
  extreme += "1,1,1,1,1000000,1,1,1,1,1,1,1,1,1,5,30,30,1,1,13,6,8\n";
  extreme += "0,0,0,0,-1000000,0,0,0,0,0,0,0,0,0,1,0,0,0,0,1,1,1\n";
  Table probe = fixtures::csv_table(extreme);
  for (ModelType type : kTypes) {
    auto m = train_model("m", t, model_options(type));
    for (const Table *rows : {&t, &probe})
      for (double p : predict_proba(m, *rows)) {
        ASSERT_GT(p, 0.0) << to_string(type);
        ASSERT_LT(p, 1.0) << to_string(type);
      }
  }
}

TEST(Model, DegenerateParameterPredictions) {
  Table t = brfss_table(800, 3);
  TrainOptions o = model_options(ModelType::LogisticReg);
  o.split_method = SplitMethod::NoSplit;
  auto lin = train_model("m", t, o);
  auto &lp = std::get<LinearParams>(lin.params);
  std::fill(lp.weights.begin(), lp.weights.end(), 0.0);
  lp.intercept = 0.0;
  for (double p : predict_proba(lin, t))
    ASSERT_EQ(p, 0.5);

  o.model_type = ModelType::BoostedTreeClassifier;
  auto tree = train_model("m", t, o);
  std::get<TreeEnsembleParams>(tree.params).trees.clear();
  double positives = 0;
  for (std::size_t i = 0; i < t.row_count(); ++i)
    positives += static_cast<double>(t.column("Diabetes_binary").int_at(i));
  const double rate = positives / static_cast<double>(t.row_count());
  for (double p : predict_proba(tree, t))
    ASSERT_NEAR(p, rate, 1e-12);
}

TEST(Model, NoSplitWarnsAndNullLabelsDropped) {
  std::string csv = fixtures::brfss_like_csv(300, 4);
  csv += ",1,1,1,30,1,1,1,1,1,1,1,1,1,3,0,0,0,1,5,3,3\n";
  Table t = fixtures::csv_table(csv);
  TrainOptions o = model_options(ModelType::LogisticReg);
  o.split_method = SplitMethod::NoSplit;
  auto m = train_model("m", t, o);
  EXPECT_TRUE(m.evaluates_on_training_data());
  EXPECT_EQ(m.eval_rows.row_count(), 300u);
  EXPECT_FALSE(m.warnings.empty());

  auto r = train_model("m", t, model_options(ModelType::LogisticReg));
  EXPECT_EQ(r.eval_rows.row_count(), 60u);
  EXPECT_EQ(r.seed_used, 7u);
}

TEST(Model, FeatureImportanceRequiresTrees) {
  Table t = brfss_table(600, 5);
  auto lin = train_model("m", t, model_options(ModelType::LogisticReg));
  EXPECT_THROW(feature_importance(lin), ModelTypeError);
  auto tree = train_model("m", t, model_options(ModelType::BoostedTreeClassifier));
  auto imp = feature_importance(tree);
  EXPECT_EQ(imp.size(), fixtures::brfss_columns().size() - 1);
  for (std::size_t i = 1; i < imp.size(); ++i)
    EXPECT_GE(imp[i - 1].second, imp[i].second);
  for (const auto &entry : imp)
    EXPECT_GE(entry.second, 0.0);
  EXPECT_GT(imp.front().second, 0.0);
}
