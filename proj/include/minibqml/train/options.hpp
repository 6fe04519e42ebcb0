#pragma once

#include "minibqml/sql/ast.hpp"
#include "minibqml/train/model_type.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace minibqml::train {

enum class SplitMethod { Random, NoSplit };

/// Fully-defaulted training configuration recorded in every artifact.
struct TrainOptions {
  ModelType model_type = ModelType::LogisticReg;
  std::string label_col = "label";
  SplitMethod split_method = SplitMethod::Random;
  double eval_fraction = 0.2;
  int max_iterations = 50;
  double learn_rate = 0.1;
  double min_rel_progress = 0.01;
  double l1_reg = 0.0;
  double l2_reg = 1.0;
  int max_tree_depth = 6;
  std::vector<int> hidden_units{64, 32};
  int batch_size = 256;
  std::uint64_t seed = 42;

  /// Defaults for `type`: learn_rate is 0.3 for boosted trees, 0.1 otherwise.
  static TrainOptions defaults(ModelType type, std::uint64_t seed = 42);

  /// Builds options from a validated OPTIONS map; `default_seed` applies when
  /// the map has no `seed` entry.
  static TrainOptions from_options(const sql::OptionsMap &options,
                                   std::uint64_t default_seed);

  /// Every option spelled out, in a fixed key order.
  sql::OptionsMap to_options_map() const;

  bool operator==(const TrainOptions &) const = default;
};

struct LogEntry {
  int iteration = 0;
  double loss = 0.0;
  bool operator==(const LogEntry &) const = default;
};

/// Progress-based early stopping shared by all trainers: stop when
/// (prev - cur) / prev < min_rel_progress, or when prev is 0.
bool should_stop(double prev, double cur, double min_rel_progress);

} // namespace minibqml::train
