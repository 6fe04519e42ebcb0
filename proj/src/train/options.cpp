#include "minibqml/train/options.hpp"

#include <cmath>

namespace minibqml {

std::string_view to_string(ModelType type) {
  switch (type) {
  case ModelType::LogisticReg:
    return "logistic_reg";
  case ModelType::BoostedTreeClassifier:
    return "boosted_tree_classifier";
  case ModelType::DnnClassifier:
    return "dnn_classifier";
  }
  return "?";
}

std::optional<ModelType> parse_model_type(std::string_view name) {
  for (auto t : {ModelType::LogisticReg, ModelType::BoostedTreeClassifier,
                 ModelType::DnnClassifier})
    if (to_string(t) == name)
      return t;
  return std::nullopt;
}

} // namespace minibqml

namespace minibqml::train {

namespace {

double number(const sql::OptionValue &v) { return std::get<sql::NumberLit>(v).value; }

sql::NumberLit integer(double v) { return sql::NumberLit{v, true}; }
sql::NumberLit real(double v) { return sql::NumberLit{v, false}; }

} // namespace

TrainOptions TrainOptions::defaults(ModelType type, std::uint64_t seed) {
  TrainOptions o;
  o.model_type = type;
  o.learn_rate = type == ModelType::BoostedTreeClassifier ? 0.3 : 0.1;
  o.seed = seed;
  return o;
}

TrainOptions TrainOptions::from_options(const sql::OptionsMap &options,
                                        std::uint64_t default_seed) {
  ModelType type = ModelType::LogisticReg;
  if (auto *v = options.find("model_type"))
    type = *parse_model_type(std::get<std::string>(*v));
  TrainOptions o = defaults(type, default_seed);

  for (const auto &[key, value] : options.entries) {
    if (key == "input_label_cols")
      o.label_col = std::get<std::vector<std::string>>(value).front();
    else if (key == "data_split_method")
      o.split_method = std::get<std::string>(value) == "NO_SPLIT" ? SplitMethod::NoSplit
                                                                  : SplitMethod::Random;
    else if (key == "data_split_eval_fraction")
      o.eval_fraction = number(value);
    else if (key == "max_iterations")
      o.max_iterations = static_cast<int>(number(value));
    else if (key == "learn_rate")
      o.learn_rate = number(value);
    else if (key == "min_rel_progress")
      o.min_rel_progress = number(value);
    else if (key == "l1_reg")
      o.l1_reg = number(value);
    else if (key == "l2_reg")
      o.l2_reg = number(value);
    else if (key == "max_tree_depth")
      o.max_tree_depth = static_cast<int>(number(value));
    else if (key == "batch_size")
      o.batch_size = static_cast<int>(number(value));
    else if (key == "seed")
      o.seed = static_cast<std::uint64_t>(number(value));
    else if (key == "hidden_units") {
      o.hidden_units.clear();
      for (const auto &n : std::get<std::vector<sql::NumberLit>>(value))
        o.hidden_units.push_back(static_cast<int>(n.value));
    }
  }
  return o;
}

sql::OptionsMap TrainOptions::to_options_map() const {
  sql::OptionsMap m;
  m.set("model_type", std::string(to_string(model_type)));
  m.set("input_label_cols", std::vector<std::string>{label_col});
  m.set("data_split_method",
        std::string(split_method == SplitMethod::NoSplit ? "NO_SPLIT" : "RANDOM"));
  m.set("data_split_eval_fraction", real(eval_fraction));
  m.set("max_iterations", integer(max_iterations));
  m.set("learn_rate", real(learn_rate));
  m.set("min_rel_progress", real(min_rel_progress));
  m.set("l1_reg", real(l1_reg));
  m.set("l2_reg", real(l2_reg));
  m.set("max_tree_depth", integer(max_tree_depth));
  std::vector<sql::NumberLit> units;
  for (int u : hidden_units)
    units.push_back(integer(u));
  m.set("hidden_units", units);
  m.set("batch_size", integer(batch_size));
  m.set("seed", integer(static_cast<double>(seed)));
  return m;
}

bool should_stop(double prev, double cur, double min_rel_progress) {
  if (prev == 0.0)
    return true;
  return (prev - cur) / prev < min_rel_progress;
}

} // namespace minibqml::train
