#include "minibqml/sql/options.hpp"

#include "minibqml/error.hpp"
#include "minibqml/table.hpp"

#include <array>
#include <cmath>

namespace minibqml::sql {

namespace {

constexpr std::array kKnownOptions = {
    "model_type",   "input_label_cols", "data_split_method",
    "data_split_eval_fraction", "max_iterations", "learn_rate",
    "min_rel_progress", "l1_reg", "l2_reg",
    "max_tree_depth", "hidden_units", "batch_size",
    "seed",
};

[[noreturn]] void fail(std::string_view key, const std::string &why, SourcePos pos) {
  throw OptionError("option '" + std::string(key) + "' " + why, pos.line, pos.column);
}

double number(std::string_view key, const OptionValue &v, SourcePos pos) {
  if (auto *n = std::get_if<NumberLit>(&v))
    return n->value;
  fail(key, "expects a number", pos);
}

bool integer_valued(double x) { return std::isfinite(x) && std::floor(x) == x; }

} // namespace

bool is_known_option(std::string_view key) {
  for (std::string_view k : kKnownOptions)
    if (k == key)
      return true;
  return false;
}

OptionValue validate_option(std::string_view key, OptionValue value, SourcePos pos) {
  if (!is_known_option(key))
    fail(key, "is not a recognized option", pos);

  if (key == "model_type") {
    auto *s = std::get_if<std::string>(&value);
    if (!s)
      fail(key, "expects a string", pos);
    std::string lowered = to_lower(*s);
    if (lowered != "logistic_reg" && lowered != "boosted_tree_classifier" &&
        lowered != "dnn_classifier")
      fail(key, "must be one of 'logistic_reg', 'boosted_tree_classifier', "
                "'dnn_classifier' (got '" + *s + "')",
           pos);
    return lowered;
  }
  if (key == "input_label_cols") {
    auto *list = std::get_if<std::vector<std::string>>(&value);
    if (!list)
      fail(key, "expects a list of strings", pos);
    if (list->size() != 1)
      fail(key, "must name exactly one label column", pos);
    return value;
  }
  if (key == "data_split_method") {
    auto *s = std::get_if<std::string>(&value);
    if (!s)
      fail(key, "expects a string", pos);
    std::string upper = to_upper(*s);
    if (upper != "RANDOM" && upper != "NO_SPLIT")
      fail(key, "must be 'RANDOM' or 'NO_SPLIT' (got '" + *s + "')", pos);
    return upper;
  }
  if (key == "data_split_eval_fraction") {
    double x = number(key, value, pos);
    if (!(x > 0.0 && x < 1.0))
      fail(key, "must lie strictly between 0 and 1", pos);
    return value;
  }
  if (key == "max_iterations" || key == "max_tree_depth" || key == "batch_size") {
    double x = number(key, value, pos);
    if (!integer_valued(x) || x < 1.0)
      fail(key, "must be a positive integer", pos);
    return value;
  }
  if (key == "seed") {
    double x = number(key, value, pos);
    if (!integer_valued(x) || x < 0.0 || x > 9007199254740992.0)
      fail(key, "must be a nonnegative integer", pos);
    return value;
  }
  if (key == "learn_rate" || key == "min_rel_progress") {
    double x = number(key, value, pos);
    if (!(x > 0.0) || !std::isfinite(x))
      fail(key, "must be a positive number", pos);
    return value;
  }
  if (key == "l1_reg" || key == "l2_reg") {
    double x = number(key, value, pos);
    if (!(x >= 0.0) || !std::isfinite(x))
      fail(key, "must be a nonnegative number", pos);
    return value;
  }
  // hidden_units
  if (auto *strings = std::get_if<std::vector<std::string>>(&value);
      strings && strings->empty())
    return std::vector<NumberLit>{};
  auto *list = std::get_if<std::vector<NumberLit>>(&value);
  if (!list)
    fail(key, "expects a list of positive integers", pos);
  for (const auto &n : *list)
    if (!integer_valued(n.value) || n.value < 1.0)
      fail(key, "must contain only positive integers", pos);
  return value;
}

} // namespace minibqml::sql
