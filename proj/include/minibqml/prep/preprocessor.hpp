#pragma once

#include "minibqml/kernels/matrix.hpp"
#include "minibqml/table.hpp"
#include "minibqml/train/model_type.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace minibqml::prep {

/// INT64 columns with at most this many distinct non-null training values are
/// treated as categorical.
inline constexpr std::size_t kMaxCategoricalIntLevels = 13;

enum class FeatureKind { Numeric, Categorical };

/// One source column and the span of design-matrix columns it produces.
/// Numeric features occupy one column; categorical features occupy one column
/// per vocabulary entry followed by the MISSING bucket.
struct FeatureSpec {
  std::string name;
  ColumnType source_type = ColumnType::Float64;
  FeatureKind kind = FeatureKind::Numeric;
  std::size_t offset = 0;
  std::size_t width = 1;

  // Numeric
  double mean = 0.0;
  double stddev = 1.0; ///< population stddev; 1.0 for constant columns
  double impute_value = 0.0;

  // Categorical; values are the canonical cell text (decimal for INT64)
  std::vector<std::string> vocabulary;

  bool operator==(const FeatureSpec &) const = default;
};

struct PreprocessorState {
  std::vector<FeatureSpec> features;
  bool standardize = false;
  std::string label_col;

  std::size_t output_width() const;
  /// Human-readable names of the design-matrix columns
  /// (`col` for numeric, `col=value` / `col=__MISSING__` for one-hot).
  std::vector<std::string> output_names() const;
  /// Feature whose span contains design-matrix column `index`.
  const FeatureSpec &feature_of(std::size_t index) const;

  bool operator==(const PreprocessorState &) const = default;
};

/// Checks that `label` is numeric and holds only 0/1 among non-null cells,
/// with both classes present. Throws LabelError otherwise.
void validate_label(const Table &rows, std::string_view label_col);

/// Fits imputation, standardization, and vocabularies on training rows only.
/// Standardization is on for logistic_reg and dnn_classifier.
/// Throws LabelError or EmptyError.
PreprocessorState fit(const Table &train, std::string_view label_col, ModelType type);

struct Design {
  kernels::Matrix x;
  std::vector<double> y; ///< empty unless labels were requested
};

/// Applies a fitted state. Numeric NULLs take the imputed mean, categorical
/// NULL or unseen values hit the MISSING bucket. Columns not named by the
/// state are ignored. Throws SchemaError on a missing or mistyped feature
/// column, or (with_labels) a missing, NULL, or non-binary label.
Design transform(const PreprocessorState &state, const Table &rows, bool with_labels);

} // namespace minibqml::prep
