#include "minibqml/prep/preprocessor.hpp"

#include "minibqml/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace minibqml::prep {

namespace {

constexpr const char *kMissingBucket = "__MISSING__";

std::string cell_key(const Column &c, std::size_t row) {
  return c.type() == ColumnType::Int64 ? std::to_string(c.int_at(row))
                                       : c.string_at(row);
}

void check_feature_column(const FeatureSpec &f, const Column &c) {
  bool ok = f.kind == FeatureKind::Numeric ? c.type() != ColumnType::String
                                           : c.type() == f.source_type;
  if (!ok)
    throw SchemaError("column '" + f.name + "' has type " +
                      std::string(to_string(c.type())) + " but the model expects " +
                      std::string(to_string(f.source_type)));
}

double label_value(const Column &label, std::size_t row) {
  if (label.is_null(row))
    throw SchemaError("label column '" + label.name() + "' contains NULL");
  double v = label.numeric_at(row);
  if (v != 0.0 && v != 1.0)
    throw SchemaError("label column '" + label.name() + "' contains non-binary value");
  return v;
}

} // namespace

std::size_t PreprocessorState::output_width() const {
  std::size_t w = 0;
  for (const auto &f : features)
    w += f.width;
  return w;
}

std::vector<std::string> PreprocessorState::output_names() const {
  std::vector<std::string> names;
  for (const auto &f : features) {
    if (f.kind == FeatureKind::Numeric) {
      names.push_back(f.name);
      continue;
    }
    for (const auto &v : f.vocabulary)
      names.push_back(f.name + "=" + v);
    names.push_back(f.name + "=" + kMissingBucket);
  }
  return names;
}

const FeatureSpec &PreprocessorState::feature_of(std::size_t index) const {
  for (const auto &f : features)
    if (index >= f.offset && index < f.offset + f.width)
      return f;
  throw SchemaError("design column " + std::to_string(index) + " out of range");
}

void validate_label(const Table &rows, std::string_view label_col) {
  auto idx = rows.find_column(label_col);
  if (!idx)
    throw LabelError("label column '" + std::string(label_col) + "' not found");
  const Column &label = rows.column(*idx);
  if (label.type() == ColumnType::String)
    throw LabelError("label column '" + label.name() + "' must be numeric");
  bool seen[2] = {false, false};
  for (std::size_t r = 0; r < label.size(); ++r) {
    if (label.is_null(r))
      continue;
    double v = label.numeric_at(r);
    if (v != 0.0 && v != 1.0)
      throw LabelError("label column '" + label.name() +
                       "' must contain only 0 and 1 (found " + format_value(label.at(r)) +
                       ")");
    seen[v == 1.0] = true;
  }
  if (!seen[0] || !seen[1])
    throw LabelError("label column '" + label.name() + "' contains only one class");
}

PreprocessorState fit(const Table &train, std::string_view label_col, ModelType type) {
  if (train.row_count() == 0)
    throw EmptyError("no training rows");
  validate_label(train, label_col);

  PreprocessorState state;
  state.label_col = train.column(label_col).name();
  state.standardize = type != ModelType::BoostedTreeClassifier;

  std::size_t offset = 0;
  for (const auto &c : train.columns()) {
    if (iequals(c.name(), label_col))
      continue;
    FeatureSpec f;
    f.name = c.name();
    f.source_type = c.type();

    bool categorical = c.type() == ColumnType::String;
    std::set<std::int64_t> int_levels;
    if (c.type() == ColumnType::Int64) {
      for (std::size_t r = 0; r < c.size(); ++r) {
        if (c.is_null(r))
          continue;
        int_levels.insert(c.int_at(r));
        if (int_levels.size() > kMaxCategoricalIntLevels)
          break;
      }
      categorical = int_levels.size() <= kMaxCategoricalIntLevels;
    }

    if (categorical) {
      f.kind = FeatureKind::Categorical;
      if (c.type() == ColumnType::Int64) {
        for (auto v : int_levels)
          f.vocabulary.push_back(std::to_string(v));
      } else {
        std::set<std::string> levels;
        for (std::size_t r = 0; r < c.size(); ++r)
          if (!c.is_null(r))
            levels.insert(c.string_at(r));
        f.vocabulary.assign(levels.begin(), levels.end());
      }
      f.width = f.vocabulary.size() + 1;
    } else {
      f.kind = FeatureKind::Numeric;
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t r = 0; r < c.size(); ++r)
        if (!c.is_null(r)) {
          sum += c.numeric_at(r);
          ++n;
        }
      f.mean = n ? sum / static_cast<double>(n) : 0.0;
      f.impute_value = f.mean;
      // Population stddev over the imputed column; imputed cells sit at the
      // mean and add nothing to the sum of squares.
      double ss = 0.0;
      for (std::size_t r = 0; r < c.size(); ++r)
        if (!c.is_null(r)) {
          double d = c.numeric_at(r) - f.mean;
          ss += d * d;
        }
      double sd = std::sqrt(ss / static_cast<double>(c.size()));
      f.stddev = sd > 0.0 ? sd : 1.0;
      f.width = 1;
    }
    f.offset = offset;
    offset += f.width;
    state.features.push_back(std::move(f));
  }
  return state;
}

Design transform(const PreprocessorState &state, const Table &rows, bool with_labels) {
  const std::size_t n = rows.row_count();
  Design out;
  out.x = kernels::Matrix(n, state.output_width());

  std::vector<const Column *> cols;
  std::vector<std::unordered_map<std::string, std::size_t>> lookup(state.features.size());
  for (std::size_t k = 0; k < state.features.size(); ++k) {
    const auto &f = state.features[k];
    auto idx = rows.find_column(f.name);
    if (!idx)
      throw SchemaError("input is missing feature column '" + f.name + "'");
    const Column &c = rows.column(*idx);
    check_feature_column(f, c);
    cols.push_back(&c);
    for (std::size_t v = 0; v < f.vocabulary.size(); ++v)
      lookup[k].emplace(f.vocabulary[v], v);
  }

  const auto rows_signed = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rr = 0; rr < rows_signed; ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    auto dst = out.x.row(r);
    for (std::size_t k = 0; k < state.features.size(); ++k) {
      const auto &f = state.features[k];
      const Column &c = *cols[k];
      if (f.kind == FeatureKind::Numeric) {
        double v = c.is_null(r) ? f.impute_value : c.numeric_at(r);
        if (state.standardize)
          v = (v - f.mean) / f.stddev;
        dst[f.offset] = v;
        continue;
      }
      std::size_t slot = f.vocabulary.size(); // MISSING bucket
      if (!c.is_null(r)) {
        auto it = lookup[k].find(cell_key(c, r));
        if (it != lookup[k].end())
          slot = it->second;
      }
      dst[f.offset + slot] = 1.0;
    }
  }

  if (with_labels) {
    auto idx = rows.find_column(state.label_col);
    if (!idx)
      throw SchemaError("input is missing label column '" + state.label_col + "'");
    const Column &label = rows.column(*idx);
    if (label.type() == ColumnType::String)
      throw SchemaError("label column '" + state.label_col + "' must be numeric");
    out.y.resize(n);
    for (std::size_t r = 0; r < n; ++r)
      out.y[r] = label_value(label, r);
  }
  return out;
}

} // namespace minibqml::prep
