#pragma once

#include "minibqml/csv.hpp"
#include "minibqml/kernels/matrix.hpp"
#include "minibqml/table.hpp"
#include "minibqml/train/rng.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

namespace minibqml::fixtures {

inline Table csv_table(const std::string &text, const std::string &name = "t") {
  return parse_csv(text, name);
}

struct Labelled {
  kernels::Matrix x;
  std::vector<double> y;
};

/// Logistic-model data: y ~ Bernoulli(sigmoid(x . beta + b)) with Gaussian-ish x.
inline Labelled logistic_data(std::size_t n, std::size_t d, std::uint64_t seed,
                              double scale = 1.0) {
  train::Rng rng(seed);
  Labelled out{kernels::Matrix(n, d), std::vector<double>(n)};
  std::vector<double> beta(d);
  for (auto &b : beta)
    b = rng.symmetric(2.0) * scale;
  for (std::size_t i = 0; i < n; ++i) {
    double m = 0.3;
    for (std::size_t j = 0; j < d; ++j) {
      const double v = rng.symmetric(1.0) + rng.symmetric(1.0);
      out.x(i, j) = v;
      m += beta[j] * v;
    }
    out.y[i] = rng.unit() < 1.0 / (1.0 + std::exp(-m)) ? 1.0 : 0.0;
  }
  out.y[0] = 1.0;
  out.y[1] = 0.0;
  return out;
}

/// Column names of the BRFSS 2015 diabetes 50/50 extract (label first).
inline const std::vector<std::string> &brfss_columns() {
  static const std::vector<std::string> cols = {
      "Diabetes_binary", "HighBP",    "HighChol",  "CholCheck", "BMI",
      "Smoker",          "Stroke",    "HeartDiseaseorAttack",   "PhysActivity",
      "Fruits",          "Veggies",   "HvyAlcoholConsump",      "AnyHealthcare",
      "NoDocbcCost",     "GenHlth",   "MentHlth",  "PhysHlth",  "DiffWalk",
      "Sex",             "Age",       "Education", "Income"};
  return cols;
}

/// Synthetic rows with the BRFSS schema and value ranges; the label depends
/// mostly on HighBP and GenHlth. Used for timing and end-to-end tests only.
inline std::string brfss_like_csv(std::size_t n, std::uint64_t seed) {
  train::Rng rng(seed);
  std::string out;
  const auto &cols = brfss_columns();
  for (std::size_t j = 0; j < cols.size(); ++j)
    out += (j ? "," : "") + cols[j];
  out += '\n';
  auto bit = [&](double p) { return rng.unit() < p ? 1 : 0; };
  for (std::size_t i = 0; i < n; ++i) {
    const int high_bp = bit(0.55);
    const int gen_hlth = 1 + static_cast<int>(rng.below(5));
    const int age = 1 + static_cast<int>(rng.below(13));
    const int bmi = 15 + static_cast<int>(rng.below(40));
    const int high_chol = bit(0.5);
    const double margin = -3.2 + 1.3 * high_bp + 0.55 * gen_hlth + 0.08 * age +
                          0.04 * (bmi - 28) + 0.4 * high_chol;
    const int label = rng.unit() < 1.0 / (1.0 + std::exp(-margin)) ? 1 : 0;
    const int values[] = {label,
                          high_bp,
                          high_chol,
                          bit(0.97),
                          bmi,
                          bit(0.45),
                          bit(0.06),
                          bit(0.14),
                          bit(0.7),
                          bit(0.6),
                          bit(0.8),
                          bit(0.04),
                          bit(0.95),
                          bit(0.09),
                          gen_hlth,
                          static_cast<int>(rng.below(31)),
                          static_cast<int>(rng.below(31)),
                          bit(0.25),
                          bit(0.45),
                          age,
                          1 + static_cast<int>(rng.below(6)),
                          1 + static_cast<int>(rng.below(8))};
    for (std::size_t j = 0; j < std::size(values); ++j) {
      if (j)
        out += ',';
      out += std::to_string(values[j]);
    }
    out += '\n';
  }
  return out;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string &tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("minibqml_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace minibqml::fixtures
