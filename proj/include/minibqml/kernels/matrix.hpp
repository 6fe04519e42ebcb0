#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace minibqml::kernels {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double &operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }

  bool operator==(const Matrix &) const = default;
};

/// Gradient and Hessian sums (and row count) for one histogram bin or tree node.
struct GradStats {
  double grad = 0.0;
  double hess = 0.0;
  std::size_t count = 0;

  GradStats &operator+=(const GradStats &o) {
    grad += o.grad;
    hess += o.hess;
    count += o.count;
    return *this;
  }
};

/// One feature column mapped onto its sorted distinct training values.
/// `bin[i]` is the rank of row i's value in `values`.
struct BinnedFeature {
  std::vector<double> values;
  std::vector<std::uint32_t> bin;
};

} // namespace minibqml::kernels
