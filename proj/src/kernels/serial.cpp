#include "minibqml/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace minibqml::kernels {

double logistic_loss(double margin, double label) {
  // softplus(m) - y*m, written to avoid overflow for large |m|.
  double softplus = margin > 0 ? margin + std::log1p(std::exp(-margin))
                               : std::log1p(std::exp(margin));
  return softplus - label * margin;
}

double sigmoid(double margin) {
  if (margin >= 0) {
    double z = std::exp(-margin);
    return 1.0 / (1.0 + z);
  }
  double z = std::exp(margin);
  return z / (1.0 + z);
}

namespace serial {

void affine(const Matrix &x, std::span<const double> w, double bias,
            std::span<double> out) {
  for (std::size_t i = 0; i < x.rows; ++i) {
    double s = bias;
    auto row = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j)
      s += row[j] * w[j];
    out[i] = s;
  }
}

void transpose_times(const Matrix &x, std::span<const double> r, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j)
      out[j] += row[j] * r[i];
  }
}

double logistic_loss_sum(std::span<const double> margins, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < margins.size(); ++i)
    s += logistic_loss(margins[i], y[i]);
  return s;
}

void dense_forward(const Matrix &a, const Matrix &w, std::span<const double> bias,
                   Matrix &out) {
  out = Matrix(a.rows, w.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t o = 0; o < w.rows; ++o) {
      double s = bias[o];
      for (std::size_t k = 0; k < a.cols; ++k)
        s += a(i, k) * w(o, k);
      out(i, o) = s;
    }
}

void dense_weight_grad(const Matrix &delta, const Matrix &a, Matrix &grad) {
  grad = Matrix(delta.cols, a.cols);
  for (std::size_t o = 0; o < delta.cols; ++o)
    for (std::size_t k = 0; k < a.cols; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.rows; ++i)
        s += delta(i, o) * a(i, k);
      grad(o, k) = s;
    }
}

void dense_input_grad(const Matrix &delta, const Matrix &w, Matrix &out) {
  out = Matrix(delta.rows, w.cols);
  for (std::size_t i = 0; i < delta.rows; ++i)
    for (std::size_t k = 0; k < w.cols; ++k) {
      double s = 0.0;
      for (std::size_t o = 0; o < w.rows; ++o)
        s += delta(i, o) * w(o, k);
      out(i, k) = s;
    }
}

void build_histograms(std::span<const BinnedFeature> features,
                      std::span<const std::uint32_t> rows, std::span<const double> g,
                      std::span<const double> h,
                      std::vector<std::vector<GradStats>> &hist) {
  hist.resize(features.size());
  for (std::size_t f = 0; f < features.size(); ++f) {
    auto &hf = hist[f];
    hf.assign(features[f].values.size(), GradStats{});
    const auto &bins = features[f].bin;
    for (auto r : rows) {
      auto &cell = hf[bins[r]];
      cell.grad += g[r];
      cell.hess += h[r];
      ++cell.count;
    }
  }
}

} // namespace serial
} // namespace minibqml::kernels
