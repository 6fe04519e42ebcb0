#include "minibqml/kernels/kernels.hpp"

#include <algorithm>

namespace minibqml::kernels::parallel {

namespace {

std::size_t block_count(std::size_t n) {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

} // namespace

void affine(const Matrix &x, std::span<const double> w, double bias,
            std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(x.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = bias;
    auto row = x.row(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < x.cols; ++j)
      s += row[j] * w[j];
    out[static_cast<std::size_t>(i)] = s;
  }
}

void transpose_times(const Matrix &x, std::span<const double> r, std::span<double> out) {
  const std::size_t blocks = block_count(x.rows);
  std::vector<double> partial(blocks * x.cols, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    double *acc = partial.data() + static_cast<std::size_t>(b) * x.cols;
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = std::min(x.rows, begin + kReductionBlock);
    for (std::size_t i = begin; i < end; ++i) {
      auto row = x.row(i);
      const double ri = r[i];
      for (std::size_t j = 0; j < x.cols; ++j)
        acc[j] += row[j] * ri;
    }
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t j = 0; j < x.cols; ++j)
      out[j] += partial[b * x.cols + j];
}

double logistic_loss_sum(std::span<const double> margins, std::span<const double> y) {
  const std::size_t blocks = block_count(margins.size());
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = std::min(margins.size(), begin + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i)
      s += logistic_loss(margins[i], y[i]);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial)
    total += p;
  return total;
}

// The dense kernels assign each output element to exactly one thread and sum
// in the same order as the serial reference, so they match it bit for bit.

void dense_forward(const Matrix &a, const Matrix &w, std::span<const double> bias,
                   Matrix &out) {
  out = Matrix(a.rows, w.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(a.rows); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t o = 0; o < w.rows; ++o) {
      double s = bias[o];
      for (std::size_t k = 0; k < a.cols; ++k)
        s += a(i, k) * w(o, k);
      out(i, o) = s;
    }
  }
}

void dense_weight_grad(const Matrix &delta, const Matrix &a, Matrix &grad) {
  grad = Matrix(delta.cols, a.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t oo = 0; oo < static_cast<std::ptrdiff_t>(delta.cols); ++oo) {
    const auto o = static_cast<std::size_t>(oo);
    for (std::size_t k = 0; k < a.cols; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.rows; ++i)
        s += delta(i, o) * a(i, k);
      grad(o, k) = s;
    }
  }
}

void dense_input_grad(const Matrix &delta, const Matrix &w, Matrix &out) {
  out = Matrix(delta.rows, w.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(delta.rows); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t k = 0; k < w.cols; ++k) {
      double s = 0.0;
      for (std::size_t o = 0; o < w.rows; ++o)
        s += delta(i, o) * w(o, k);
      out(i, k) = s;
    }
  }
}

void build_histograms(std::span<const BinnedFeature> features,
                      std::span<const std::uint32_t> rows, std::span<const double> g,
                      std::span<const double> h,
                      std::vector<std::vector<GradStats>> &hist) {
  hist.resize(features.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ff = 0; ff < static_cast<std::ptrdiff_t>(features.size()); ++ff) {
    const auto f = static_cast<std::size_t>(ff);
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

} // namespace minibqml::kernels::parallel
