#pragma once

#include "minibqml/kernels/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

// Numeric kernels used by the trainers. `serial` is the straightforward
// reference; `parallel` is the OpenMP version used in production. Parallel
// reductions accumulate over fixed-size row blocks and combine the block
// partials in block order, so results do not depend on the thread count.
namespace minibqml::kernels {

inline constexpr std::size_t kReductionBlock = 1024;

/// Numerically stable log(1 + exp(-|m|)) form of the per-row logistic loss.
double logistic_loss(double margin, double label);
double sigmoid(double margin);

namespace serial {

/// out[i] = x.row(i) . w + bias
void affine(const Matrix &x, std::span<const double> w, double bias,
            std::span<double> out);
/// out = x^T r
void transpose_times(const Matrix &x, std::span<const double> r, std::span<double> out);
/// Sum of logistic_loss(margin[i], y[i]).
double logistic_loss_sum(std::span<const double> margins, std::span<const double> y);
/// out = a * w^T + bias (w is out_dim x in_dim).
void dense_forward(const Matrix &a, const Matrix &w, std::span<const double> bias,
                   Matrix &out);
/// grad = delta^T * a (delta is batch x out_dim, a is batch x in_dim).
void dense_weight_grad(const Matrix &delta, const Matrix &a, Matrix &grad);
/// out = delta * w (back-propagates to the layer input).
void dense_input_grad(const Matrix &delta, const Matrix &w, Matrix &out);
/// hist[f][bin] = sums of (g, h) over `rows` for every feature f.
void build_histograms(std::span<const BinnedFeature> features,
                      std::span<const std::uint32_t> rows, std::span<const double> g,
                      std::span<const double> h,
                      std::vector<std::vector<GradStats>> &hist);

} // namespace serial

namespace parallel {

void affine(const Matrix &x, std::span<const double> w, double bias,
            std::span<double> out);
void transpose_times(const Matrix &x, std::span<const double> r, std::span<double> out);
double logistic_loss_sum(std::span<const double> margins, std::span<const double> y);
void dense_forward(const Matrix &a, const Matrix &w, std::span<const double> bias,
                   Matrix &out);
void dense_weight_grad(const Matrix &delta, const Matrix &a, Matrix &grad);
void dense_input_grad(const Matrix &delta, const Matrix &w, Matrix &out);
void build_histograms(std::span<const BinnedFeature> features,
                      std::span<const std::uint32_t> rows, std::span<const double> g,
                      std::span<const double> h,
                      std::vector<std::vector<GradStats>> &hist);

} // namespace parallel

} // namespace minibqml::kernels
