#include "minibqml/train/split.hpp"

#include "minibqml/error.hpp"
#include "minibqml/train/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace minibqml::train {

std::size_t eval_size(std::size_t n, double fraction) {
  const double exact = static_cast<double>(n) * fraction;
  return static_cast<std::size_t>(std::floor(exact + 1e-9 * std::max(1.0, exact)));
}

SplitResult split_random(const Table &rows, double eval_fraction, std::uint64_t seed) {
  if (!(eval_fraction > 0.0 && eval_fraction < 1.0))
    throw SplitError("eval fraction must lie strictly between 0 and 1");
  const std::size_t n = rows.row_count();
  const std::size_t n_eval = eval_size(n, eval_fraction);
  if (n_eval == 0 || n_eval >= n)
    throw SplitError("splitting " + std::to_string(n) + " rows with eval fraction " +
                     std::to_string(eval_fraction) + " leaves one side empty");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());

  std::vector<std::size_t> eval(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_eval));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_eval), order.end());
  std::sort(eval.begin(), eval.end());
  std::sort(train.begin(), train.end());

  SplitResult out{rows.take(train), rows.take(eval), seed};
  return out;
}

} // namespace minibqml::train
