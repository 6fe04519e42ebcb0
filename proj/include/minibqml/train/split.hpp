#pragma once

#include "minibqml/table.hpp"

#include <cstddef>
#include <cstdint>

namespace minibqml::train {

struct SplitResult {
  Table train_rows;
  Table eval_rows;
  std::uint64_t seed_used = 0;
};

/// floor(n * fraction), guarded against representation error so that
/// e.g. 100 * 0.29 gives 29.
std::size_t eval_size(std::size_t n, double fraction);

/// Seeded shuffle; the first eval_size(n, f) shuffled rows form the eval set.
/// Both sides keep source row order. Throws SplitError when a side would be
/// empty or the fraction lies outside (0, 1).
SplitResult split_random(const Table &rows, double eval_fraction, std::uint64_t seed);

} // namespace minibqml::train
