#include "aeropipe/ml/split.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(idx[i], idx[j]);
  }
  return idx;
}

SplitIndices split_indices(std::size_t n, const SplitConfig& config) {
  if (n < 2) throw InvalidArgument("split needs at least 2 records, got " + std::to_string(n));
  if (!(config.test_fraction > 0 && config.test_fraction < 1)) {
    throw InvalidArgument("test_fraction must lie in (0, 1)");
  }
  auto idx = shuffled_indices(n, config.shuffle_seed);
  const auto n_test = static_cast<std::size_t>(std::llround(config.test_fraction * double(n)));
  SplitIndices out;
  out.test.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  return out;
}

}  // namespace aeropipe::ml
