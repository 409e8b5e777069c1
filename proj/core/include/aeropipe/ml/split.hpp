#pragma once

#include <cstdint>
#include <vector>

namespace aeropipe::ml {

struct SplitConfig {
  double test_fraction = 0.2;
  std::uint64_t shuffle_seed = 42;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded Fisher-Yates permutation of 0..n-1: an mt19937_64 seeded with
/// `seed`, and for i = n-1 down to 1 swap position i with j = rng() % (i+1).
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

/// The first round(test_fraction * n) shuffled indices form the test set,
/// the rest the training set. Throws InvalidArgument when n < 2 or the
/// fraction is outside (0, 1).
SplitIndices split_indices(std::size_t n, const SplitConfig& config);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split(const std::vector<T>& items,
                                                const SplitConfig& config) {
  auto idx = split_indices(items.size(), config);
  std::vector<T> train, test;
  train.reserve(idx.train.size());
  test.reserve(idx.test.size());
  for (auto i : idx.train) train.push_back(items[i]);
  for (auto i : idx.test) test.push_back(items[i]);
  return {std::move(train), std::move(test)};
}

}  // namespace aeropipe::ml
