#include "aeropipe/ml/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t index) {
  std::uint64_t z = forest_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomForest RandomForest::fit(const Matrix& x, std::span<const double> y,
                               const ForestParams& params) {
  if (x.rows() < 2) throw InvalidArgument("random forest needs at least 2 samples");
  if (y.size() != x.rows()) throw InvalidArgument("target length does not match rows");
  if (params.n_trees == 0) throw InvalidArgument("random forest needs at least one tree");

  RandomForest forest;
  forest.params_ = params;
  if (params.task == Task::Classification) {
    forest.n_classes_ = static_cast<std::size_t>(*std::max_element(y.begin(), y.end())) + 1;
  }

  TreeParams tp;
  tp.task = params.task;
  tp.max_depth = params.max_depth;
  tp.min_samples_leaf = params.min_samples_leaf;
  tp.max_features =
      params.max_features == MaxFeatures::Sqrt
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(x.cols()))))
          : 0;

  std::vector<std::optional<DecisionTree>> slots(params.n_trees);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < params.n_trees;) {
      try {
      std::mt19937_64 rng(tree_seed(params.seed, t));
      std::vector<std::size_t> rows(x.rows());
      if (params.bootstrap) {
        for (auto& r : rows) r = static_cast<std::size_t>(rng() % x.rows());
      } else {
        std::iota(rows.begin(), rows.end(), std::size_t{0});
      }
      slots[t] = DecisionTree::fit_rows(x, y, std::move(rows), tp, rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned threads = params.threads ? params.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(params.n_trees));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  forest.trees_.reserve(params.n_trees);
  for (auto& s : slots) forest.trees_.push_back(std::move(*s));
  return forest;
}

double RandomForest::predict_row(std::span<const double> row) const {
  if (params_.task == Task::Regression) {
    double s = 0;
    for (const auto& t : trees_) s += t.predict_row(row);
    return s / double(trees_.size());
  }
  std::vector<std::size_t> votes(n_classes_, 0);
  for (const auto& t : trees_) ++votes[static_cast<std::size_t>(t.predict_row(row))];
  return majority_label(votes);
}

std::vector<double> RandomForest::predict(const Matrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_row(x.row(i));
  return out;
}

}  // namespace aeropipe::ml
