#include <random>

#include <benchmark/benchmark.h>

#include "aeropipe/ml/forest.hpp"
#include "aeropipe/ml/knn.hpp"

using namespace aeropipe::ml;

namespace {

struct Data {
  Matrix x;
  std::vector<double> y;
};

Data make_data(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  Data d;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> row(cols);
    double t = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      row[c] = n(rng);
      t += (c % 3 == 0 ? 2.0 : 0.5) * row[c];
    }
    d.x.append_row(row);
    d.y.push_back(t + 0.1 * n(rng));
  }
  return d;
}

void BM_ForestFit(benchmark::State& state) {
  const auto d = make_data(std::size_t(state.range(0)), 12);
  ForestParams p;
  p.n_trees = 20;
  for (auto _ : state) benchmark::DoNotOptimize(RandomForest::fit(d.x, d.y, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForestFit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
  auto d = make_data(std::size_t(state.range(0)), 12);
  const auto queries = make_data(64, 12);
  KnnParams p;
  p.task = Task::Regression;
  const auto knn = Knn::fit(d.x, d.y, p);
  for (auto _ : state) benchmark::DoNotOptimize(knn.predict(queries.x));
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_KnnPredict)->Arg(1000)->Arg(5000)->Unit(benchmark::kMicrosecond);

}  // namespace
