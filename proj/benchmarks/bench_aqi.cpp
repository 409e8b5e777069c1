#include <random>

#include <benchmark/benchmark.h>

#include "aeropipe/aqi.hpp"

using namespace aeropipe;

namespace {

std::vector<CityDayRecord> random_records(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 400);
  std::vector<CityDayRecord> out(n);
  for (auto& r : out) {
    for (auto p : kAllPollutants) r[p] = u(rng);
  }
  return out;
}

void BM_SubIndex(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 600);
  std::vector<double> conc(1024);
  for (auto& c : conc) c = u(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(aqi::sub_index(Pollutant::PM2_5, conc[i++ & 1023]));
  }
}
BENCHMARK(BM_SubIndex);

void BM_OverallAqi(benchmark::State& state) {
  const auto records = random_records(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(aqi::overall_aqi(records[i++ & 1023]));
}
BENCHMARK(BM_OverallAqi);

}  // namespace
