#include <string>

#include <benchmark/benchmark.h>

#include "aeropipe/ingest.hpp"

using namespace aeropipe;

namespace {

// In-memory channel with no rate limit, so every update appends.
void BM_HandleUpdate(benchmark::State& state) {
  ingest::IngestService svc;
  ingest::ChannelConfig ch;
  ch.write_api_key = "KEY";
  ch.min_update_interval = std::chrono::milliseconds(0);
  svc.add_channel(ch);
  Timestamp t{};
  for (auto _ : state) {
    t += std::chrono::seconds(1);
    benchmark::DoNotOptimize(svc.handle_update("KEY", "412.5", "0.37", t));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HandleUpdate);

void BM_ExportCsv(benchmark::State& state) {
  ingest::IngestService svc;
  ingest::ChannelConfig ch;
  ch.write_api_key = "KEY";
  svc.add_channel(ch);
  Timestamp t{};
  for (int i = 0; i < state.range(0); ++i) {
    t += std::chrono::seconds(2);
    svc.handle_update("KEY", std::to_string(400 + i % 50), "0.5", t);
  }
  for (auto _ : state) benchmark::DoNotOptimize(svc.export_csv(1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExportCsv)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace
