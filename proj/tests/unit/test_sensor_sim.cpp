#include <cmath>

#include "doctest.h"

#include "aeropipe/errors.hpp"
#include "aeropipe/sensor.hpp"
#include "aeropipe/timeutil.hpp"

using namespace aeropipe;
using namespace aeropipe::sim;
using namespace std::chrono_literals;

namespace {

// Records the mux level seen by every ADC read.
class MuxSpy final : public NoiseSource {
 public:
  int draw() override {
    levels.push_back(device->mux());
    return 0;
  }
  const VirtualDevice* device = nullptr;
  std::vector<MuxLevel> levels;
};

GasScenario constant(double mq135, double mq3) {
  GasScenario s;
  s.gas[0] = Timeline({{0, mq135}});
  s.gas[1] = Timeline({{0, mq3}});
  return s;
}

DeviceConfig quiet_device() {
  DeviceConfig c;
  c.noise_sigma = 0;
  c.start = parse_timestamp("2024-01-01T00:00:00Z");
  return c;
}

}  // namespace

TEST_CASE("curve validation") {
  CHECK_NOTHROW(SensorCurve::mq135_default().validate());
  CHECK_NOTHROW(SensorCurve::mq3_default().validate());
  SensorCurve bad = SensorCurve::mq135_default();
  bad.b = 0.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = SensorCurve::mq135_default();
  bad.rl = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("curves come from config with defaults underneath") {
  auto cfg = KeyValueConfig::parse("[curve:mq135]\na = 100\n");
  auto c = SensorCurve::from_config(cfg, "mq135", SensorCurve::mq135_default());
  CHECK(c.a == 100);
  CHECK(c.b == SensorCurve::mq135_default().b);
  CHECK(c.r0 == 76630);
}

TEST_CASE("ppm_to_counts at the ratio-one point") {
  // round(1023 * rl / (rl + r0)), evaluated by hand: 118 and 787.
  CHECK(ppm_to_counts(SensorCurve::mq135_default(), SensorCurve::mq135_default().a) == 118);
  CHECK(ppm_to_counts(SensorCurve::mq3_default(), SensorCurve::mq3_default().a) == 787);
  CHECK(ppm_to_counts(SensorCurve::mq135_default(), SensorCurve::mq135_default().a, 3) == 121);
}

TEST_CASE("ppm_to_counts clamps to the open ADC range") {
  const auto c = SensorCurve::mq135_default();
  CHECK(ppm_to_counts(c, 1e-9) == 1);
  CHECK(ppm_to_counts(c, 0) == 1);
  CHECK(ppm_to_counts(c, 1e30) == 1022);
  CHECK(ppm_to_counts(c, 400, -5000) == 1);
}

TEST_CASE("counts_to_ppm at Rs = R0 gives a exactly") {
  SensorCurve c{2.5, -1.7, 10000, 10000, 3.3};
  // Vout = vcc / 2 exactly, so Rs = rl = r0.
  CHECK(counts_to_ppm(c, 511.5) == 2.5);
}

TEST_CASE("counts_to_ppm at 512 counts matches a hand evaluation") {
  // Evaluated independently: Vout = 3.3*512/1023, Rs = 1e4*(3.3-Vout)/Vout,
  // ppm = 116.602 * (Rs/76630)^-2.769.
  const double ppm = counts_to_ppm(SensorCurve::mq135_default(), 512);
  CHECK(ppm == doctest::Approx(32957.73801042199).epsilon(1e-12));
  CHECK(counts_to_resistance(SensorCurve::mq135_default(), 512) ==
        doctest::Approx(9980.468749999998).epsilon(1e-12));
  CHECK(counts_to_ppm(SensorCurve::mq3_default(), 512, 1) ==
        doctest::Approx(0.06452109216411046).epsilon(1e-12));
}

TEST_CASE("saturated readings are rejected with the channel") {
  const auto c = SensorCurve::mq3_default();
  CHECK_THROWS_AS(counts_to_ppm(c, 0, 1), SaturationError);
  CHECK_THROWS_AS(counts_to_ppm(c, 1023, 1), SaturationError);
  try {
    counts_to_ppm(c, 0, 1);
  } catch (const SaturationError& e) {
    CHECK(e.channel() == 1);
  }
}

TEST_CASE("400 ppm round-trips within 1%") {
  const auto c = SensorCurve::mq135_default();
  const int counts = ppm_to_counts(c, 400);
  CHECK(counts == 173);
  CHECK(counts_to_ppm(c, counts) == doctest::Approx(400).epsilon(0.01));
}

TEST_CASE("more gas gives more counts") {
  const auto c = SensorCurve::mq135_default();
  CHECK(ppm_to_counts(c, 1000) > ppm_to_counts(c, 100));
}

TEST_CASE("property: forward and inverse models agree over counts 50..970") {
  for (const auto& c : {SensorCurve::mq135_default(), SensorCurve::mq3_default()}) {
    double previous = 0;
    for (int counts = 50; counts <= 970; ++counts) {
      const double ppm = counts_to_ppm(c, counts);
      CHECK(ppm > previous);  // strictly increasing in counts
      previous = ppm;
      const int back = ppm_to_counts(c, ppm);
      CHECK(back == counts);
      CHECK(counts_to_ppm(c, back) == doctest::Approx(ppm).epsilon(0.01));
    }
  }
}

TEST_CASE("timeline interpolation and validation") {
  auto t = Timeline::parse("0:400, 5:800, 10:600");
  CHECK(t.at(-1) == 400);
  CHECK(t.at(0) == 400);
  CHECK(t.at(2.5) == 600);
  CHECK(t.at(5) == 800);
  CHECK(t.at(7.5) == 700);
  CHECK(t.at(100) == 600);
  CHECK_THROWS_AS(Timeline::parse("5:1, 5:2"), InvalidArgument);
  CHECK_THROWS_AS(Timeline::parse("0:-1"), InvalidArgument);
  CHECK_THROWS_AS(Timeline::parse("zero:1"), ParseError);
}

TEST_CASE("sample_channel with zero noise averages identical reads") {
  VirtualDevice d(quiet_device(), constant(400, 0.4));
  const auto expected = ppm_to_counts(SensorCurve::mq135_default(), 400);
  d.set_mux(MuxLevel::Low);
  CHECK(d.read_adc() == expected);
  const auto s = d.sample_channel(0);
  CHECK(s.raw_counts == expected);
  CHECK(s.channel == 0);
  CHECK(s.ppm == counts_to_ppm(SensorCurve::mq135_default(), expected));
}

TEST_CASE("six scripted reads average to 500.0") {
  const auto curve = SensorCurve::mq135_default();
  const double ppm = counts_to_ppm(curve, 500);
  REQUIRE(ppm_to_counts(curve, ppm) == 500);
  VirtualDevice d(quiet_device(), constant(ppm, 0.4),
                  std::make_unique<ScriptedNoise>(std::vector<int>{0, 2, -2, 1, -1, 0}));
  const auto s = d.sample_channel(0);
  CHECK(s.raw_counts == 500.0);
  CHECK(s.ppm == doctest::Approx(ppm).epsilon(1e-12));
}

TEST_CASE("means are not re-truncated") {
  VirtualDevice d(quiet_device(), constant(400, 0.4),
                  std::make_unique<ScriptedNoise>(std::vector<int>{1, 0, 0, 0, 0, 0}));
  const auto s = d.sample_channel(0);
  CHECK(s.raw_counts == doctest::Approx(173 + 1.0 / 6.0));
}

TEST_CASE("same seed, same scenario time, same sample") {
  auto cfg = quiet_device();
  cfg.noise_sigma = 3;
  cfg.rng_seed = 99;
  VirtualDevice a(cfg, constant(400, 0.4));
  VirtualDevice b(cfg, constant(400, 0.4));
  for (int i = 0; i < 20; ++i) CHECK(a.sample_channel(i % 2) == b.sample_channel(i % 2));
}

TEST_CASE("device loop counts ticks") {
  CollectingSink sink;
  auto cfg = quiet_device();
  SUBCASE("10 s at 1 s") {
    VirtualDevice d(cfg, constant(400, 0.4));
    auto stats = run_device_loop(d, 10s, sink);
    CHECK(stats.ticks == 10);
    CHECK(stats.delivered == 10);
    CHECK(sink.pairs.size() == 10);
    CHECK(sink.pairs[3].first.taken_at == cfg.start + 3s);
  }
  SUBCASE("shorter than one period") {
    VirtualDevice d(cfg, constant(400, 0.4));
    CHECK(run_device_loop(d, 999ms, sink).ticks == 0);
    CHECK(sink.pairs.empty());
  }
  SUBCASE("fractional periods round down") {
    cfg.sample_period = 300ms;
    VirtualDevice d(cfg, constant(400, 0.4));
    CHECK(run_device_loop(d, 1s, sink).ticks == 3);
  }
}

TEST_CASE("a step in the scenario shows at the matching pair index") {
  GasScenario s;
  s.gas[0] = Timeline::parse("0:400, 4:400, 5:800");
  s.gas[1] = Timeline::parse("0:0.4");
  VirtualDevice d(quiet_device(), s);
  CollectingSink sink;
  run_device_loop(d, 8s, sink);
  const auto curve = SensorCurve::mq135_default();
  for (std::size_t i = 0; i < sink.pairs.size(); ++i) {
    const double truth = i < 5 ? 400 : 800;
    const double expected = counts_to_ppm(curve, ppm_to_counts(curve, truth));
    CHECK(sink.pairs[i].first.ppm == expected);
  }
  CHECK(sink.pairs[4].first.ppm < 500);
  CHECK(sink.pairs[5].first.ppm > 700);
}

TEST_CASE("each tick reads channel 0 on mux low, then channel 1 on mux high") {
  auto spy = std::make_unique<MuxSpy>();
  auto* raw = spy.get();
  VirtualDevice d(quiet_device(), constant(400, 0.4), std::move(spy));
  raw->device = &d;
  CollectingSink sink;
  run_device_loop(d, 3s, sink);
  REQUIRE(raw->levels.size() == 3 * 12);
  for (std::size_t i = 0; i < raw->levels.size(); ++i) {
    CHECK(raw->levels[i] == ((i % 12) < 6 ? MuxLevel::Low : MuxLevel::High));
  }
  for (const auto& [a, b] : sink.pairs) {
    CHECK(a.channel == 0);
    CHECK(b.channel == 1);
    CHECK(a.taken_at == b.taken_at);
  }
}

TEST_CASE("property: seeded loops are bit-reproducible") {
  for (std::uint64_t seed : {1ull, 2ull, 12345ull}) {
    auto cfg = quiet_device();
    cfg.noise_sigma = 4;
    cfg.rng_seed = seed;
    GasScenario s;
    s.gas[0] = Timeline::parse("0:300, 20:900");
    s.gas[1] = Timeline::parse("0:0.2, 20:2");
    VirtualDevice a(cfg, s), b(cfg, s);
    CollectingSink sa, sb;
    run_device_loop(a, 20s, sa);
    run_device_loop(b, 20s, sb);
    CHECK(sa.pairs == sb.pairs);
  }
}

TEST_CASE("failing sinks are tallied and the loop carries on") {
  class Flaky final : public SampleSink {
   public:
    DeliveryResult deliver(const DeviceConfig&, const SensorSample&,
                           const SensorSample&) override {
      if (++calls % 2 == 0) throw std::runtime_error("boom");
      return {calls % 3 != 0, "rejected"};
    }
    int calls = 0;
  } sink;
  VirtualDevice d(quiet_device(), constant(400, 0.4));
  auto stats = run_device_loop(d, 6s, sink);
  CHECK(stats.ticks == 6);
  CHECK(sink.calls == 6);
  CHECK(stats.delivered == 2);  // calls 1 and 5
  CHECK(stats.failed == 4);
  CHECK(stats.errors.size() == 4);
  CHECK(stats.errors[0] == "tick 1: boom");
}

TEST_CASE("scenario files") {
  auto cfg = KeyValueConfig::parse(
      "[simulation]\nstart = 2024-05-01T12:00:00Z\nperiod_ms = 500\n"
      "[curve:mq3]\nr0 = 50000\n"
      "[device:kitchen]\nseed = 7\nnoise_sigma = 0\napi_key = K1\nmq135 = 0:420\nmq3 = 0:1, 10:2\n"
      "[device:hall]\n");
  auto plan = ScenarioFile::from_config(cfg);
  CHECK(plan.period == 500ms);
  REQUIRE(plan.devices.size() == 2);
  const auto& [kitchen, gas] = plan.devices[0];
  CHECK(kitchen.device_id == "kitchen");
  CHECK(kitchen.rng_seed == 7);
  CHECK(kitchen.noise_sigma == 0);
  CHECK(kitchen.write_api_key == "K1");
  CHECK(kitchen.curves[1].r0 == 50000);
  CHECK(kitchen.curves[1].a == SensorCurve::mq3_default().a);
  CHECK(kitchen.sample_period == 500ms);
  CHECK(kitchen.start == parse_timestamp("2024-05-01T12:00:00Z"));
  CHECK(gas.ppm_at(0, 3) == 420);
  CHECK(gas.ppm_at(1, 5) == 1.5);
  CHECK(plan.devices[1].first.device_id == "hall");
  CHECK_THROWS_AS(ScenarioFile::from_config(KeyValueConfig::parse("[simulation]\nperiod_ms = 0\n")),
                  ParseError);
}
