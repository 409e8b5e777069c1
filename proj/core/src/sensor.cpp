#include "aeropipe/sensor.hpp"

#include <algorithm>
#include <cmath>

#include "aeropipe/errors.hpp"
#include "aeropipe/fileutil.hpp"

namespace aeropipe::sim {

void SensorCurve::validate() const {
  if (!(a > 0) || !(b < 0) || !(r0 > 0) || !(rl > 0) || !(vcc > 0)) {
    throw InvalidArgument("sensor curve requires a, r0, rl, vcc > 0 and b < 0");
  }
}

SensorCurve SensorCurve::mq135_default() { return {116.602, -2.769, 76630.0, 10000.0, 3.3}; }

SensorCurve SensorCurve::mq3_default() { return {0.3934, -1.504, 60000.0, 200000.0, 3.3}; }

SensorCurve SensorCurve::from_config(const KeyValueConfig& cfg, const std::string& name,
                                     const SensorCurve& base) {
  const std::string section = "curve:" + name;
  SensorCurve c{cfg.get_double(section, "a", base.a), cfg.get_double(section, "b", base.b),
                cfg.get_double(section, "r0", base.r0), cfg.get_double(section, "rl", base.rl),
                cfg.get_double(section, "vcc", base.vcc)};
  c.validate();
  return c;
}

int ppm_to_counts(const SensorCurve& curve, double true_ppm, int noise_draw) {
  long clean = 1;
  if (true_ppm > 0) {
    const double rs = curve.r0 * std::pow(true_ppm / curve.a, 1.0 / curve.b);
    const double vout = curve.vcc * curve.rl / (curve.rl + rs);
    clean = std::lround(kAdcMax * vout / curve.vcc);
  }
  return static_cast<int>(std::clamp<long>(clean + noise_draw, 1, kAdcMax - 1));
}

double counts_to_resistance(const SensorCurve& curve, double counts, int channel) {
  if (!(counts > 0) || !(counts < kAdcMax)) throw SaturationError(channel, counts);
  const double vout = curve.vcc * counts / kAdcMax;
  return curve.rl * (curve.vcc - vout) / vout;
}

double counts_to_ppm(const SensorCurve& curve, double counts, int channel) {
  const double rs = counts_to_resistance(curve, counts, channel);
  return curve.a * std::pow(rs / curve.r0, curve.b);
}

GaussianNoise::GaussianNoise(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed) {
  if (sigma < 0) throw InvalidArgument("noise sigma must be >= 0");
}

int GaussianNoise::draw() {
  if (sigma_ == 0) return 0;
  return static_cast<int>(std::lround(sigma_ * dist_(rng_)));
}

ScriptedNoise::ScriptedNoise(std::vector<int> draws) : draws_(std::move(draws)) {
  if (draws_.empty()) draws_.push_back(0);
}

int ScriptedNoise::draw() {
  int v = draws_[next_];
  next_ = (next_ + 1) % draws_.size();
  return v;
}

Timeline::Timeline(std::vector<Knot> knots) : knots_(std::move(knots)) {
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (knots_[i].ppm < 0) throw InvalidArgument("timeline ppm must be >= 0");
    if (i > 0 && !(knots_[i].offset_s > knots_[i - 1].offset_s)) {
      throw InvalidArgument("timeline offsets must be strictly increasing");
    }
  }
}

Timeline Timeline::parse(std::string_view text) {
  std::vector<Knot> knots;
  for (const auto& item : split_list(text)) {
    auto colon = item.find(':');
    double t = 0, v = 0;
    if (colon == std::string::npos || !parse_double(trim(item.substr(0, colon)), t) ||
        !parse_double(trim(item.substr(colon + 1)), v)) {
      throw ParseError("bad timeline knot '" + item + "', expected offset_s:ppm");
    }
    knots.push_back({t, v});
  }
  return Timeline(std::move(knots));
}

double Timeline::at(double offset_s) const {
  if (knots_.empty()) return 0.0;
  if (offset_s <= knots_.front().offset_s) return knots_.front().ppm;
  if (offset_s >= knots_.back().offset_s) return knots_.back().ppm;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), offset_s,
                             [](double t, const Knot& k) { return t < k.offset_s; });
  auto lo = hi - 1;
  const double frac = (offset_s - lo->offset_s) / (hi->offset_s - lo->offset_s);
  return lo->ppm + frac * (hi->ppm - lo->ppm);
}

VirtualDevice::VirtualDevice(DeviceConfig config, GasScenario scenario)
    : VirtualDevice(config, std::move(scenario),
                    std::make_unique<GaussianNoise>(config.noise_sigma, config.rng_seed)) {}

VirtualDevice::VirtualDevice(DeviceConfig config, GasScenario scenario,
                             std::unique_ptr<NoiseSource> noise)
    : config_(std::move(config)), scenario_(std::move(scenario)), noise_(std::move(noise)) {
  for (const auto& c : config_.curves) c.validate();
  if (config_.sample_period.count() <= 0) throw InvalidArgument("sample period must be > 0");
}

int VirtualDevice::read_adc() {
  const int channel = mux_ == MuxLevel::Low ? 0 : 1;
  return ppm_to_counts(config_.curves[channel], scenario_.ppm_at(channel, clock_s_),
                       noise_->draw());
}

SensorSample VirtualDevice::sample_channel(int channel) {
  if (channel != 0 && channel != 1) {
    throw InvalidArgument("mux channel must be 0 or 1, got " + std::to_string(channel));
  }
  set_mux(channel == 0 ? MuxLevel::Low : MuxLevel::High);
  long sum = 0;
  for (int i = 0; i < kReadsPerSample; ++i) sum += read_adc();
  const double mean = static_cast<double>(sum) / kReadsPerSample;

  SensorSample s;
  s.device_id = config_.device_id;
  s.channel = channel;
  s.raw_counts = mean;
  s.ppm = counts_to_ppm(config_.curves[channel], mean, channel);
  s.taken_at = config_.start + std::chrono::milliseconds(std::llround(clock_s_ * 1000.0));
  return s;
}

LoopStats run_device_loop(VirtualDevice& device, std::chrono::milliseconds duration,
                          SampleSink& sink) {
  LoopStats stats;
  const auto period = device.config().sample_period;
  const auto ticks = duration.count() > 0 ? duration / period : 0;
  for (std::int64_t i = 0; i < ticks; ++i) {
    device.set_clock(static_cast<double>(i * period.count()) / 1000.0);
    SensorSample mq135 = device.sample_channel(0);
    SensorSample mq3 = device.sample_channel(1);
    ++stats.ticks;
    DeliveryResult res;
    try {
      res = sink.deliver(device.config(), mq135, mq3);
    } catch (const std::exception& e) {
      res = {false, e.what()};
    }
    if (res.ok) {
      ++stats.delivered;
    } else {
      ++stats.failed;
      stats.errors.push_back("tick " + std::to_string(i) + ": " + res.error);
    }
  }
  return stats;
}

DeliveryResult CollectingSink::deliver(const DeviceConfig&, const SensorSample& mq135,
                                       const SensorSample& mq3) {
  pairs.emplace_back(mq135, mq3);
  return {};
}

ScenarioFile ScenarioFile::from_config(const KeyValueConfig& cfg) {
  ScenarioFile plan;
  plan.period = std::chrono::milliseconds(cfg.get_int("simulation", "period_ms", 1000));
  if (plan.period.count() <= 0) throw ParseError("[simulation] period_ms must be > 0");
  if (auto start = cfg.get("simulation", "start")) plan.start = parse_timestamp(*start);

  const auto mq135 = SensorCurve::from_config(cfg, "mq135", SensorCurve::mq135_default());
  const auto mq3 = SensorCurve::from_config(cfg, "mq3", SensorCurve::mq3_default());

  for (const auto* section : cfg.sections_with_prefix("device:")) {
    const auto& name = section->name;
    DeviceConfig dev;
    dev.device_id = name.substr(std::string_view("device:").size());
    if (dev.device_id.empty()) throw ParseError("device section needs an id: [device:<id>]");
    dev.curves = {mq135, mq3};
    dev.noise_sigma = cfg.get_double(name, "noise_sigma", 2.0);
    dev.rng_seed = cfg.get_uint(name, "seed", 1);
    dev.sample_period = plan.period;
    dev.start = plan.start;
    dev.write_api_key = cfg.get_string(name, "api_key", "");
    GasScenario scenario;
    scenario.gas[0] = Timeline::parse(cfg.get_string(name, "mq135", "0:400"));
    scenario.gas[1] = Timeline::parse(cfg.get_string(name, "mq3", "0:0.4"));
    plan.devices.emplace_back(std::move(dev), std::move(scenario));
  }
  return plan;
}

}  // namespace aeropipe::sim
