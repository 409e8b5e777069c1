#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "aeropipe/config.hpp"
#include "aeropipe/model.hpp"

namespace aeropipe::sim {

inline constexpr int kAdcMax = 1023;
inline constexpr int kReadsPerSample = 6;

/// MQ-series power-law response, ppm = a * (Rs/R0)^b, with Rs recovered from
/// a voltage divider against the load resistor.
struct SensorCurve {
  double a = 1.0;
  double b = -1.0;
  double r0 = 1.0;   ///< ohms, resistance in clean air
  double rl = 1.0;   ///< ohms, load resistor
  double vcc = 5.0;  ///< volts

  /// Throws InvalidArgument unless a, r0, rl, vcc > 0 and b < 0.
  void validate() const;

  static SensorCurve mq135_default();
  static SensorCurve mq3_default();
  /// Reads `[curve:<name>]`; missing keys fall back to `base`.
  static SensorCurve from_config(const KeyValueConfig& cfg, const std::string& name,
                                 const SensorCurve& base);
};

/// Forward model: true concentration to an ADC reading, clamped to [1, 1022].
/// Non-positive ppm maps to the low clamp.
int ppm_to_counts(const SensorCurve& curve, double true_ppm, int noise_draw = 0);

/// Inverse model. `counts` may be fractional (an averaged reading).
/// Throws SaturationError when counts <= 0 or >= 1023.
double counts_to_ppm(const SensorCurve& curve, double counts, int channel = 0);

/// Rs (ohms) implied by a reading.
double counts_to_resistance(const SensorCurve& curve, double counts, int channel = 0);

class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  /// Integer count offset for one ADC read.
  virtual int draw() = 0;
};

/// Rounded N(0, sigma) offsets from a seeded mt19937_64.
class GaussianNoise final : public NoiseSource {
 public:
  GaussianNoise(double sigma, std::uint64_t seed);
  int draw() override;

 private:
  double sigma_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

/// Replays a fixed list of offsets, cycling.
class ScriptedNoise final : public NoiseSource {
 public:
  explicit ScriptedNoise(std::vector<int> draws);
  int draw() override;

 private:
  std::vector<int> draws_;
  std::size_t next_ = 0;
};

/// Piecewise-linear concentration over scenario time, held after the last knot
/// (and before the first).
class Timeline {
 public:
  struct Knot {
    double offset_s;
    double ppm;
  };

  Timeline() = default;
  /// Throws InvalidArgument unless offsets strictly increase and ppm >= 0.
  explicit Timeline(std::vector<Knot> knots);
  /// Parses "0:400, 5:800" (offset_seconds:ppm pairs).
  static Timeline parse(std::string_view text);

  double at(double offset_s) const;
  const std::vector<Knot>& knots() const noexcept { return knots_; }

 private:
  std::vector<Knot> knots_;
};

struct GasScenario {
  std::array<Timeline, 2> gas;  ///< indexed by mux channel

  double ppm_at(int channel, double offset_s) const { return gas.at(channel).at(offset_s); }
};

enum class MuxLevel { Low, High };

struct DeviceConfig {
  std::string device_id = "node-1";
  std::array<SensorCurve, 2> curves{SensorCurve::mq135_default(), SensorCurve::mq3_default()};
  double noise_sigma = 2.0;
  std::uint64_t rng_seed = 1;
  std::chrono::milliseconds sample_period{1000};
  Timestamp start{};
  std::string write_api_key;  ///< used by network sinks
};

/// Emulated NodeMCU: two sensors behind one analog pin, a mux select line
/// and a virtual clock. Not thread-safe; one device per task.
class VirtualDevice {
 public:
  VirtualDevice(DeviceConfig config, GasScenario scenario);
  /// Replace the noise source (scripted tests).
  VirtualDevice(DeviceConfig config, GasScenario scenario, std::unique_ptr<NoiseSource> noise);

  const DeviceConfig& config() const noexcept { return config_; }
  MuxLevel mux() const noexcept { return mux_; }
  void set_mux(MuxLevel level) noexcept { mux_ = level; }

  /// Scenario time of the next reads.
  double clock_s() const noexcept { return clock_s_; }
  void set_clock(double offset_s) noexcept { clock_s_ = offset_s; }

  /// One noisy ADC read of the currently selected channel.
  int read_adc();

  /// Selects `channel`, averages six reads and converts the mean to ppm.
  SensorSample sample_channel(int channel);

 private:
  DeviceConfig config_;
  GasScenario scenario_;
  std::unique_ptr<NoiseSource> noise_;
  MuxLevel mux_ = MuxLevel::Low;
  double clock_s_ = 0.0;
};

struct DeliveryResult {
  bool ok = true;
  std::string error;
};

/// Receives one (MQ135, MQ3) pair per tick. Must tolerate concurrent calls
/// from several devices.
class SampleSink {
 public:
  virtual ~SampleSink() = default;
  virtual DeliveryResult deliver(const DeviceConfig& device, const SensorSample& mq135,
                                 const SensorSample& mq3) = 0;
};

struct LoopStats {
  std::size_t ticks = 0;
  std::size_t delivered = 0;
  std::size_t failed = 0;
  std::vector<std::string> errors;  ///< one per failed tick
};

/// floor(duration / period) ticks; each tick samples channel 0 (mux Low) then
/// channel 1 (mux High) at the tick's scenario time and hands the pair to the
/// sink. A failing sink is counted and the loop carries on.
LoopStats run_device_loop(VirtualDevice& device, std::chrono::milliseconds duration,
                          SampleSink& sink);

/// Sink that keeps every pair in memory.
class CollectingSink final : public SampleSink {
 public:
  DeliveryResult deliver(const DeviceConfig& device, const SensorSample& mq135,
                         const SensorSample& mq3) override;
  std::vector<std::pair<SensorSample, SensorSample>> pairs;
};

/// A simulation plan read from a scenario file: one entry per `[device:<id>]`.
struct ScenarioFile {
  std::chrono::milliseconds period{1000};
  Timestamp start{};
  std::vector<std::pair<DeviceConfig, GasScenario>> devices;

  /// Section layout:
  ///   [simulation] start, period_ms
  ///   [curve:mq135] / [curve:mq3] a, b, r0, rl, vcc
  ///   [device:<id>] seed, noise_sigma, api_key, mq135 = "t:ppm, ...", mq3 = ...
  static ScenarioFile from_config(const KeyValueConfig& cfg);
};

}  // namespace aeropipe::sim
