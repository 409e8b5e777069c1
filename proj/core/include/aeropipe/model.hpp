#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "aeropipe/timeutil.hpp"

namespace aeropipe {

/// The two multiplexed sensors. The enumerator value is the mux channel.
enum class GasKind : int { Mq135Air = 0, Mq3Alcohol = 1 };

constexpr int mux_channel(GasKind g) noexcept { return static_cast<int>(g); }
GasKind gas_for_channel(int channel);
std::string_view gas_name(GasKind g) noexcept;

/// One averaged analog reading of one mux channel.
struct SensorSample {
  std::string device_id;
  int channel = 0;
  double raw_counts = 0.0;  ///< mean of the reads, not re-truncated
  double ppm = 0.0;
  Timestamp taken_at{};

  bool operator==(const SensorSample&) const = default;
};

/// One persisted telemetry row of a channel.
struct ChannelEntry {
  std::int64_t entry_id = 0;
  Timestamp created_at{};
  std::optional<double> field1;  ///< MQ135 ppm
  std::optional<double> field2;  ///< MQ3 ppm

  bool operator==(const ChannelEntry&) const = default;
};

enum class AqiBucket : int { Good = 0, Satisfactory, Moderate, Poor, VeryPoor, Severe };

inline constexpr int kBucketCount = 6;
inline constexpr std::array<AqiBucket, kBucketCount> kAllBuckets = {
    AqiBucket::Good, AqiBucket::Satisfactory, AqiBucket::Moderate,
    AqiBucket::Poor, AqiBucket::VeryPoor,     AqiBucket::Severe};

std::string_view bucket_name(AqiBucket b) noexcept;
/// Case-insensitive; accepts the canonical names ("Very Poor" etc.).
std::optional<AqiBucket> parse_bucket(std::string_view name);

enum class Pollutant : int {
  PM2_5 = 0, PM10, NO, NO2, NOx, NH3, CO, SO2, O3, Benzene, Toluene, Xylene
};

inline constexpr int kPollutantCount = 12;
inline constexpr std::array<Pollutant, kPollutantCount> kAllPollutants = {
    Pollutant::PM2_5, Pollutant::PM10, Pollutant::NO,      Pollutant::NO2,
    Pollutant::NOx,   Pollutant::NH3,  Pollutant::CO,      Pollutant::SO2,
    Pollutant::O3,    Pollutant::Benzene, Pollutant::Toluene, Pollutant::Xylene};

/// Dataset column spelling, e.g. "PM2.5".
std::string_view pollutant_name(Pollutant p) noexcept;
std::optional<Pollutant> parse_pollutant(std::string_view name);

/// Every column of the city-day schema. AqiBucket is carried by public
/// exports of the dataset but is optional on input.
enum class Column : int {
  City = 0, Date,
  PM2_5, PM10, NO, NO2, NOx, NH3, CO, SO2, O3, Benzene, Toluene, Xylene,
  Aqi, AqiBucket
};

inline constexpr int kColumnCount = 16;
constexpr Column column_of(Pollutant p) noexcept {
  return static_cast<Column>(static_cast<int>(p) + 2);
}
std::string_view column_name(Column c) noexcept;
std::optional<Column> parse_column(std::string_view name);

struct CityDayRecord {
  std::string city;
  Date date{};
  std::array<std::optional<double>, kPollutantCount> pollutants{};
  std::optional<double> aqi;
  std::optional<AqiBucket> aqi_bucket;

  std::optional<double>& operator[](Pollutant p) { return pollutants[static_cast<int>(p)]; }
  const std::optional<double>& operator[](Pollutant p) const {
    return pollutants[static_cast<int>(p)];
  }
  /// City and Date are always present.
  bool has(Column c) const;
  /// Numeric value of a pollutant column or Aqi.
  std::optional<double> numeric(Column c) const;

  bool operator==(const CityDayRecord&) const = default;
};

}  // namespace aeropipe
