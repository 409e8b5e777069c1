#include "aeropipe/model.hpp"

#include <algorithm>
#include <cctype>

#include "aeropipe/errors.hpp"

namespace aeropipe {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

constexpr std::array<std::string_view, kBucketCount> kBucketNames = {
    "Good", "Satisfactory", "Moderate", "Poor", "Very Poor", "Severe"};

constexpr std::array<std::string_view, kColumnCount> kColumnNames = {
    "City", "Date", "PM2.5", "PM10",    "NO",      "NO2",    "NOx", "NH3",
    "CO",   "SO2",  "O3",    "Benzene", "Toluene", "Xylene", "AQI", "AQI_Bucket"};

}  // namespace

GasKind gas_for_channel(int channel) {
  if (channel == 0) return GasKind::Mq135Air;
  if (channel == 1) return GasKind::Mq3Alcohol;
  throw InvalidArgument("mux channel must be 0 or 1, got " + std::to_string(channel));
}

std::string_view gas_name(GasKind g) noexcept {
  return g == GasKind::Mq135Air ? "MQ135" : "MQ3";
}

std::string_view bucket_name(AqiBucket b) noexcept {
  return kBucketNames[static_cast<int>(b)];
}

std::optional<AqiBucket> parse_bucket(std::string_view name) {
  for (int i = 0; i < kBucketCount; ++i) {
    if (iequals(name, kBucketNames[i])) return static_cast<AqiBucket>(i);
  }
  if (iequals(name, "VeryPoor")) return AqiBucket::VeryPoor;
  return std::nullopt;
}

std::string_view pollutant_name(Pollutant p) noexcept {
  return kColumnNames[static_cast<int>(column_of(p))];
}

std::optional<Pollutant> parse_pollutant(std::string_view name) {
  auto c = parse_column(name);
  if (!c) return std::nullopt;
  int idx = static_cast<int>(*c) - 2;
  if (idx < 0 || idx >= kPollutantCount) return std::nullopt;
  return static_cast<Pollutant>(idx);
}

std::string_view column_name(Column c) noexcept { return kColumnNames[static_cast<int>(c)]; }

std::optional<Column> parse_column(std::string_view name) {
  for (int i = 0; i < kColumnCount; ++i) {
    if (iequals(name, kColumnNames[i])) return static_cast<Column>(i);
  }
  // Common mirror spellings.
  if (iequals(name, "PM2_5") || iequals(name, "PM25")) return Column::PM2_5;
  return std::nullopt;
}

bool CityDayRecord::has(Column c) const {
  switch (c) {
    case Column::City:
    case Column::Date:
      return true;
    case Column::Aqi:
      return aqi.has_value();
    case Column::AqiBucket:
      return aqi_bucket.has_value();
    default:
      return pollutants[static_cast<int>(c) - 2].has_value();
  }
}

std::optional<double> CityDayRecord::numeric(Column c) const {
  if (c == Column::Aqi) return aqi;
  int idx = static_cast<int>(c) - 2;
  if (idx < 0 || idx >= kPollutantCount) {
    throw InvalidArgument("column '" + std::string(column_name(c)) + "' is not numeric");
  }
  return pollutants[idx];
}

}  // namespace aeropipe
