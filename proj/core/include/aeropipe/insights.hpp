#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aeropipe/config.hpp"
#include "aeropipe/model.hpp"

namespace aeropipe::insights {

struct PollutantGroup {
  std::string name;
  std::vector<Pollutant> members;
};

/// Vehicular and industrial groups. Must be disjoint and cover all twelve
/// pollutants.
struct GroupSet {
  PollutantGroup vehicular;
  PollutantGroup industrial;

  /// `[groups] vehicular = ..., industrial = ...`. Throws ParseError.
  static GroupSet from_config(const KeyValueConfig& cfg);
  /// The checked-in core/data/pollutant_groups.ini.
  static const GroupSet& defaults();
  const PollutantGroup& by_name(std::string_view name) const;
};

/// Pearson correlations with pairwise-complete rows. A cell is absent when
/// fewer than three rows share both values or either side has zero variance.
struct CorrelationMatrix {
  std::vector<Column> columns;
  std::vector<std::optional<double>> cells;  ///< row-major, columns x columns

  const std::optional<double>& at(std::size_t i, std::size_t j) const {
    return cells[i * columns.size() + j];
  }
  /// Long format: row,column,value (empty value for absent cells).
  std::string to_csv() const;
  std::string to_json() const;
};

/// The twelve pollutants followed by AQI.
std::vector<Column> numeric_columns();

/// Throws InvalidArgument for fewer than two records or non-numeric columns.
CorrelationMatrix correlation_matrix(const std::vector<CityDayRecord>& records,
                                     const std::vector<Column>& columns);

struct CityPollutantMean {
  std::string city;
  Pollutant pollutant;
  double mean;
  std::size_t count;
};

struct GroupMeans {
  std::string group;
  std::vector<CityPollutantMean> rows;  ///< sorted by city, then schema order
  std::vector<std::string> warnings;

  /// The group's pollutants ordered by mean across the selected cities,
  /// highest first (mean of the per-city means).
  std::vector<std::pair<Pollutant, double>> pollutant_ranking() const;
  std::string to_csv() const;
  std::string to_json() const;
};

/// Mean of non-missing daily values per (city, pollutant). Unknown cities in
/// the filter produce a warning and no rows.
GroupMeans group_pollution_by_city(const std::vector<CityDayRecord>& records,
                                   const PollutantGroup& group,
                                   const std::vector<std::string>& cities = {});

struct CityScore {
  std::string city;
  double score;
};

/// Per-city group means, each pollutant z-scored across cities, averaged per
/// city. Highest score first, ties by city name; at most `n` cities.
std::vector<CityScore> city_rankings(const std::vector<CityDayRecord>& records,
                                     const PollutantGroup& group, std::size_t n = 9);
std::string rankings_csv(const std::vector<CityScore>& scores);
std::string rankings_json(const std::vector<CityScore>& scores);

enum class Granularity { Daily, Monthly, Yearly };
Granularity parse_granularity(std::string_view text);

struct TrendPoint {
  std::string period;  ///< YYYY-MM-DD, YYYY-MM or YYYY
  double mean_aqi;
  std::size_t count;
};

/// Mean AQI per period, periods ascending. Throws NotFound for an unknown city.
std::vector<TrendPoint> aqi_trend(const std::vector<CityDayRecord>& records,
                                  const std::string& city, Granularity granularity);
std::string trend_csv(const std::string& city, const std::vector<TrendPoint>& points);
std::string trend_json(const std::string& city, const std::vector<TrendPoint>& points);

enum class ExtremesMode { YearlyMean, WorstDay };
ExtremesMode parse_extremes_mode(std::string_view text);

struct Extremes {
  std::string max_city;
  std::string max_period;  ///< year (yearly mean) or date (worst day)
  double max_value = 0;
  std::string min_city;
  double min_value = 0;  ///< lowest overall mean AQI of any city

  std::string to_csv() const;
  std::string to_json() const;
};

/// Throws InvalidArgument when no record carries an AQI.
Extremes extremes(const std::vector<CityDayRecord>& records,
                  ExtremesMode mode = ExtremesMode::YearlyMean);

}  // namespace aeropipe::insights
