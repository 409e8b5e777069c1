#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aeropipe/model.hpp"

namespace aeropipe {

/// Parses the city-day CSV. The header must name City, Date, the twelve
/// pollutants and AQI (any order, case-insensitive, trimmed); AQI_Bucket is
/// optional. Empty cells become absent values. Throws ParseError naming the
/// line and column on malformed cells, bad dates or negative concentrations.
std::vector<CityDayRecord> parse_city_day_csv(std::istream& in);
std::vector<CityDayRecord> load_city_day_csv(const std::filesystem::path& path);

/// Canonical column order, all sixteen columns.
void write_city_day_csv(std::ostream& out, std::span<const CityDayRecord> records);
std::string city_day_csv(std::span<const CityDayRecord> records);

/// Records where every column in `required` is present, in input order.
std::vector<CityDayRecord> drop_incomplete(std::span<const CityDayRecord> records,
                                           std::span<const Column> required);

/// The twelve pollutant columns.
std::vector<Column> pollutant_columns();
/// Twelve pollutants plus `target` (Aqi or AqiBucket): the default filter
/// before modelling.
std::vector<Column> modelling_columns(Column target);

}  // namespace aeropipe
