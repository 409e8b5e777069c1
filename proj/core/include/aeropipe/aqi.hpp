#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "aeropipe/model.hpp"

namespace aeropipe::aqi {

struct Segment {
  double conc_low;
  double conc_high;
  double index_low;
  double index_high;
};

/// Per-pollutant piecewise-linear breakpoints. Segments are contiguous in
/// both concentration and index and start at concentration 0.
class BreakpointTable {
 public:
  /// CSV with columns pollutant,conc_low,conc_high,index_low,index_high.
  /// Lines starting with '#' are comments. Throws ParseError on malformed
  /// rows or non-contiguous segments.
  static BreakpointTable parse_csv(std::string_view text);
  /// The checked-in CPCB table.
  static const BreakpointTable& cpcb();

  bool covers(Pollutant p) const { return segments_.count(p) != 0; }
  const std::vector<Segment>& segments(Pollutant p) const;
  std::vector<Pollutant> pollutants() const;

  /// Piecewise-linear interpolation; above the top segment the result clamps
  /// to the top index. Throws NoSubIndexError for untabled pollutants and
  /// InvalidArgument for negative concentrations.
  double sub_index(Pollutant p, double concentration) const;

 private:
  std::map<Pollutant, std::vector<Segment>> segments_;
};

double sub_index(Pollutant p, double concentration);

struct AqiResult {
  double aqi;
  Pollutant dominant;
  int pollutants_used;
};

/// Max of the available sub-indices. nullopt ("insufficient data") unless at
/// least three sub-indexed pollutants are present, one of them PM2.5 or PM10.
/// On equal maxima the pollutant earliest in schema order is reported.
std::optional<AqiResult> overall_aqi(const CityDayRecord& record,
                                     const BreakpointTable& table = BreakpointTable::cpcb());

/// Band of round(aqi): 0-50 Good, 51-100 Satisfactory, 101-200 Moderate,
/// 201-300 Poor, 301-400 Very Poor, above 400 Severe.
AqiBucket bucket(double aqi);

struct BucketCrossCheck {
  std::size_t compared = 0;
  std::size_t agreed = 0;
  std::vector<std::size_t> mismatched_rows;  ///< indices into the input
  double agreement() const { return compared ? double(agreed) / double(compared) : 1.0; }
};

/// Recomputes bucket(aqi) for every row carrying both AQI and AQI_Bucket.
BucketCrossCheck cross_check_buckets(const std::vector<CityDayRecord>& records);

}  // namespace aeropipe::aqi
