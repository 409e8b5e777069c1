#include "aeropipe/aqi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aeropipe/config.hpp"
#include "aeropipe/embedded_data.hpp"
#include "aeropipe/errors.hpp"
#include "aeropipe/fileutil.hpp"

namespace aeropipe::aqi {

BreakpointTable BreakpointTable::parse_csv(std::string_view text) {
  BreakpointTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto cells = split_csv_line(t);
    if (!header_seen) {
      if (cells.size() != 5 || trim(cells[0]) != "pollutant") {
        throw ParseError("breakpoint table header must be "
                         "pollutant,conc_low,conc_high,index_low,index_high");
      }
      header_seen = true;
      continue;
    }
    auto where = "breakpoint table line " + std::to_string(line_no);
    if (cells.size() != 5) throw ParseError(where + ": expected 5 fields");
    auto p = parse_pollutant(trim(cells[0]));
    if (!p) throw ParseError(where + ": unknown pollutant '" + cells[0] + "'");
    double v[4];
    for (int i = 0; i < 4; ++i) {
      if (!parse_double(trim(cells[i + 1]), v[i])) throw ParseError(where + ": bad number");
    }
    Segment seg{v[0], v[1], v[2], v[3]};
    if (!(seg.conc_high > seg.conc_low) || !(seg.index_high > seg.index_low)) {
      throw ParseError(where + ": segment must be increasing");
    }
    auto& segs = table.segments_[*p];
    if (segs.empty() ? (seg.conc_low != 0 || seg.index_low != 0)
                     : (seg.conc_low != segs.back().conc_high ||
                        seg.index_low != segs.back().index_high)) {
      throw ParseError(where + ": segments must be contiguous and start at 0");
    }
    segs.push_back(seg);
  }
  if (!header_seen) throw ParseError("breakpoint table is empty");
  return table;
}

const BreakpointTable& BreakpointTable::cpcb() {
  static const BreakpointTable table = parse_csv(embedded::cpcb_breakpoints_csv());
  return table;
}

const std::vector<Segment>& BreakpointTable::segments(Pollutant p) const {
  auto it = segments_.find(p);
  if (it == segments_.end()) {
    throw NoSubIndexError("no sub-index defined for " + std::string(pollutant_name(p)));
  }
  return it->second;
}

std::vector<Pollutant> BreakpointTable::pollutants() const {
  std::vector<Pollutant> out;
  for (const auto& [p, segs] : segments_) out.push_back(p);
  return out;
}

double BreakpointTable::sub_index(Pollutant p, double c) const {
  const auto& segs = segments(p);
  if (!(c >= 0)) {
    throw InvalidArgument("concentration must be >= 0 for " + std::string(pollutant_name(p)));
  }
  if (c >= segs.back().conc_high) return segs.back().index_high;
  auto it = std::find_if(segs.begin(), segs.end(), [&](const Segment& s) { return c <= s.conc_high; });
  return it->index_low +
         (it->index_high - it->index_low) * (c - it->conc_low) / (it->conc_high - it->conc_low);
}

double sub_index(Pollutant p, double concentration) {
  return BreakpointTable::cpcb().sub_index(p, concentration);
}

std::optional<AqiResult> overall_aqi(const CityDayRecord& record, const BreakpointTable& table) {
  std::optional<AqiResult> best;
  int used = 0;
  bool has_pm = false;
  for (auto p : kAllPollutants) {
    const auto& value = record[p];
    if (!value || !table.covers(p)) continue;
    const double idx = table.sub_index(p, *value);
    ++used;
    has_pm = has_pm || p == Pollutant::PM2_5 || p == Pollutant::PM10;
    if (!best || idx > best->aqi) best = AqiResult{idx, p, 0};
  }
  if (used < 3 || !has_pm) return std::nullopt;
  best->pollutants_used = used;
  return best;
}

AqiBucket bucket(double aqi) {
  const double r = std::round(aqi);
  if (r <= 50) return AqiBucket::Good;
  if (r <= 100) return AqiBucket::Satisfactory;
  if (r <= 200) return AqiBucket::Moderate;
  if (r <= 300) return AqiBucket::Poor;
  if (r <= 400) return AqiBucket::VeryPoor;
  return AqiBucket::Severe;
}

BucketCrossCheck cross_check_buckets(const std::vector<CityDayRecord>& records) {
  BucketCrossCheck out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.aqi || !r.aqi_bucket) continue;
    ++out.compared;
    if (bucket(*r.aqi) == *r.aqi_bucket) {
      ++out.agreed;
    } else {
      out.mismatched_rows.push_back(i);
    }
  }
  return out;
}

}  // namespace aeropipe::aqi
