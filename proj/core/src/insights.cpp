#include "aeropipe/insights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "aeropipe/embedded_data.hpp"
#include "aeropipe/errors.hpp"
#include "aeropipe/fileutil.hpp"

namespace aeropipe::insights {

using nlohmann::ordered_json;

namespace {

/// Sorting first makes the sum independent of input row order.
double order_free_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0;
  for (double v : values) s += v;
  return s / double(values.size());
}

PollutantGroup parse_group(const KeyValueConfig& cfg, const std::string& name) {
  PollutantGroup g{name, {}};
  for (const auto& token : cfg.get_list("groups", name)) {
    auto p = parse_pollutant(token);
    if (!p) throw ParseError("[groups] " + name + ": unknown pollutant '" + token + "'");
    g.members.push_back(*p);
  }
  std::sort(g.members.begin(), g.members.end());
  return g;
}

ordered_json opt_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

GroupSet GroupSet::from_config(const KeyValueConfig& cfg) {
  GroupSet gs{parse_group(cfg, "vehicular"), parse_group(cfg, "industrial")};
  std::set<Pollutant> seen;
  for (const auto* g : {&gs.vehicular, &gs.industrial}) {
    for (auto p : g->members) {
      if (!seen.insert(p).second) {
        throw ParseError("pollutant " + std::string(pollutant_name(p)) +
                         " appears in more than one group");
      }
    }
  }
  if (seen.size() != kPollutantCount) {
    throw ParseError("pollutant groups must cover all twelve pollutants");
  }
  return gs;
}

const GroupSet& GroupSet::defaults() {
  static const GroupSet gs =
      from_config(KeyValueConfig::parse(embedded::pollutant_groups_ini(), "pollutant_groups.ini"));
  return gs;
}

const PollutantGroup& GroupSet::by_name(std::string_view name) const {
  if (name == "vehicular") return vehicular;
  if (name == "industrial") return industrial;
  throw InvalidArgument("group must be 'vehicular' or 'industrial', got '" + std::string(name) +
                        "'");
}

std::vector<Column> numeric_columns() {
  std::vector<Column> cols;
  for (auto p : kAllPollutants) cols.push_back(column_of(p));
  cols.push_back(Column::Aqi);
  return cols;
}

CorrelationMatrix correlation_matrix(const std::vector<CityDayRecord>& records,
                                     const std::vector<Column>& columns) {
  if (records.size() < 2) throw InvalidArgument("correlation needs at least two records");
  CorrelationMatrix m;
  m.columns = columns;
  const std::size_t k = columns.size();
  m.cells.assign(k * k, std::nullopt);
  for (auto c : columns) (void)records.front().numeric(c);  // validates the column kind

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      std::vector<std::pair<double, double>> xy;
      for (const auto& r : records) {
        auto a = r.numeric(columns[i]), b = r.numeric(columns[j]);
        if (a && b) xy.emplace_back(*a, *b);
      }
      if (xy.size() < 3) continue;
      std::sort(xy.begin(), xy.end());
      double mx = 0, my = 0;
      for (auto [a, b] : xy) {
        mx += a;
        my += b;
      }
      mx /= double(xy.size());
      my /= double(xy.size());
      double sxy = 0, sxx = 0, syy = 0;
      for (auto [a, b] : xy) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
      }
      if (sxx == 0 || syy == 0) continue;
      const double r = i == j ? 1.0 : std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
      m.cells[i * k + j] = r;
      m.cells[j * k + i] = r;
    }
  }
  return m;
}

std::string CorrelationMatrix::to_csv() const {
  std::ostringstream out;
  out << "row,column,value\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      out << column_name(columns[i]) << ',' << column_name(columns[j]) << ',';
      if (const auto& v = at(i, j)) out << format_double(*v);
      out << '\n';
    }
  }
  return out.str();
}

std::string CorrelationMatrix::to_json() const {
  ordered_json doc;
  ordered_json names = ordered_json::array();
  for (auto c : columns) names.push_back(std::string(column_name(c)));
  doc["columns"] = names;
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < columns.size(); ++j) row.push_back(opt_json(at(i, j)));
    rows.push_back(row);
  }
  doc["matrix"] = rows;
  return doc.dump(2) + "\n";
}

GroupMeans group_pollution_by_city(const std::vector<CityDayRecord>& records,
                                   const PollutantGroup& group,
                                   const std::vector<std::string>& cities) {
  GroupMeans out;
  out.group = group.name;
  std::set<std::string> known;
  for (const auto& r : records) known.insert(r.city);
  std::set<std::string> wanted;
  for (const auto& c : cities) {
    if (known.count(c)) {
      wanted.insert(c);
    } else {
      out.warnings.push_back("city '" + c + "' not found in dataset");
    }
  }
  if (!cities.empty() && wanted.empty()) return out;

  std::map<std::pair<std::string, Pollutant>, std::vector<double>> values;
  for (const auto& r : records) {
    if (!wanted.empty() && !wanted.count(r.city)) continue;
    for (auto p : group.members) {
      if (r[p]) values[{r.city, p}].push_back(*r[p]);
    }
  }
  for (auto& [key, vals] : values) {
    out.rows.push_back({key.first, key.second, order_free_mean(vals), vals.size()});
  }
  return out;
}

std::vector<std::pair<Pollutant, double>> GroupMeans::pollutant_ranking() const {
  std::map<Pollutant, std::vector<double>> per;
  for (const auto& r : rows) per[r.pollutant].push_back(r.mean);
  std::vector<std::pair<Pollutant, double>> out;
  for (auto& [p, v] : per) out.emplace_back(p, order_free_mean(v));
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::string GroupMeans::to_csv() const {
  std::ostringstream out;
  out << "group,city,pollutant,mean,count\n";
  for (const auto& r : rows) {
    out << group << ',' << csv_escape(r.city) << ',' << pollutant_name(r.pollutant) << ','
        << format_double(r.mean) << ',' << r.count << '\n';
  }
  return out.str();
}

std::string GroupMeans::to_json() const {
  ordered_json doc;
  doc["group"] = group;
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"city", r.city},
                   {"pollutant", std::string(pollutant_name(r.pollutant))},
                   {"mean", r.mean},
                   {"count", r.count}});
  }
  doc["rows"] = arr;
  doc["warnings"] = warnings;
  return doc.dump(2) + "\n";
}

std::vector<CityScore> city_rankings(const std::vector<CityDayRecord>& records,
                                     const PollutantGroup& group, std::size_t n) {
  if (n == 0) throw InvalidArgument("ranking size must be >= 1");
  auto means = group_pollution_by_city(records, group);
  std::map<Pollutant, std::vector<double>> across;
  for (const auto& r : means.rows) across[r.pollutant].push_back(r.mean);
  std::map<Pollutant, std::pair<double, double>> moments;  // mean, sd
  for (auto& [p, v] : across) {
    const double mu = order_free_mean(v);
    std::vector<double> dev;
    for (double x : v) dev.push_back((x - mu) * (x - mu));
    moments[p] = {mu, std::sqrt(order_free_mean(dev))};
  }
  std::map<std::string, std::vector<double>> z;
  for (const auto& r : means.rows) {
    const auto [mu, sd] = moments[r.pollutant];
    z[r.city].push_back(sd > 0 ? (r.mean - mu) / sd : 0.0);
  }
  std::vector<CityScore> out;
  for (auto& [city, zs] : z) out.push_back({city, order_free_mean(zs)});
  std::sort(out.begin(), out.end(), [](const CityScore& a, const CityScore& b) {
    return a.score > b.score || (a.score == b.score && a.city < b.city);
  });
  if (out.size() > n) out.resize(n);
  return out;
}

std::string rankings_csv(const std::vector<CityScore>& scores) {
  std::ostringstream out;
  out << "rank,city,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << i + 1 << ',' << csv_escape(scores[i].city) << ',' << format_double(scores[i].score)
        << '\n';
  }
  return out.str();
}

std::string rankings_json(const std::vector<CityScore>& scores) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    arr.push_back({{"rank", i + 1}, {"city", scores[i].city}, {"score", scores[i].score}});
  }
  return arr.dump(2) + "\n";
}

Granularity parse_granularity(std::string_view text) {
  if (text == "daily") return Granularity::Daily;
  if (text == "monthly") return Granularity::Monthly;
  if (text == "yearly") return Granularity::Yearly;
  throw InvalidArgument("granularity must be daily, monthly or yearly");
}

std::vector<TrendPoint> aqi_trend(const std::vector<CityDayRecord>& records,
                                  const std::string& city, Granularity granularity) {
  bool found = false;
  std::map<std::string, std::vector<double>> per;
  for (const auto& r : records) {
    if (r.city != city) continue;
    found = true;
    if (!r.aqi) continue;
    auto date = format_date(r.date);
    auto key = granularity == Granularity::Daily     ? date
               : granularity == Granularity::Monthly ? date.substr(0, 7)
                                                     : date.substr(0, 4);
    per[key].push_back(*r.aqi);
  }
  if (!found) throw NotFound("city '" + city + "' not found in dataset");
  std::vector<TrendPoint> out;
  for (auto& [period, v] : per) out.push_back({period, order_free_mean(v), v.size()});
  return out;
}

std::string trend_csv(const std::string& city, const std::vector<TrendPoint>& points) {
  std::ostringstream out;
  out << "city,period,mean_aqi,count\n";
  for (const auto& p : points) {
    out << csv_escape(city) << ',' << p.period << ',' << format_double(p.mean_aqi) << ','
        << p.count << '\n';
  }
  return out.str();
}

std::string trend_json(const std::string& city, const std::vector<TrendPoint>& points) {
  ordered_json doc;
  doc["city"] = city;
  ordered_json arr = ordered_json::array();
  for (const auto& p : points) {
    arr.push_back({{"period", p.period}, {"mean_aqi", p.mean_aqi}, {"count", p.count}});
  }
  doc["points"] = arr;
  return doc.dump(2) + "\n";
}

ExtremesMode parse_extremes_mode(std::string_view text) {
  if (text == "yearly_mean") return ExtremesMode::YearlyMean;
  if (text == "worst_day") return ExtremesMode::WorstDay;
  throw InvalidArgument("extremes mode must be yearly_mean or worst_day");
}

Extremes extremes(const std::vector<CityDayRecord>& records, ExtremesMode mode) {
  std::map<std::pair<std::string, int>, std::vector<double>> yearly;
  std::map<std::string, std::vector<double>> overall;
  const CityDayRecord* worst = nullptr;
  for (const auto& r : records) {
    if (!r.aqi) continue;
    yearly[{r.city, int(r.date.year())}].push_back(*r.aqi);
    overall[r.city].push_back(*r.aqi);
    if (!worst || *r.aqi > *worst->aqi ||
        (*r.aqi == *worst->aqi &&
         std::tie(r.city, r.date) < std::tie(worst->city, worst->date))) {
      worst = &r;
    }
  }
  if (overall.empty()) throw InvalidArgument("no AQI values in dataset");

  Extremes e;
  if (mode == ExtremesMode::YearlyMean) {
    bool first = true;
    for (auto& [key, v] : yearly) {
      const double m = order_free_mean(v);
      if (first || m > e.max_value) {
        e.max_city = key.first;
        e.max_period = std::to_string(key.second);
        e.max_value = m;
        first = false;
      }
    }
  } else {
    e.max_city = worst->city;
    e.max_period = format_date(worst->date);
    e.max_value = *worst->aqi;
  }
  bool first = true;
  for (auto& [city, v] : overall) {
    const double m = order_free_mean(v);
    if (first || m < e.min_value) {
      e.min_city = city;
      e.min_value = m;
      first = false;
    }
  }
  return e;
}

std::string Extremes::to_csv() const {
  std::ostringstream out;
  out << "kind,city,period,aqi\n";
  out << "max," << csv_escape(max_city) << ',' << max_period << ',' << format_double(max_value)
      << '\n';
  out << "min," << csv_escape(min_city) << ",all," << format_double(min_value) << '\n';
  return out.str();
}

std::string Extremes::to_json() const {
  ordered_json doc;
  doc["max"] = {{"city", max_city}, {"period", max_period}, {"aqi", max_value}};
  doc["min"] = {{"city", min_city}, {"period", "all"}, {"aqi", min_value}};
  return doc.dump(2) + "\n";
}

}  // namespace aeropipe::insights
