#include "aeropipe/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

#include "aeropipe/config.hpp"
#include "aeropipe/errors.hpp"
#include "aeropipe/fileutil.hpp"

namespace aeropipe {

namespace {

[[noreturn]] void cell_error(std::size_t line, Column col, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ", column " +
                   std::string(column_name(col)) + ": " + what);
}

}  // namespace

std::vector<CityDayRecord> parse_city_day_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  // Skip leading blank lines and a UTF-8 BOM.
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw ParseError("empty city-day file: no header row");

  std::array<int, kColumnCount> position;
  position.fill(-1);
  auto header = split_csv_line(line);
  for (std::size_t i = 0; i < header.size(); ++i) {
    auto name = trim(header[i]);
    auto col = parse_column(name);
    if (!col) continue;  // extra columns are ignored
    if (position[static_cast<int>(*col)] != -1) {
      throw ParseError("duplicate column '" + name + "' in header");
    }
    position[static_cast<int>(*col)] = static_cast<int>(i);
  }
  for (int c = 0; c < kColumnCount; ++c) {
    auto col = static_cast<Column>(c);
    if (col != Column::AqiBucket && position[c] == -1) {
      throw ParseError("missing required column '" + std::string(column_name(col)) + "'");
    }
  }

  std::vector<CityDayRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    auto cell = [&](Column col) -> std::string {
      int pos = position[static_cast<int>(col)];
      if (pos < 0 || static_cast<std::size_t>(pos) >= cells.size()) return {};
      return trim(cells[static_cast<std::size_t>(pos)]);
    };

    CityDayRecord rec;
    rec.city = cell(Column::City);
    if (rec.city.empty()) cell_error(line_no, Column::City, "empty city");
    try {
      rec.date = parse_date(cell(Column::Date));
    } catch (const ParseError& e) {
      cell_error(line_no, Column::Date, e.what());
    }
    for (auto p : kAllPollutants) {
      auto col = column_of(p);
      auto text = cell(col);
      if (text.empty()) continue;
      double v = 0;
      if (!parse_double(text, v)) cell_error(line_no, col, "'" + text + "' is not a number");
      if (v < 0) cell_error(line_no, col, "negative concentration " + text);
      rec[p] = v;
    }
    if (auto text = cell(Column::Aqi); !text.empty()) {
      double v = 0;
      if (!parse_double(text, v)) cell_error(line_no, Column::Aqi, "'" + text + "' is not a number");
      if (v < 0) cell_error(line_no, Column::Aqi, "negative AQI " + text);
      rec.aqi = v;
    }
    if (auto text = cell(Column::AqiBucket); !text.empty()) {
      rec.aqi_bucket = parse_bucket(text);
      if (!rec.aqi_bucket) cell_error(line_no, Column::AqiBucket, "unknown bucket '" + text + "'");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<CityDayRecord> load_city_day_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  try {
    return parse_city_day_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_city_day_csv(std::ostream& out, std::span<const CityDayRecord> records) {
  for (int c = 0; c < kColumnCount; ++c) {
    if (c) out << ',';
    out << column_name(static_cast<Column>(c));
  }
  out << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : records) {
    out << csv_escape(r.city) << ',' << format_date(r.date);
    for (const auto& v : r.pollutants) out << ',' << opt(v);
    out << ',' << opt(r.aqi) << ',';
    if (r.aqi_bucket) out << bucket_name(*r.aqi_bucket);
    out << '\n';
  }
}

std::string city_day_csv(std::span<const CityDayRecord> records) {
  std::ostringstream out;
  write_city_day_csv(out, records);
  return out.str();
}

std::vector<CityDayRecord> drop_incomplete(std::span<const CityDayRecord> records,
                                           std::span<const Column> required) {
  std::vector<CityDayRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (std::all_of(required.begin(), required.end(), [&](Column c) { return r.has(c); })) {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<Column> pollutant_columns() {
  std::vector<Column> cols;
  for (auto p : kAllPollutants) cols.push_back(column_of(p));
  return cols;
}

std::vector<Column> modelling_columns(Column target) {
  auto cols = pollutant_columns();
  cols.push_back(target);
  return cols;
}

}  // namespace aeropipe
