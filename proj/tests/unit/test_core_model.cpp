#include <random>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"

#include "aeropipe/config.hpp"
#include "aeropipe/dataset.hpp"
#include "aeropipe/errors.hpp"
#include "aeropipe/fileutil.hpp"
#include "aeropipe/model.hpp"
#include "aeropipe/timeutil.hpp"

using namespace aeropipe;
using namespace std::chrono;

namespace {

const std::string kHeader =
    "City,Date,PM2.5,PM10,NO,NO2,NOx,NH3,CO,SO2,O3,Benzene,Toluene,Xylene,AQI,AQI_Bucket\n";

std::vector<CityDayRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_city_day_csv(in);
}

CityDayRecord random_record(std::mt19937_64& rng) {
  static const std::vector<std::string> cities{"Delhi", "Mumbai", "Ahmedabad", "Shillong",
                                               "Navi Mumbai, East"};
  std::uniform_real_distribution<double> conc(0.0, 600.0);
  std::uniform_int_distribution<int> day(0, 2000);
  std::bernoulli_distribution missing(0.25);
  CityDayRecord r;
  r.city = cities[rng() % cities.size()];
  r.date = year_month_day{sys_days{year{2015} / 1 / 1} + days{day(rng)}};
  for (auto p : kAllPollutants) {
    if (!missing(rng)) r[p] = conc(rng);
  }
  if (!missing(rng)) r.aqi = conc(rng);
  if (!missing(rng)) r.aqi_bucket = kAllBuckets[rng() % kAllBuckets.size()];
  return r;
}

}  // namespace

TEST_CASE("gas kinds map onto mux channels") {
  CHECK(mux_channel(GasKind::Mq135Air) == 0);
  CHECK(mux_channel(GasKind::Mq3Alcohol) == 1);
  CHECK(gas_for_channel(1) == GasKind::Mq3Alcohol);
  CHECK_THROWS_AS(gas_for_channel(2), InvalidArgument);
}

TEST_CASE("bucket names round-trip") {
  const std::vector<std::string> canonical{"Good", "Satisfactory", "Moderate",
                                           "Poor", "Very Poor",    "Severe"};
  for (std::size_t i = 0; i < kAllBuckets.size(); ++i) {
    CHECK(bucket_name(kAllBuckets[i]) == canonical[i]);
    CHECK(parse_bucket(canonical[i]) == kAllBuckets[i]);
  }
  CHECK(parse_bucket("very poor") == AqiBucket::VeryPoor);
  CHECK_FALSE(parse_bucket("Hazardous"));
}

TEST_CASE("pollutant and column names") {
  CHECK(pollutant_name(Pollutant::PM2_5) == "PM2.5");
  CHECK(parse_pollutant("pm2.5") == Pollutant::PM2_5);
  CHECK(parse_pollutant("Xylene") == Pollutant::Xylene);
  CHECK(parse_column("aqi_bucket") == Column::AqiBucket);
  for (auto p : kAllPollutants) CHECK(parse_column(column_name(column_of(p))) == column_of(p));
}

TEST_CASE("timestamps") {
  const auto ts = parse_timestamp("2024-01-01T00:00:05Z");
  CHECK(format_timestamp(ts) == "2024-01-01T00:00:05Z");
  CHECK(parse_timestamp("2024-01-01 00:00:05") == ts);
  CHECK(format_timestamp(ts + milliseconds(250)) == "2024-01-01T00:00:05.250Z");
  CHECK(parse_timestamp("2024-01-01T00:00:05.250Z") == ts + milliseconds(250));
  CHECK_THROWS_AS(parse_timestamp("yesterday"), ParseError);
  CHECK(format_date(parse_date("2020-02-29")) == "2020-02-29");
  CHECK_THROWS_AS(parse_date("2019-02-29"), ParseError);
  CHECK_THROWS_AS(parse_date("2019-2-1"), ParseError);
}

TEST_CASE("config layering and typed lookups") {
  auto base = KeyValueConfig::parse("[a]\nx = 1\ny = hello\n[b]\nlist = p, q ,, r\n");
  auto overlay = KeyValueConfig::parse("[a]\nx = 2\n[c]\nz = true\n");
  base.merge(overlay);
  CHECK(base.get_int("a", "x", 0) == 2);
  CHECK(base.get_string("a", "y", "") == "hello");
  CHECK(base.get_bool("c", "z", false));
  CHECK(base.get_list("b", "list") == std::vector<std::string>{"p", "q", "r"});
  CHECK(base.get_double("missing", "k", 1.5) == 1.5);
  CHECK_THROWS_AS(base.get_int("a", "y", 0), ParseError);
  CHECK_THROWS_AS(base.require_string("a", "nope"), ParseError);
  // Dump is stable and parses back to the same view.
  auto again = KeyValueConfig::parse(base.dump());
  CHECK(again.dump() == base.dump());
}

TEST_CASE("csv helpers") {
  CHECK(split_csv_line("a,\"b,c\",\"d\"\"e\",") ==
        std::vector<std::string>{"a", "b,c", "d\"e", ""});
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("x,y") == "\"x,y\"");
  double v = 0;
  CHECK(parse_double("1.25", v));
  CHECK(v == 1.25);
  CHECK_FALSE(parse_double("1.25x", v));
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("parse_city_day_csv: header only gives no records") {
  CHECK(parse(kHeader).empty());
}

TEST_CASE("parse_city_day_csv: an all-empty row keeps only city and date") {
  auto recs = parse(kHeader + "Ahmedabad,2015-01-01,,,,,,,,,,,,\n");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].city == "Ahmedabad");
  CHECK(recs[0].date == year_month_day{year{2015}, month{1}, day{1}});
  for (auto p : kAllPollutants) CHECK_FALSE(recs[0][p]);
  CHECK_FALSE(recs[0].aqi);
  CHECK_FALSE(recs[0].aqi_bucket);
}

TEST_CASE("parse_city_day_csv: three-row fixture field by field") {
  auto recs = load_city_day_csv(testing::golden("city_day_three_rows.csv"));
  REQUIRE(recs.size() == 3);

  CHECK(recs[0].city == "Delhi");
  CHECK(format_date(recs[0].date) == "2019-11-03");
  CHECK(recs[0][Pollutant::PM2_5] == 494.05);
  CHECK(recs[0][Pollutant::PM10] == 667.45);
  CHECK(recs[0][Pollutant::CO] == 8.12);
  CHECK(recs[0][Pollutant::Xylene] == 5.5);
  CHECK(recs[0].aqi == 494.0);
  CHECK(recs[0].aqi_bucket == AqiBucket::Severe);

  CHECK(recs[1].city == "Mumbai");
  CHECK_FALSE(recs[1][Pollutant::PM10]);
  CHECK_FALSE(recs[1][Pollutant::NH3]);
  CHECK_FALSE(recs[1][Pollutant::Xylene]);
  CHECK(recs[1][Pollutant::Benzene] == 0.0);  // zero is a value, not a gap
  CHECK(recs[1].aqi_bucket == AqiBucket::Satisfactory);

  CHECK(format_date(recs[2].date) == "2020-02-29");
  CHECK(recs[2][Pollutant::O3] == 28.75);
  CHECK_FALSE(recs[2].aqi);
  CHECK_FALSE(recs[2].aqi_bucket);
}

TEST_CASE("parse_city_day_csv: header order and case do not matter") {
  auto recs = parse(
      " aqi ,xylene,TOLUENE,benzene,o3,so2,co,nh3,nox,no2,no,pm10,pm2.5,date,city\n"
      "42,1,2,3,4,5,6,7,8,9,10,11,12,2016-03-04,Chennai\n");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].city == "Chennai");
  CHECK(recs[0][Pollutant::PM2_5] == 12.0);
  CHECK(recs[0][Pollutant::Xylene] == 1.0);
  CHECK(recs[0].aqi == 42.0);
}

TEST_CASE("parse_city_day_csv: errors") {
  SUBCASE("missing column") {
    CHECK_THROWS_WITH_AS(parse("City,Date,PM2.5\n"), doctest::Contains("missing required column"),
                         ParseError);
  }
  SUBCASE("bad date names line and column") {
    CHECK_THROWS_WITH_AS(parse(kHeader + "Delhi,2019-13-01,,,,,,,,,,,,,,\n"),
                         doctest::Contains("line 2, column Date"), ParseError);
  }
  SUBCASE("malformed number names line and column") {
    CHECK_THROWS_WITH_AS(parse(kHeader + "Delhi,2019-01-01,,,,abc,,,,,,,,,,\n"),
                         doctest::Contains("line 2, column NO2"), ParseError);
  }
  SUBCASE("negative concentration") {
    CHECK_THROWS_WITH_AS(parse(kHeader + "Delhi,2019-01-01,-1,,,,,,,,,,,,,\n"),
                         doctest::Contains("negative"), ParseError);
  }
}

TEST_CASE("drop_incomplete examples") {
  auto recs = parse(kHeader +
                    "A,2019-01-01,1,2,3,4,5,6,7,8,9,10,11,12,13,Good\n"
                    "B,2019-01-02,,2,3,4,5,6,7,8,9,10,11,12,13,Good\n"
                    "C,2019-01-03,1,2,3,4,5,6,7,8,9,10,11,12,13,Good\n"
                    "D,2019-01-04,,2,3,4,5,6,7,8,9,10,11,12,13,Good\n"
                    "E,2019-01-05,1,,3,4,5,6,7,8,9,10,11,12,,\n");
  const std::vector<Column> pm25{Column::PM2_5};

  SUBCASE("required PM2.5 keeps the three complete rows in order") {
    auto kept = drop_incomplete(recs, pm25);
    // Brute-force filter as the reference.
    std::vector<CityDayRecord> expected;
    for (const auto& r : recs) {
      if (r[Pollutant::PM2_5].has_value()) expected.push_back(r);
    }
    CHECK(kept == expected);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].city == "A");
    CHECK(kept[1].city == "C");
    CHECK(kept[2].city == "E");
  }
  SUBCASE("empty requirement is the identity") {
    CHECK(drop_incomplete(recs, std::vector<Column>{}) == recs);
  }
  SUBCASE("complete input is the identity") {
    auto complete = drop_incomplete(recs, modelling_columns(Column::AqiBucket));
    CHECK(complete.size() == 2);
    CHECK(drop_incomplete(complete, modelling_columns(Column::AqiBucket)) == complete);
  }
}

TEST_CASE("property: csv round trip is the identity on records") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CityDayRecord> recs;
    const int n = int(rng() % 20);
    for (int i = 0; i < n; ++i) recs.push_back(random_record(rng));
    const auto text = city_day_csv(recs);
    auto back = parse(text);
    REQUIRE(back == recs);
    CHECK(city_day_csv(back) == text);
  }
}

TEST_CASE("property: drop_incomplete is idempotent and never grows") {
  std::mt19937_64 rng(11);
  const auto all = modelling_columns(Column::Aqi);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CityDayRecord> recs;
    for (int i = 0; i < 30; ++i) recs.push_back(random_record(rng));
    std::vector<Column> required;
    for (auto c : all) {
      if (rng() % 3 == 0) required.push_back(c);
    }
    auto once = drop_incomplete(recs, required);
    CHECK(once.size() <= recs.size());
    CHECK(drop_incomplete(once, required) == once);
    for (const auto& r : once) {
      for (auto c : required) CHECK(r.has(c));
    }
  }
}
