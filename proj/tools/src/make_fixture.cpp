// Writes the bundled synthetic city-day table. AQI and buckets come from the
// engine so the file is self-consistent; a few cells are blanked to exercise
// missing-value handling.
//
//   make_fixture [out.csv]   (default data/city_day_synthetic.csv)

#include <cmath>
#include <iostream>
#include <random>

#include "aeropipe/aqi.hpp"
#include "aeropipe/dataset.hpp"
#include "aeropipe/fileutil.hpp"

using namespace aeropipe;

namespace {

struct CityProfile {
  const char* name;
  double level;     // multiplies every base concentration
  double industry;  // extra factor on SO2, O3, benzene, toluene, xylene
};

// PM2.5, PM10, NO, NO2, NOx, NH3, CO (mg/m3), SO2, O3, Benzene, Toluene, Xylene
constexpr std::array<double, kPollutantCount> kBase = {55, 105, 14, 28, 32, 22, 1.1,
                                                       11, 33, 2.5, 7, 1.8};

bool is_industrial(Pollutant p) {
  return p == Pollutant::SO2 || p == Pollutant::O3 || p == Pollutant::Benzene ||
         p == Pollutant::Toluene || p == Pollutant::Xylene;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "data/city_day_synthetic.csv";
  const std::array<CityProfile, 5> cities{{{"Ahmedabad", 2.4, 1.6},
                                           {"Delhi", 2.0, 1.2},
                                           {"Mumbai", 0.9, 0.9},
                                           {"Patna", 1.6, 1.4},
                                           {"Shillong", 0.35, 0.5}}};
  constexpr int kDaysPerCity = 40;

  std::mt19937_64 rng(20240101);
  std::lognormal_distribution<double> spread(0.0, 0.45);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<CityDayRecord> rows;
  for (const auto& city : cities) {
    for (int d = 0; d < kDaysPerCity; ++d) {
      CityDayRecord r;
      r.city = city.name;
      const auto day = std::chrono::sys_days{std::chrono::year{2018} / 1 / 1} +
                       std::chrono::days{d * 27};
      r.date = Date{day};
      // Winter months run dirtier.
      const unsigned month = unsigned(r.date.month());
      const double season = 1.0 + 0.5 * std::cos((double(month) - 1.0) * 3.14159265358979 / 6.0);
      for (auto p : kAllPollutants) {
        double v = kBase[int(p)] * city.level * season * spread(rng);
        if (is_industrial(p)) v *= city.industry;
        const double decimals = p == Pollutant::CO ? 100.0 : 10.0;
        r[p] = std::round(v * decimals) / decimals;
        if (unit(rng) < 0.04) r[p].reset();
      }
      if (auto res = aqi::overall_aqi(r)) {
        r.aqi = std::round(res->aqi);
        r.aqi_bucket = aqi::bucket(*r.aqi);
      }
      rows.push_back(std::move(r));
    }
  }
  write_file_atomic(out, city_day_csv(rows));
  std::cout << "wrote " << rows.size() << " rows to " << out << '\n';
  return 0;
}
