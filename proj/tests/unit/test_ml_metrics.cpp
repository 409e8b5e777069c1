#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "aeropipe/errors.hpp"
#include "aeropipe/ml/metrics.hpp"

using namespace aeropipe;
using namespace aeropipe::ml;

TEST_CASE("perfect predictions") {
  const std::vector<double> y{3, 1, 4, 1, 5, 9, 2, 6};
  auto m = regression_metrics(y, y);
  CHECK(m.mae == 0);
  CHECK(m.rmse == 0);
  CHECK(m.rmsle == 0);
  CHECK(m.r2 == 1);
  const std::vector<int> c{0, 1, 2, 2, 1};
  auto cm = classification_metrics(c, c);
  CHECK(cm.accuracy == 100);
  CHECK(cm.f1 == 100);
}

TEST_CASE("two-point hand arithmetic") {
  const std::vector<double> t{0, 2}, p{1, 1};
  CHECK(mean_absolute_error(t, p) == 1);
  CHECK(root_mean_squared_error(t, p) == 1);
  // Squared log gaps (log 2 - log 1)^2 and (log 2 - log 3)^2.
  const double a = std::log(2.0), b = std::log(2.0) - std::log(3.0);
  CHECK(root_mean_squared_log_error(t, p) == doctest::Approx(std::sqrt((a * a + b * b) / 2)));
  CHECK(r2_score(t, p) == 0);
}

TEST_CASE("metric errors") {
  const std::vector<double> t{1, 2}, neg{-1, 2}, constant{4, 4}, shorter{1};
  CHECK_THROWS_AS(root_mean_squared_log_error(neg, t), InvalidArgument);
  CHECK_THROWS_AS(root_mean_squared_log_error(t, neg), InvalidArgument);
  CHECK_THROWS_AS(r2_score(constant, t), UndefinedMetricError);
  CHECK_THROWS_AS(mean_absolute_error(t, shorter), InvalidArgument);
  CHECK_THROWS_AS(mean_absolute_error({}, {}), InvalidArgument);
}

TEST_CASE("classification hand example") {
  // Class 0: tp 1, fp 1, fn 1 -> F1 0.5, support 2.
  // Class 1: tp 1, fp 1, fn 0 -> F1 2/3, support 1.
  // Class 2: tp 0, fp 0, fn 1 -> F1 0, support 1.
  const std::vector<int> t{0, 0, 1, 2}, p{0, 1, 1, 0};
  CHECK(accuracy_percent(t, p) == 50);
  CHECK(weighted_f1_percent(t, p) == doctest::Approx(100 * (0.5 * 2 + 2.0 / 3.0) / 4));
}

TEST_CASE("100 random vectors against the oracles") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> value(0, 500);
  std::uniform_int_distribution<int> label(0, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 200;
    std::vector<double> t(n), p(n);
    std::vector<int> tc(n), pc(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = value(rng);
      p[i] = value(rng);
      tc[i] = label(rng);
      pc[i] = rng() % 3 == 0 ? tc[i] : label(rng);
    }
    auto m = regression_metrics(t, p);
    CHECK(m.mae == doctest::Approx(oracle::mae(t, p)).epsilon(1e-10));
    CHECK(m.rmse == doctest::Approx(oracle::rmse(t, p)).epsilon(1e-10));
    CHECK(m.rmsle == doctest::Approx(oracle::rmsle(t, p)).epsilon(1e-10));
    CHECK(m.r2 == doctest::Approx(oracle::r2(t, p)).epsilon(1e-10));
    CHECK(m.rmse >= m.mae);
    CHECK(m.r2 <= 1);
    auto c = classification_metrics(tc, pc);
    CHECK(c.accuracy == doctest::Approx(oracle::accuracy(tc, pc)).epsilon(1e-10));
    CHECK(c.f1 == doctest::Approx(oracle::weighted_f1(tc, pc)).epsilon(1e-10));
    CHECK(c.accuracy >= 0);
    CHECK(c.accuracy <= 100);
    CHECK(c.f1 >= 0);
    CHECK(c.f1 <= 100);
  }
}
