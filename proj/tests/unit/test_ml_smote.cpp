#include <map>
#include <random>

#include "doctest.h"

#include "aeropipe/errors.hpp"
#include "aeropipe/ml/smote.hpp"

using namespace aeropipe;
using namespace aeropipe::ml;

namespace {

std::map<int, std::size_t> counts(const std::vector<int>& y) {
  std::map<int, std::size_t> c;
  for (int v : y) ++c[v];
  return c;
}

LabeledSet random_set(std::mt19937_64& rng, const std::map<int, std::size_t>& sizes) {
  std::normal_distribution<double> n(0, 1);
  LabeledSet s;
  for (const auto& [label, size] : sizes) {
    for (std::size_t i = 0; i < size; ++i) {
      s.x.append_row(std::vector<double>{label * 3 + n(rng), n(rng), label - n(rng)});
      s.y.push_back(label);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("identical minority points give identical synthetic points") {
  LabeledSet s;
  for (int i = 0; i < 6; ++i) {
    s.x.append_row(std::vector<double>{double(i), 1});
    s.y.push_back(0);
  }
  for (int i = 0; i < 3; ++i) {
    s.x.append_row(std::vector<double>{4.5, -2});
    s.y.push_back(1);
  }
  auto r = smote(s, {});
  CHECK(counts(r.data.y) == std::map<int, std::size_t>{{0, 6}, {1, 6}});
  for (std::size_t i = 9; i < r.data.x.rows(); ++i) {
    CHECK(r.data.x(i, 0) == 4.5);
    CHECK(r.data.x(i, 1) == -2);
  }
}

TEST_CASE("two points with k=1 give points on the diagonal") {
  LabeledSet s;
  s.x = Matrix(5, 2, std::vector<double>{0, 0, 1, 1, 9, 9, 9, 8, 8, 9});
  s.y = {1, 1, 0, 0, 0};
  SmoteParams p;
  p.k = 1;
  auto r = smote(s, p);
  REQUIRE(r.data.x.rows() == 6);
  REQUIRE(r.origins.size() == 1);
  const double a = r.data.x(5, 0), b = r.data.x(5, 1);
  CHECK(a == b);
  CHECK(a >= 0);
  CHECK(a <= 1);
  CHECK(r.data.y[5] == 1);
}

TEST_CASE("counts {A:100, B:20} become {A:100, B:100}") {
  std::mt19937_64 rng(1);
  auto s = random_set(rng, {{0, 100}, {1, 20}});
  auto r = smote(s, {});
  CHECK(counts(r.data.y) == std::map<int, std::size_t>{{0, 100}, {1, 100}});
  CHECK(r.origins.size() == 80);
}

TEST_CASE("explicit targets only raise, never lower") {
  std::mt19937_64 rng(2);
  auto s = random_set(rng, {{0, 30}, {1, 10}, {2, 5}});
  SmoteParams p;
  p.target = {{0, 10}, {1, 15}, {2, 25}};
  auto r = smote(s, p);
  CHECK(counts(r.data.y) == std::map<int, std::size_t>{{0, 30}, {1, 15}, {2, 25}});
}

TEST_CASE("a class of one cannot be oversampled") {
  LabeledSet s;
  s.x = Matrix(4, 1, std::vector<double>{0, 1, 2, 3});
  s.y = {0, 0, 0, 1};
  CHECK_THROWS_AS(smote(s, {}), InvalidArgument);
  // Nothing to do for a balanced set, even with singleton classes.
  s.y = {0, 1, 2, 3};
  CHECK(smote(s, {}).data.x.rows() == 4);
}

TEST_CASE("property: originals are kept and synthetic rows are same-class convex combinations") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_set(rng, {{0, 40 + rng() % 20}, {1, 2 + rng() % 10}, {3, 5 + rng() % 10}});
    SmoteParams p;
    p.k = 1 + rng() % 5;
    p.seed = rng();
    auto r = smote(s, p);
    const std::size_t n = s.x.rows();
    REQUIRE(r.data.x.rows() == n + r.origins.size());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r.data.y[i] == s.y[i]);
      for (std::size_t c = 0; c < s.x.cols(); ++c) CHECK(r.data.x(i, c) == s.x(i, c));
    }
    for (std::size_t j = 0; j < r.origins.size(); ++j) {
      const auto& o = r.origins[j];
      const std::size_t row = n + j;
      CHECK(s.y[o.base] == s.y[o.neighbour]);
      CHECK(r.data.y[row] == s.y[o.base]);
      CHECK(o.base != o.neighbour);
      CHECK(o.lambda >= 0);
      CHECK(o.lambda < 1);
      for (std::size_t c = 0; c < s.x.cols(); ++c) {
        const double expect = s.x(o.base, c) + o.lambda * (s.x(o.neighbour, c) - s.x(o.base, c));
        CHECK(r.data.x(row, c) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("neighbours come from the k nearest same-class rows") {
  // Class 1 sits on a line; with k=1 each base's neighbour is adjacent.
  LabeledSet s;
  for (int i = 0; i < 10; ++i) {
    s.x.append_row(std::vector<double>{double(i * i), 0});
    s.y.push_back(0);
  }
  for (int i = 0; i < 4; ++i) {
    s.x.append_row(std::vector<double>{100.0 + i * i, 50});
    s.y.push_back(1);
  }
  SmoteParams p;
  p.k = 1;
  for (const auto& o : smote_plan(s.x, s.y, p)) {
    const int b = int(o.base) - 10, nb = int(o.neighbour) - 10;
    // Rows 100,101,104,109: nearest of 0 is 1, of 1 is 0, of 2 is 1, of 3 is 2.
    const int expected[] = {1, 0, 1, 2};
    CHECK(nb == expected[b]);
  }
}

TEST_CASE("smote is deterministic under a seed") {
  std::mt19937_64 rng(4);
  auto s = random_set(rng, {{0, 50}, {1, 12}, {2, 7}});
  SmoteParams p;
  p.seed = 99;
  auto a = smote(s, p), b = smote(s, p);
  CHECK(a.data.y == b.data.y);
  CHECK(std::vector<double>(a.data.x.data().begin(), a.data.x.data().end()) ==
        std::vector<double>(b.data.x.data().begin(), b.data.x.data().end()));
  p.seed = 100;
  auto c = smote(s, p);
  CHECK(std::vector<double>(a.data.x.data().begin(), a.data.x.data().end()) !=
        std::vector<double>(c.data.x.data().begin(), c.data.x.data().end()));
}

TEST_CASE("regression smote: balanced bins leave the data alone") {
  // Two targets in each of the six AQI bands.
  const std::vector<double> y{10, 40, 60, 90, 150, 190, 250, 280, 350, 390, 450, 480};
  Matrix x(12, 1);
  for (std::size_t i = 0; i < 12; ++i) x(i, 0) = double(i);
  auto r = smote_for_regression(x, y, {});
  CHECK(r.origins.empty());
  CHECK(r.y == y);
  CHECK(r.x.rows() == 12);
}

TEST_CASE("regression smote: synthetic targets lie between their parents") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 120; ++i) {
    // Mostly Moderate, some Good and Severe.
    const double target = i < 80 ? 101 + 99 * u(rng) : (i < 100 ? 50 * u(rng) : 401 + 99 * u(rng));
    y.push_back(target);
    x.append_row(std::vector<double>{target / 10 + u(rng), u(rng)});
  }
  auto r = smote_for_regression(x, y, {});
  CHECK(r.x.rows() == 80 * 3);
  for (std::size_t j = 0; j < r.origins.size(); ++j) {
    const auto& o = r.origins[j];
    const double lo = std::min(y[o.base], y[o.neighbour]);
    const double hi = std::max(y[o.base], y[o.neighbour]);
    const double v = r.y[120 + j];
    CHECK(v >= lo);
    CHECK(v <= hi);
    CHECK(v == doctest::Approx(y[o.base] + o.lambda * (y[o.neighbour] - y[o.base])));
  }
}
