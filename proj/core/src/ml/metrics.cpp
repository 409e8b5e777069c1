#include "aeropipe/ml/metrics.hpp"

#include <cmath>
#include <map>

#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

namespace {

template <typename A, typename B>
void check_sizes(std::span<A> a, std::span<B> b) {
  if (a.size() != b.size()) throw InvalidArgument("metric inputs differ in length");
  if (a.empty()) throw InvalidArgument("metric inputs are empty");
}

}  // namespace

double mean_absolute_error(std::span<const double> t, std::span<const double> p) {
  check_sizes(t, p);
  double s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) s += std::abs(p[i] - t[i]);
  return s / double(t.size());
}

double root_mean_squared_error(std::span<const double> t, std::span<const double> p) {
  check_sizes(t, p);
  double s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
  return std::sqrt(s / double(t.size()));
}

double root_mean_squared_log_error(std::span<const double> t, std::span<const double> p) {
  check_sizes(t, p);
  double s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 0 || p[i] < 0) throw InvalidArgument("RMSLE is undefined for negative values");
    const double d = std::log1p(p[i]) - std::log1p(t[i]);
    s += d * d;
  }
  return std::sqrt(s / double(t.size()));
}

double r2_score(std::span<const double> t, std::span<const double> p) {
  check_sizes(t, p);
  double mean = 0;
  for (double v : t) mean += v;
  mean /= double(t.size());
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    ss_tot += (t[i] - mean) * (t[i] - mean);
    ss_res += (t[i] - p[i]) * (t[i] - p[i]);
  }
  if (ss_tot == 0) throw UndefinedMetricError("R^2 is undefined for a constant target");
  return 1.0 - ss_res / ss_tot;
}

RegressionMetrics regression_metrics(std::span<const double> t, std::span<const double> p) {
  return {mean_absolute_error(t, p), root_mean_squared_error(t, p),
          root_mean_squared_log_error(t, p), r2_score(t, p)};
}

double accuracy_percent(std::span<const int> t, std::span<const int> p) {
  check_sizes(t, p);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < t.size(); ++i) hits += t[i] == p[i];
  return 100.0 * double(hits) / double(t.size());
}

double weighted_f1_percent(std::span<const int> t, std::span<const int> p) {
  check_sizes(t, p);
  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<int, Counts> per_class;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == p[i]) {
      ++per_class[t[i]].tp;
    } else {
      ++per_class[p[i]].fp;
      ++per_class[t[i]].fn;
    }
  }
  double weighted = 0;
  for (const auto& [label, c] : per_class) {
    const std::size_t support = c.tp + c.fn;
    if (support == 0) continue;
    const double denom = 2.0 * double(c.tp) + double(c.fp) + double(c.fn);
    const double f1 = denom > 0 ? 2.0 * double(c.tp) / denom : 0.0;
    weighted += f1 * double(support);
  }
  return 100.0 * weighted / double(t.size());
}

ClassificationMetrics classification_metrics(std::span<const int> t, std::span<const int> p) {
  return {accuracy_percent(t, p), weighted_f1_percent(t, p)};
}

}  // namespace aeropipe::ml
