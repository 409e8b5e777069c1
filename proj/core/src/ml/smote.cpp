#include "aeropipe/ml/smote.hpp"

#include <algorithm>
#include <random>

#include "aeropipe/aqi.hpp"
#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// k nearest members of `members` to members[i], excluding itself.
std::vector<std::size_t> nearest_in_class(const Matrix& x, const std::vector<std::size_t>& members,
                                          std::size_t i, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(members.size() - 1);
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (j == i) continue;
    dist.emplace_back(squared_distance(x.row(members[i]), x.row(members[j])), members[j]);
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = dist[j].second;
  return out;
}

Matrix materialize(const Matrix& x, const std::vector<SyntheticOrigin>& origins) {
  Matrix out = x;
  std::vector<double> row(x.cols());
  for (const auto& o : origins) {
    auto a = x.row(o.base), b = x.row(o.neighbour);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = a[j] + o.lambda * (b[j] - a[j]);
    out.append_row(row);
  }
  return out;
}

}  // namespace

std::vector<SyntheticOrigin> smote_plan(const Matrix& x, std::span<const int> labels,
                                        const SmoteParams& params) {
  if (labels.size() != x.rows()) throw InvalidArgument("label length does not match rows");
  if (params.k == 0) throw InvalidArgument("SMOTE needs k >= 1");
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);

  std::map<int, std::size_t> target = params.target;
  if (target.empty()) {
    std::size_t majority = 0;
    for (const auto& [label, rows] : members) majority = std::max(majority, rows.size());
    for (const auto& [label, rows] : members) target[label] = majority;
  }

  std::mt19937_64 rng(params.seed);
  std::vector<SyntheticOrigin> origins;
  for (const auto& [label, rows] : members) {
    auto t = target.find(label);
    if (t == target.end() || t->second <= rows.size()) continue;
    if (rows.size() < 2) {
      throw InvalidArgument("SMOTE: class " + std::to_string(label) +
                            " has a single sample and no neighbour to interpolate with");
    }
    const std::size_t k = std::min(params.k, rows.size() - 1);
    std::vector<std::vector<std::size_t>> nn(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) nn[i] = nearest_in_class(x, rows, i, k);
    for (std::size_t s = rows.size(); s < t->second; ++s) {
      const std::size_t i = static_cast<std::size_t>(rng() % rows.size());
      const std::size_t j = nn[i][static_cast<std::size_t>(rng() % k)];
      origins.push_back({rows[i], j, unit_uniform(rng)});
    }
  }
  return origins;
}

SmoteResult smote(const LabeledSet& input, const SmoteParams& params) {
  SmoteResult out;
  out.origins = smote_plan(input.x, input.y, params);
  out.data.x = materialize(input.x, out.origins);
  out.data.y = input.y;
  for (const auto& o : out.origins) out.data.y.push_back(input.y[o.base]);
  return out;
}

RegressionSmoteResult smote_for_regression(const Matrix& x, std::span<const double> y,
                                           const SmoteParams& params) {
  if (y.size() != x.rows()) throw InvalidArgument("target length does not match rows");
  std::vector<int> bins(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) bins[i] = static_cast<int>(aqi::bucket(y[i]));
  RegressionSmoteResult out;
  out.origins = smote_plan(x, bins, params);
  out.x = materialize(x, out.origins);
  out.y.assign(y.begin(), y.end());
  for (const auto& o : out.origins) out.y.push_back(y[o.base] + o.lambda * (y[o.neighbour] - y[o.base]));
  return out;
}

}  // namespace aeropipe::ml
