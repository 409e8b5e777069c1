#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "aeropipe/ml/matrix.hpp"

namespace aeropipe::ml {

struct LabeledSet {
  Matrix x;
  std::vector<int> y;
};

struct SmoteParams {
  std::size_t k = 5;
  /// Desired count per class. Empty: every present class is raised to the
  /// majority count. Classes already at or above target are left alone.
  std::map<int, std::size_t> target;
  std::uint64_t seed = 42;
};

/// How one synthetic row was made: base + lambda * (neighbour - base), both
/// indices into the input rows.
struct SyntheticOrigin {
  std::size_t base;
  std::size_t neighbour;
  double lambda;
};

/// Picks parents and interpolation weights. For each class needing rows
/// (ascending label order): draw a base row of that class uniformly, one of
/// its min(k, n_c - 1) nearest same-class rows uniformly, lambda uniform in
/// [0, 1). Throws InvalidArgument when a class that needs rows has fewer
/// than two members.
std::vector<SyntheticOrigin> smote_plan(const Matrix& x, std::span<const int> labels,
                                        const SmoteParams& params);

struct SmoteResult {
  LabeledSet data;  ///< originals first, then synthetic rows in origin order
  std::vector<SyntheticOrigin> origins;
};

SmoteResult smote(const LabeledSet& input, const SmoteParams& params);

struct RegressionSmoteResult {
  Matrix x;
  std::vector<double> y;
  std::vector<SyntheticOrigin> origins;
};

/// SMOTE on a continuous target: rows are grouped by the AQI bucket of their
/// target, the groups are balanced as classes, and each synthetic target is
/// interpolated with the same lambda as its features.
RegressionSmoteResult smote_for_regression(const Matrix& x, std::span<const double> y,
                                           const SmoteParams& params);

}  // namespace aeropipe::ml
