#include "aeropipe/ml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

int majority_label(std::span<const std::size_t> counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

struct DecisionTree::Builder {
  const Matrix& x;
  std::span<const double> y;
  const TreeParams& params;
  std::mt19937_64& rng;
  DecisionTree& tree;
  std::size_t n_classes = 0;
  std::vector<std::size_t> feature_order;

  struct Split {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0;
    double impurity = 0;
  };

  double leaf_value(std::span<const std::size_t> rows) const {
    if (params.task == Task::Regression) {
      double s = 0;
      for (auto r : rows) s += y[r];
      return s / double(rows.size());
    }
    std::vector<std::size_t> counts(n_classes, 0);
    for (auto r : rows) ++counts[static_cast<std::size_t>(y[r])];
    return majority_label(counts);
  }

  double impurity(std::span<const std::size_t> rows, double centre) const {
    if (params.task == Task::Regression) {
      double s = 0;
      for (auto r : rows) s += (y[r] - centre) * (y[r] - centre);
      return s;
    }
    std::vector<std::size_t> counts(n_classes, 0);
    for (auto r : rows) ++counts[static_cast<std::size_t>(y[r])];
    double sq = 0;
    for (auto c : counts) sq += double(c) * double(c);
    return double(rows.size()) - sq / double(rows.size());
  }

  bool better(const Split& best, double imp, std::size_t f, double thr, double tol) const {
    if (!best.found || imp < best.impurity - tol) return true;
    if (imp > best.impurity + tol) return false;
    return f < best.feature || (f == best.feature && thr < best.threshold);
  }

  void scan_feature(std::vector<std::size_t>& sorted, std::size_t f, double centre, double tol,
                    Split& best) const {
    std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
      return x(a, f) < x(b, f) || (x(a, f) == x(b, f) && a < b);
    });
    const std::size_t m = sorted.size();
    const std::size_t min_leaf = std::max<std::size_t>(1, params.min_samples_leaf);
    if (params.task == Task::Regression) {
      double tot = 0, tot_sq = 0;
      for (auto r : sorted) {
        const double d = y[r] - centre;
        tot += d;
        tot_sq += d * d;
      }
      double ls = 0, lsq = 0;
      for (std::size_t i = 0; i + 1 < m; ++i) {
        const double d = y[sorted[i]] - centre;
        ls += d;
        lsq += d * d;
        const double xv = x(sorted[i], f), xn = x(sorted[i + 1], f);
        if (xv == xn) continue;
        const std::size_t nl = i + 1, nr = m - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double rs = tot - ls, rsq = tot_sq - lsq;
        const double imp = (lsq - ls * ls / double(nl)) + (rsq - rs * rs / double(nr));
        double thr = xv + (xn - xv) / 2.0;
        if (!(thr < xn)) thr = xv;
        if (better(best, imp, f, thr, tol)) best = {true, f, thr, imp};
      }
      return;
    }
    std::vector<std::size_t> left(n_classes, 0), right(n_classes, 0);
    for (auto r : sorted) ++right[static_cast<std::size_t>(y[r])];
    double lsq = 0, rsq = 0;
    for (auto c : right) rsq += double(c) * double(c);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const auto label = static_cast<std::size_t>(y[sorted[i]]);
      // Maintain sum of squared counts incrementally.
      lsq += 2.0 * double(left[label]) + 1.0;
      rsq -= 2.0 * double(right[label]) - 1.0;
      ++left[label];
      --right[label];
      const double xv = x(sorted[i], f), xn = x(sorted[i + 1], f);
      if (xv == xn) continue;
      const std::size_t nl = i + 1, nr = m - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double imp = (double(nl) - lsq / double(nl)) + (double(nr) - rsq / double(nr));
      double thr = xv + (xn - xv) / 2.0;
      if (!(thr < xn)) thr = xv;
      if (better(best, imp, f, thr, tol)) best = {true, f, thr, imp};
    }
  }

  Split find_split(std::span<const std::size_t> rows, double parent_imp, double centre) {
    const std::size_t d = x.cols();
    const std::size_t budget =
        params.max_features == 0 ? d : std::min(params.max_features, d);
    if (budget < d) {
      // Partial Fisher-Yates over the feature list; keep drawing past the
      // budget only while no valid split has been found.
      std::iota(feature_order.begin(), feature_order.end(), std::size_t{0});
    }
    const double tol = 1e-10 * std::max(parent_imp, 1e-300);
    Split best;
    std::vector<std::size_t> sorted(rows.begin(), rows.end());
    for (std::size_t k = 0; k < d; ++k) {
      if (budget < d) {
        const std::size_t j = k + static_cast<std::size_t>(rng() % (d - k));
        std::swap(feature_order[k], feature_order[j]);
        if (k >= budget && best.found) break;
      }
      const std::size_t f = budget < d ? feature_order[k] : k;
      scan_feature(sorted, f, centre, tol, best);
    }
    if (best.found && !(parent_imp - best.impurity > tol)) best.found = false;
    return best;
  }

  int build(std::vector<std::size_t>& rows, int depth) {
    const int id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back({});
    tree.depth_ = std::max(tree.depth_, depth);
    const double value = leaf_value(rows);
    tree.nodes_[id].value = value;
    tree.nodes_[id].samples = rows.size();

    const double centre = params.task == Task::Regression ? value : 0.0;
    const double parent_imp = impurity(rows, centre);
    const std::size_t min_leaf = std::max<std::size_t>(1, params.min_samples_leaf);
    if ((params.max_depth > 0 && depth >= params.max_depth) || rows.size() < 2 * min_leaf ||
        parent_imp <= 0) {
      return id;
    }
    const Split split = find_split(rows, parent_imp, centre);
    if (!split.found) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) (x(r, split.feature) <= split.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(left, depth + 1);
    const int r = build(right, depth + 1);
    auto& node = tree.nodes_[id];
    node.feature = static_cast<int>(split.feature);
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }
};

DecisionTree DecisionTree::fit(const Matrix& x, std::span<const double> y,
                               const TreeParams& params) {
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::mt19937_64 rng(0);
  return fit_rows(x, y, std::move(rows), params, rng);
}

DecisionTree DecisionTree::fit_rows(const Matrix& x, std::span<const double> y,
                                    std::vector<std::size_t> rows, const TreeParams& params,
                                    std::mt19937_64& rng) {
  if (y.size() != x.rows()) throw InvalidArgument("target length does not match rows");
  if (rows.empty()) throw InvalidArgument("decision tree needs at least one sample");
  DecisionTree tree;
  tree.params_ = params;
  Builder b{x, y, params, rng, tree, 0, std::vector<std::size_t>(x.cols())};
  if (params.task == Task::Classification) {
    double max_label = 0;
    for (auto r : rows) {
      const double v = y[r];
      if (v < 0 || v != std::floor(v)) {
        throw InvalidArgument("class labels must be non-negative integers");
      }
      max_label = std::max(max_label, v);
    }
    b.n_classes = static_cast<std::size_t>(max_label) + 1;
  }
  b.build(rows, 0);
  return tree;
}

double DecisionTree::predict_row(std::span<const double> row) const {
  int id = 0;
  while (nodes_[id].feature >= 0) {
    const auto& n = nodes_[id];
    id = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes_[id].value;
}

std::vector<double> DecisionTree::predict(const Matrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_row(x.row(i));
  return out;
}

std::size_t DecisionTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

}  // namespace aeropipe::ml
