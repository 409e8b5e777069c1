#include "aeropipe/ml/model.hpp"

#include <algorithm>

#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

Task task_of(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::LinearRegression:
    case ModelKind::DecisionTreeReg:
    case ModelKind::RandomForestReg:
      return Task::Regression;
    default:
      return Task::Classification;
  }
}

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::LinearRegression: return "Linear Regression";
    case ModelKind::LogisticRegression: return "Logistic Regression";
    case ModelKind::DecisionTreeReg: return "Decision Tree Regression";
    case ModelKind::DecisionTreeClf: return "Decision Tree";
    case ModelKind::RandomForestReg: return "Random Forest Regression";
    case ModelKind::RandomForestClf: return "Random Forest";
    case ModelKind::Knn: return "KNN";
    case ModelKind::GaussianNB: return "Naive Bayes";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view token, Task task) {
  const bool reg = task == Task::Regression;
  if (token == "random_forest") return reg ? ModelKind::RandomForestReg : ModelKind::RandomForestClf;
  if (token == "decision_tree") return reg ? ModelKind::DecisionTreeReg : ModelKind::DecisionTreeClf;
  if (token == "linear_regression" && reg) return ModelKind::LinearRegression;
  if (token == "logistic_regression" && !reg) return ModelKind::LogisticRegression;
  if (token == "knn" && !reg) return ModelKind::Knn;
  if (token == "naive_bayes" && !reg) return ModelKind::GaussianNB;
  throw InvalidArgument("model '" + std::string(token) + "' is not available for " +
                        (reg ? "regression" : "classification"));
}

Hyperparameters Hyperparameters::from_config(const KeyValueConfig& cfg) {
  Hyperparameters hp;
  hp.rf_trees = cfg.get_uint("model", "rf_trees", hp.rf_trees);
  const auto mf = cfg.get_string("model", "rf_max_features", "sqrt");
  if (mf == "sqrt") {
    hp.rf_max_features = MaxFeatures::Sqrt;
  } else if (mf == "all") {
    hp.rf_max_features = MaxFeatures::All;
  } else {
    throw ParseError("[model] rf_max_features must be 'sqrt' or 'all'");
  }
  hp.tree_max_depth = static_cast<int>(cfg.get_int("model", "tree_max_depth", hp.tree_max_depth));
  hp.tree_min_samples_leaf =
      cfg.get_uint("model", "tree_min_samples_leaf", hp.tree_min_samples_leaf);
  hp.knn_k = cfg.get_uint("model", "knn_k", hp.knn_k);
  hp.logistic.epochs = cfg.get_uint("model", "logistic_epochs", hp.logistic.epochs);
  hp.logistic.learning_rate =
      cfg.get_double("model", "logistic_learning_rate", hp.logistic.learning_rate);
  hp.logistic.l2 = cfg.get_double("model", "logistic_l2", hp.logistic.l2);
  hp.smote_k = cfg.get_uint("model", "smote_k", hp.smote_k);
  return hp;
}

namespace {

std::vector<int> to_labels(std::span<const double> y) {
  std::vector<int> out(y.size());
  std::transform(y.begin(), y.end(), out.begin(), [](double v) { return static_cast<int>(v); });
  return out;
}

template <typename V>
std::vector<double> to_doubles(const std::vector<V>& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

std::vector<double> TrainedModel::predict(const Matrix& x) const {
  return std::visit(
      [&](const auto& m) -> std::vector<double> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LogisticRegression> || std::is_same_v<M, GaussianNB>) {
          return to_doubles(m.predict(x));
        } else {
          return m.predict(x);
        }
      },
      fitted);
}

TrainedModel fit_model(ModelKind kind, const Matrix& x, std::span<const double> y,
                       const Hyperparameters& hp, std::uint64_t seed) {
  TreeParams tree;
  tree.task = task_of(kind);
  tree.max_depth = hp.tree_max_depth;
  tree.min_samples_leaf = hp.tree_min_samples_leaf;

  ForestParams forest;
  forest.task = task_of(kind);
  forest.n_trees = hp.rf_trees;
  forest.max_features = hp.rf_max_features;
  forest.max_depth = hp.tree_max_depth;
  forest.min_samples_leaf = hp.tree_min_samples_leaf;
  forest.seed = seed;

  auto wrap = [&](auto&& fitted) {
    return TrainedModel{kind, seed, hp, std::forward<decltype(fitted)>(fitted)};
  };
  switch (kind) {
    case ModelKind::LinearRegression:
      return wrap(LinearRegression::fit(x, y));
    case ModelKind::DecisionTreeReg:
    case ModelKind::DecisionTreeClf:
      return wrap(DecisionTree::fit(x, y, tree));
    case ModelKind::RandomForestReg:
    case ModelKind::RandomForestClf:
      return wrap(RandomForest::fit(x, y, forest));
    case ModelKind::LogisticRegression: {
      auto params = hp.logistic;
      params.seed = seed;
      return wrap(LogisticRegression::fit(x, to_labels(y), params));
    }
    case ModelKind::Knn:
      return wrap(Knn::fit(x, std::vector<double>(y.begin(), y.end()),
                           KnnParams{hp.knn_k, Task::Classification}));
    case ModelKind::GaussianNB:
      return wrap(GaussianNB::fit(x, to_labels(y)));
  }
  throw InvalidArgument("unknown model kind");
}

}  // namespace aeropipe::ml
