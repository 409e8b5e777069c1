#include <set>

#include "doctest.h"
#include "test_support.hpp"

#include "aeropipe/dataset.hpp"
#include "aeropipe/errors.hpp"
#include "aeropipe/ml/experiment.hpp"

using namespace aeropipe;
using namespace aeropipe::ml;

namespace {

const std::vector<CityDayRecord>& fixture() {
  static const auto recs = load_city_day_csv(testing::fixture_csv());
  return recs;
}

ExperimentSpec small_spec(Task task, std::vector<ModelKind> models) {
  ExperimentSpec s;
  s.task = task;
  s.models = std::move(models);
  s.smote_modes = {false, true};
  s.hyperparameters.rf_trees = 15;
  return s;
}

}  // namespace

TEST_CASE("one model gives one report per smote mode") {
  auto spec = small_spec(Task::Regression, {ModelKind::LinearRegression});
  spec.smote_modes = {false};
  auto res = run_experiment(fixture(), spec);
  REQUIRE(res.reports.size() == 1);
  CHECK(res.reports[0].kind == ModelKind::LinearRegression);
  CHECK(res.reports[0].best);
  CHECK(res.reports[0].rank == 1);
  CHECK(res.reports[0].regression);
  CHECK_FALSE(res.reports[0].classification);
  CHECK(res.reports[0].n_train + res.reports[0].n_test == res.n_records);
}

TEST_CASE("same spec and seed give byte-identical reports") {
  for (auto task : {Task::Regression, Task::Classification}) {
    auto spec = task == Task::Regression
                    ? small_spec(task, {ModelKind::RandomForestReg, ModelKind::DecisionTreeReg})
                    : small_spec(task, {ModelKind::RandomForestClf, ModelKind::Knn,
                                        ModelKind::LogisticRegression, ModelKind::GaussianNB});
    const auto a = run_experiment(fixture(), spec);
    const auto b = run_experiment(fixture(), spec);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_table() == b.to_table());
    spec.seed = 7;
    spec.split.shuffle_seed = 7;
    CHECK(run_experiment(fixture(), spec).to_csv() != a.to_csv());
  }
}

TEST_CASE("reports satisfy the metric invariants and are ranked") {
  auto reg = run_experiment(fixture(), small_spec(Task::Regression,
                                                  {ModelKind::RandomForestReg,
                                                   ModelKind::LinearRegression,
                                                   ModelKind::DecisionTreeReg}));
  REQUIRE(reg.reports.size() == 6);
  std::set<int> ranks;
  for (const auto& r : reg.reports) {
    REQUIRE(r.regression);
    CHECK(r.regression->mae >= 0);
    CHECK(r.regression->rmse >= r.regression->mae);
    CHECK(r.regression->r2 <= 1);
    ranks.insert(r.rank);
    if (r.rank > 1) CHECK(r.regression->mae >= reg.best().regression->mae);
  }
  CHECK(ranks.size() == 6);
  CHECK(reg.best().rank == 1);

  auto clf = run_experiment(fixture(), small_spec(Task::Classification,
                                                  {ModelKind::DecisionTreeClf, ModelKind::Knn}));
  for (const auto& r : clf.reports) {
    REQUIRE(r.classification);
    CHECK(r.classification->accuracy >= 0);
    CHECK(r.classification->accuracy <= 100);
    CHECK(r.classification->f1 >= 0);
    CHECK(r.classification->f1 <= 100);
    if (r.rank > 1) CHECK(r.classification->accuracy <= clf.best().classification->accuracy);
  }
  CHECK(clf.find(ModelKind::Knn, true) != nullptr);
  CHECK(clf.find(ModelKind::GaussianNB, false) == nullptr);
}

TEST_CASE("property: synthetic rows never reach the test fold") {
  for (auto task : {Task::Regression, Task::Classification}) {
    auto spec = small_spec(task, {});
    const auto filtered = preprocess(fixture(), spec);
    const auto plain = build_folds(filtered, spec, false);
    const auto boosted = build_folds(filtered, spec, true);
    CHECK(boosted.synthetic > 0);
    CHECK(plain.synthetic == 0);
    CHECK(boosted.test_rows == plain.test_rows);
    CHECK(boosted.y_test == plain.y_test);
    REQUIRE(boosted.x_test.rows() == plain.x_test.rows());
    CHECK(std::vector<double>(boosted.x_test.data().begin(), boosted.x_test.data().end()) ==
          std::vector<double>(plain.x_test.data().begin(), plain.x_test.data().end()));
    CHECK(boosted.x_train.rows() == plain.x_train.rows() + boosted.synthetic);
    // The original training rows come first and are unchanged.
    for (std::size_t i = 0; i < plain.x_train.rows(); ++i) {
      CHECK(boosted.y_train[i] == plain.y_train[i]);
    }
    // No test row reappears in training.
    std::set<std::vector<double>> test_rows;
    for (std::size_t i = 0; i < plain.x_test.rows(); ++i) {
      auto r = plain.x_test.row(i);
      test_rows.emplace(r.begin(), r.end());
    }
    for (std::size_t i = 0; i < boosted.x_train.rows(); ++i) {
      auto r = boosted.x_train.row(i);
      CHECK(test_rows.count(std::vector<double>(r.begin(), r.end())) == 0);
    }
  }
}

TEST_CASE("preprocessing drops rows missing any pollutant or the target") {
  ExperimentSpec spec;
  spec.task = Task::Classification;
  const auto kept = preprocess(fixture(), spec);
  CHECK(kept.size() < fixture().size());
  for (const auto& r : kept) {
    for (auto p : kAllPollutants) CHECK(r[p].has_value());
    CHECK(r.aqi_bucket.has_value());
  }
}

TEST_CASE("an empty dataset is an error") {
  auto spec = small_spec(Task::Regression, {ModelKind::LinearRegression});
  CHECK_THROWS_AS(run_experiment({}, spec), InvalidArgument);
}

TEST_CASE("specs from config") {
  auto cfg = KeyValueConfig::parse(
      "[analyze]\ntask = classification\nmodels = knn, naive_bayes\nsmote = on\n"
      "test_fraction = 0.3\nseed = 9\n[model]\nknn_k = 3\n");
  auto spec = ExperimentSpec::from_config(cfg);
  CHECK(spec.task == Task::Classification);
  CHECK(spec.models == std::vector<ModelKind>{ModelKind::Knn, ModelKind::GaussianNB});
  CHECK(spec.smote_modes == std::vector<bool>{true});
  CHECK(spec.split.test_fraction == 0.3);
  CHECK(spec.seed == 9);
  CHECK(spec.hyperparameters.knn_k == 3);

  CHECK(ExperimentSpec::regression_suite().models.size() == 3);
  CHECK(ExperimentSpec::classification_suite().models.size() == 5);
  CHECK_THROWS(ExperimentSpec::from_config(KeyValueConfig::parse("[analyze]\nmodels = svm\n")));
}

TEST_CASE("csv and table rendering") {
  auto spec = small_spec(Task::Classification, {ModelKind::GaussianNB});
  spec.smote_modes = {false};
  auto res = run_experiment(fixture(), spec);
  const auto csv = res.to_csv();
  CHECK(csv.rfind("task,model,smote,mae,rmse,rmsle,r2,accuracy,f1,n_train,n_test,rank,best\n", 0) ==
        0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  const auto table = res.to_table();
  CHECK(table.find("Naive Bayes") != std::string::npos);
  // External reference rows are labelled as such.
  CHECK(table.find("external") != std::string::npos);
}
