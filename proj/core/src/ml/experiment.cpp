#include "aeropipe/ml/experiment.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "aeropipe/dataset.hpp"
#include "aeropipe/errors.hpp"
#include "aeropipe/fileutil.hpp"
#include "aeropipe/ml/smote.hpp"

namespace aeropipe::ml {

ExperimentSpec ExperimentSpec::from_config(const KeyValueConfig& cfg) {
  ExperimentSpec spec;
  const auto task = cfg.get_string("analyze", "task", "regression");
  if (task == "regression") {
    spec.task = Task::Regression;
  } else if (task == "classification") {
    spec.task = Task::Classification;
  } else {
    throw ParseError("[analyze] task must be 'regression' or 'classification'");
  }
  for (const auto& token : cfg.get_list("analyze", "models")) {
    spec.models.push_back(parse_model_kind(token, spec.task));
  }
  if (spec.models.empty()) throw ParseError("[analyze] models must list at least one model");

  spec.smote_modes.clear();
  auto modes = cfg.get_list("analyze", "smote");
  if (modes.empty()) modes = {"off"};
  for (const auto& m : modes) {
    if (m == "off") {
      spec.smote_modes.push_back(false);
    } else if (m == "on") {
      spec.smote_modes.push_back(true);
    } else {
      throw ParseError("[analyze] smote entries must be 'off' or 'on'");
    }
  }
  spec.split.test_fraction = cfg.get_double("analyze", "test_fraction", 0.2);
  spec.seed = cfg.get_uint("analyze", "seed", 42);
  spec.split.shuffle_seed = spec.seed;
  spec.hyperparameters = Hyperparameters::from_config(cfg);

  auto required = cfg.get_list("analyze", "required");
  if (!(required.empty() || (required.size() == 1 && required[0] == "pollutants"))) {
    for (const auto& name : required) {
      auto col = parse_column(name);
      if (!col) throw ParseError("[analyze] required: unknown column '" + name + "'");
      spec.required.push_back(*col);
    }
  }
  return spec;
}

ExperimentSpec ExperimentSpec::regression_suite() {
  ExperimentSpec spec;
  spec.task = Task::Regression;
  spec.models = {ModelKind::RandomForestReg, ModelKind::LinearRegression,
                 ModelKind::DecisionTreeReg};
  spec.smote_modes = {false, true};
  return spec;
}

ExperimentSpec ExperimentSpec::classification_suite() {
  ExperimentSpec spec;
  spec.task = Task::Classification;
  spec.models = {ModelKind::RandomForestClf, ModelKind::LogisticRegression,
                 ModelKind::DecisionTreeClf, ModelKind::Knn, ModelKind::GaussianNB};
  spec.smote_modes = {false, true};
  return spec;
}

namespace {

Column target_column(Task task) {
  return task == Task::Regression ? Column::Aqi : Column::AqiBucket;
}

std::vector<std::string> feature_names() {
  std::vector<std::string> names;
  for (auto p : kAllPollutants) names.emplace_back(pollutant_name(p));
  return names;
}

}  // namespace

std::vector<CityDayRecord> preprocess(const std::vector<CityDayRecord>& records,
                                      const ExperimentSpec& spec) {
  auto required = spec.required.empty() ? modelling_columns(target_column(spec.task))
                                        : spec.required;
  // Features and target are always needed to build the design matrix.
  for (auto c : modelling_columns(target_column(spec.task))) {
    if (std::find(required.begin(), required.end(), c) == required.end()) required.push_back(c);
  }
  return drop_incomplete(records, required);
}

ExperimentFolds build_folds(const std::vector<CityDayRecord>& filtered, const ExperimentSpec& spec,
                            bool smote) {
  const std::size_t n = filtered.size();
  Matrix x(n, kPollutantCount);
  x.set_names(feature_names());
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = filtered[i];
    for (int p = 0; p < kPollutantCount; ++p) x(i, static_cast<std::size_t>(p)) = *r.pollutants[p];
    y[i] = spec.task == Task::Regression ? *r.aqi : static_cast<double>(*r.aqi_bucket);
  }
  auto idx = split_indices(n, spec.split);

  ExperimentFolds folds;
  Matrix x_train_raw = x.select_rows(idx.train);
  const auto scaler = Standardizer::fit(x_train_raw);
  folds.x_train = scaler.transform(x_train_raw);
  folds.x_test = scaler.transform(x.select_rows(idx.test));
  for (auto i : idx.train) folds.y_train.push_back(y[i]);
  for (auto i : idx.test) folds.y_test.push_back(y[i]);
  folds.test_rows = idx.test;

  if (smote) {
    SmoteParams sp;
    sp.k = spec.hyperparameters.smote_k;
    sp.seed = spec.seed;
    if (spec.task == Task::Regression) {
      auto res = smote_for_regression(folds.x_train, folds.y_train, sp);
      folds.synthetic = res.origins.size();
      folds.x_train = std::move(res.x);
      folds.y_train = std::move(res.y);
    } else {
      LabeledSet train{folds.x_train, {}};
      for (double v : folds.y_train) train.y.push_back(static_cast<int>(v));
      auto res = ml::smote(train, sp);
      folds.synthetic = res.origins.size();
      folds.x_train = std::move(res.data.x);
      folds.y_train.assign(res.data.y.begin(), res.data.y.end());
    }
  }
  return folds;
}

ExperimentResult run_experiment(const std::vector<CityDayRecord>& records,
                                const ExperimentSpec& spec) {
  if (spec.models.empty()) throw InvalidArgument("experiment lists no models");
  for (auto kind : spec.models) {
    if (task_of(kind) != spec.task) {
      throw InvalidArgument(std::string(model_name(kind)) + " does not match the experiment task");
    }
  }
  auto filtered = preprocess(records, spec);
  if (filtered.empty()) throw InvalidArgument("no records left after dropping incomplete rows");

  ExperimentResult result;
  result.task = spec.task;
  result.n_records = filtered.size();
  for (bool smote : spec.smote_modes) {
    auto folds = build_folds(filtered, spec, smote);
    for (auto kind : spec.models) {
      auto model = fit_model(kind, folds.x_train, folds.y_train, spec.hyperparameters, spec.seed);
      auto pred = model.predict(folds.x_test);
      EvalReport report{kind, smote, std::nullopt, std::nullopt, folds.x_train.rows(),
                        folds.x_test.rows()};
      if (spec.task == Task::Regression) {
        for (auto& p : pred) p = std::max(p, 0.0);
        report.regression = regression_metrics(folds.y_test, pred);
      } else {
        std::vector<int> t(folds.y_test.begin(), folds.y_test.end());
        std::vector<int> p(pred.begin(), pred.end());
        report.classification = classification_metrics(t, p);
      }
      result.reports.push_back(report);
    }
  }

  std::vector<std::size_t> order(result.reports.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto score = [&](std::size_t i) {
    const auto& r = result.reports[i];
    return r.regression ? r.regression->mae : -r.classification->accuracy;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score(a) < score(b); });
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    result.reports[order[pos]].rank = static_cast<int>(pos) + 1;
  }
  result.reports[order.front()].best = true;
  return result;
}

const EvalReport* ExperimentResult::find(ModelKind kind, bool smote) const {
  for (const auto& r : reports) {
    if (r.kind == kind && r.smote == smote) return &r;
  }
  return nullptr;
}

const EvalReport& ExperimentResult::best() const {
  for (const auto& r : reports) {
    if (r.best) return r;
  }
  throw NotFound("experiment has no reports");
}

std::string ExperimentResult::to_csv() const {
  std::ostringstream out;
  out << "task,model,smote,mae,rmse,rmsle,r2,accuracy,f1,n_train,n_test,rank,best\n";
  for (const auto& r : reports) {
    out << (task == Task::Regression ? "regression" : "classification") << ','
        << csv_escape(model_name(r.kind)) << ',' << (r.smote ? "with" : "without") << ',';
    if (r.regression) {
      const auto& m = *r.regression;
      out << format_fixed(m.mae, 6) << ',' << format_fixed(m.rmse, 6) << ','
          << format_fixed(m.rmsle, 6) << ',' << format_fixed(m.r2, 6) << ",,";
    } else {
      const auto& m = *r.classification;
      out << ",,,," << format_fixed(m.accuracy, 6) << ',' << format_fixed(m.f1, 6);
    }
    out << ',' << r.n_train << ',' << r.n_test << ',' << r.rank << ',' << (r.best ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string ExperimentResult::to_table() const {
  std::ostringstream out;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  for (bool smote : {false, true}) {
    bool any = std::any_of(reports.begin(), reports.end(),
                           [&](const EvalReport& r) { return r.smote == smote; });
    if (!any) continue;
    out << (task == Task::Regression ? "AQI regression" : "AQI bucket classification")
        << (smote ? " (with SMOTE)" : " (without SMOTE)") << '\n';
    if (task == Task::Regression) {
      out << pad("Model", 28) << pad("MAE", 10) << pad("RMSE", 10) << pad("RMSLE", 10) << "R2\n";
    } else {
      out << pad("Model", 28) << pad("Accuracy", 10) << "F1\n";
    }
    for (const auto& r : reports) {
      if (r.smote != smote) continue;
      std::string name = std::string(model_name(r.kind)) + (r.best ? " *" : "");
      out << pad(name, 28);
      if (r.regression) {
        out << pad(format_fixed(r.regression->mae, 2), 10)
            << pad(format_fixed(r.regression->rmse, 2), 10)
            << pad(format_fixed(r.regression->rmsle, 2), 10) << format_fixed(r.regression->r2, 2);
      } else {
        out << pad(format_fixed(r.classification->accuracy, 2), 10)
            << format_fixed(r.classification->f1, 2);
      }
      out << '\n';
    }
    if (task == Task::Classification && !smote) {
      out << pad("SVM (external reference)", 28) << pad("79", 10) << "79   not trained here\n";
      out << pad("DNN (external reference)", 28) << pad("79.2", 10) << "78.3 not trained here\n";
    }
    out << '\n';
  }
  out << "* best model (" << (task == Task::Regression ? "lowest MAE" : "highest accuracy")
      << ")\n";
  return out.str();
}

}  // namespace aeropipe::ml
