#include "aeropipe/cli.hpp"

#include <csignal>
#include <pthread.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "aeropipe/config.hpp"
#include "aeropipe/dataset.hpp"
#include "aeropipe/embedded_data.hpp"
#include "aeropipe/errors.hpp"
#include "aeropipe/fileutil.hpp"
#include "aeropipe/http_server.hpp"
#include "aeropipe/http_sink.hpp"
#include "aeropipe/ingest.hpp"
#include "aeropipe/insights.hpp"
#include "aeropipe/ml/experiment.hpp"
#include "aeropipe/sensor.hpp"

namespace aeropipe::cli {

namespace fs = std::filesystem;

namespace {

/// Bad flags, bad config values, unreadable config: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flag values land in the config so precedence is one merge order.
class Overrides {
 public:
  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& section,
                   const std::string& key, const std::string& help) {
    auto store = std::make_shared<std::string>();
    auto* opt = app->add_option(flag, *store, help + " ([" + section + "] " + key + ")");
    items_.push_back({section, key, opt, store});
    return opt;
  }

  void apply(KeyValueConfig& cfg) const {
    for (const auto& item : items_) {
      if (item.option->count() > 0) cfg.set(item.section, item.key, *item.value);
    }
  }

 private:
  struct Item {
    std::string section;
    std::string key;
    CLI::Option* option;
    std::shared_ptr<std::string> value;
  };
  std::vector<Item> items_;
};

KeyValueConfig layered_config(const std::string& config_flag) {
  auto cfg = KeyValueConfig::parse(embedded::defaults_ini(), "defaults.ini");
  std::string path = config_flag;
  if (path.empty()) {
    if (const char* env = std::getenv("AEROPIPE_CONFIG")) path = env;
  }
  if (!path.empty()) {
    try {
      cfg.merge(KeyValueConfig::load(path));
    } catch (const Error& e) {
      throw UsageError(std::string("cannot read config: ") + e.what());
    }
  }
  if (const char* dir = std::getenv("AEROPIPE_DATA_DIR")) cfg.set("serve", "data_dir", dir);
  return cfg;
}

/// Runs `fn`, turning value errors into usage errors.
template <class F>
auto resolve(F&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

std::string missing_dataset_message(const fs::path& path) {
  return "dataset not found: " + path.string() +
         "\nThe real data is the public city_day.csv from the Kaggle dataset \"Air Quality Data"
         " in India (2015 - 2020)\" (CPCB daily readings). Download it and point --dataset (or"
         " [analyze]/[insights] dataset) at it. A synthetic stand-in with the same schema ships"
         " as data/city_day_synthetic.csv.";
}

std::vector<CityDayRecord> load_dataset(const fs::path& path) {
  if (!fs::exists(path)) throw IoError(missing_dataset_message(path));
  return load_city_day_csv(path);
}

void write_output(const fs::path& path, std::string_view contents, std::ostream& out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file_atomic(path, contents);
  out << "wrote " << path.string() << '\n';
}

bool plausible_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) return false;
  if (url.compare(0, scheme, "http") != 0) return false;
  const auto host = url.substr(scheme + 3);
  return !host.empty() && host.front() != ':' && host.front() != '/';
}

// ---- simulate -------------------------------------------------------------

struct SimulateSettings {
  std::string url;
  std::optional<fs::path> local_dir;
  std::chrono::milliseconds duration{0};
  sim::ScenarioFile plan;
  std::vector<ingest::ChannelConfig> channels;
};

SimulateSettings resolve_simulate(const KeyValueConfig& cfg, const std::string& scenario_path,
                                  bool period_flag, bool start_flag) {
  SimulateSettings s;
  s.url = cfg.get_string("simulate", "url", "");
  if (auto dir = cfg.get("simulate", "local_dir"); dir && !dir->empty()) s.local_dir = *dir;
  const double seconds = cfg.get_double("simulate", "duration_s", 10);
  if (!(seconds >= 0)) throw InvalidArgument("duration must be >= 0 seconds");
  s.duration = std::chrono::milliseconds(std::llround(seconds * 1000.0));
  s.channels = ingest::channels_from_config(cfg);
  if (s.channels.empty()) throw InvalidArgument("no [channel:<id>] configured");

  KeyValueConfig scenario;
  scenario.set("simulation", "start", cfg.get_string("simulate", "start", ""));
  scenario.set("simulation", "period_ms", cfg.get_string("simulate", "period_ms", "1000"));
  for (const auto* section : cfg.sections_with_prefix("curve:")) {
    for (const auto& [k, v] : section->entries) scenario.set(section->name, k, v);
  }
  if (!scenario_path.empty()) {
    try {
      scenario.merge(KeyValueConfig::load(scenario_path));
    } catch (const IoError& e) {
      throw InvalidArgument(std::string("cannot read scenario: ") + e.what());
    }
    if (period_flag) scenario.set("simulation", "period_ms", *cfg.get("simulate", "period_ms"));
    if (start_flag) scenario.set("simulation", "start", *cfg.get("simulate", "start"));
  }
  if (scenario.sections_with_prefix("device:").empty()) {
    const auto n = cfg.get_uint("simulate", "devices", 1);
    if (n == 0) throw InvalidArgument("devices must be >= 1");
    for (std::uint64_t i = 1; i <= n; ++i) {
      scenario.set("device:node-" + std::to_string(i), "seed", std::to_string(i));
    }
  }
  s.plan = sim::ScenarioFile::from_config(scenario);
  for (auto& [device, gas] : s.plan.devices) {
    if (device.write_api_key.empty()) device.write_api_key = s.channels.front().write_api_key;
  }
  return s;
}

int cmd_simulate(const SimulateSettings& s, std::ostream& out, std::ostream& err) {
  std::unique_ptr<ingest::IngestService> service;
  std::unique_ptr<sim::SampleSink> sink;
  if (s.local_dir) {
    service = std::make_unique<ingest::IngestService>(*s.local_dir);
    for (const auto& ch : s.channels) service->add_channel(ch);
    sink = std::make_unique<ingest::ServiceSink>(*service);
  } else {
    if (!plausible_url(s.url)) {
      err << "error: bad service URL '" << s.url << "' (expected http://host:port)\n";
      return kExitFailure;
    }
    sink = std::make_unique<ingest::HttpSink>(s.url);
  }

  std::vector<sim::LoopStats> stats(s.plan.devices.size());
  {
    std::vector<std::jthread> workers;
    for (std::size_t i = 0; i < s.plan.devices.size(); ++i) {
      workers.emplace_back([&, i] {
        const auto& [config, gas] = s.plan.devices[i];
        sim::VirtualDevice device(config, gas);
        stats[i] = sim::run_device_loop(device, s.duration, *sink);
      });
    }
  }

  std::size_t delivered = 0, failed = 0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& id = s.plan.devices[i].first.device_id;
    out << id << ": ticks " << stats[i].ticks << ", delivered " << stats[i].delivered
        << ", failed " << stats[i].failed << '\n';
    if (!stats[i].errors.empty()) err << id << ": " << stats[i].errors.front() << '\n';
    delivered += stats[i].delivered;
    failed += stats[i].failed;
  }
  out << "total: delivered " << delivered << ", failed " << failed << '\n';
  if (service) {
    for (const auto& ch : service->channels()) {
      out << "channel " << ch.id << ": " << service->entries(ch.id).size() << " entries\n";
    }
  }
  return failed == 0 ? kExitOk : kExitFailure;
}

// ---- serve ----------------------------------------------------------------

int cmd_serve(const KeyValueConfig& cfg, std::ostream& out, std::ostream& err) {
  auto [host, port, data_dir, channels] = resolve([&] {
    auto [h, p] = ingest::parse_listen_address(cfg.get_string("serve", "listen", "127.0.0.1:8080"));
    return std::tuple{h, p, fs::path(cfg.get_string("serve", "data_dir", "./aeropipe-data")),
                      ingest::channels_from_config(cfg)};
  });

  ingest::IngestService service(data_dir);
  for (const auto& ch : channels) service.add_channel(ch);
  ingest::HttpServer server(service);

  sigset_t signals, previous;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  std::atomic<bool> finished{false};
  std::atomic<bool> bound{true};
  std::thread worker([&, host = host, port = port] {
    bound = server.listen(host, port);
    finished = true;
  });
  out << "serving " << channels.size() << " channel(s) on " << host << ':' << port << ", data in "
      << data_dir.string() << std::endl;

  const timespec tick{0, 200'000'000};
  while (!finished) {
    if (sigtimedwait(&signals, nullptr, &tick) > 0) break;
  }
  while (!finished) {
    server.stop();
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  worker.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);

  if (!bound) {
    err << "error: cannot listen on " << host << ':' << port << '\n';
    return kExitFailure;
  }
  out << "stopped\n";
  return kExitOk;
}

// ---- export ---------------------------------------------------------------

int cmd_export(const KeyValueConfig& cfg, std::ostream& out) {
  struct Settings {
    fs::path data_dir;
    std::int64_t channel;
    std::string format;
    std::size_t results;
    std::optional<Timestamp> start, end;
    std::string out_path;
    std::vector<ingest::ChannelConfig> configured;
  };
  const auto s = resolve([&] {
    Settings r;
    r.data_dir = cfg.get_string("serve", "data_dir", "./aeropipe-data");
    r.channel = cfg.get_int("export", "channel", 1);
    r.format = cfg.get_string("export", "format", "csv");
    if (r.format != "csv" && r.format != "json") throw InvalidArgument("format must be csv or json");
    r.results = cfg.get_uint("export", "results", 100);
    if (auto v = cfg.get("export", "start"); v && !v->empty()) r.start = parse_timestamp(*v);
    if (auto v = cfg.get("export", "end"); v && !v->empty()) r.end = parse_timestamp(*v);
    r.out_path = cfg.get_string("export", "out", "-");
    r.configured = ingest::channels_from_config(cfg);
    return r;
  });

  auto render = [&](const ingest::IngestService& service) {
    return s.format == "csv" ? service.export_csv(s.channel, s.start, s.end)
                             : service.read_feed_json(s.channel, s.results);
  };

  std::string doc;
  std::optional<ingest::IngestService> persisted;
  if (fs::exists(s.data_dir / "channels.json")) persisted.emplace(s.data_dir);
  bool known = false;
  if (persisted) {
    for (const auto& ch : persisted->channels()) known = known || ch.id == s.channel;
  }
  if (known) {
    doc = render(*persisted);
  } else {
    // Configured but never written: an empty feed rather than an error.
    ingest::IngestService empty;
    for (const auto& ch : s.configured) {
      if (ch.id == s.channel) empty.add_channel(ch);
    }
    doc = render(empty);
  }

  if (s.out_path == "-") {
    out << doc;
  } else {
    write_output(s.out_path, doc, out);
  }
  return kExitOk;
}

// ---- analyze --------------------------------------------------------------

int cmd_analyze(const KeyValueConfig& cfg, std::ostream& out) {
  const auto [spec, dataset, out_dir] = resolve([&] {
    return std::tuple{ml::ExperimentSpec::from_config(cfg),
                      fs::path(cfg.get_string("analyze", "dataset", "data/city_day.csv")),
                      fs::path(cfg.get_string("analyze", "out_dir", "reports"))};
  });
  const auto records = load_dataset(dataset);
  const auto result = ml::run_experiment(records, spec);
  const std::string stem = spec.task == ml::Task::Regression ? "regression" : "classification";
  out << result.to_table();
  write_output(out_dir / (stem + "_results.csv"), result.to_csv(), out);
  write_output(out_dir / (stem + "_results.txt"), result.to_table(), out);
  return kExitOk;
}

// ---- insights -------------------------------------------------------------

int cmd_insights(const KeyValueConfig& cfg, const std::string& which, std::ostream& out) {
  static const std::vector<std::string> kinds{"correlation", "vehicular", "industrial",
                                              "rankings",    "trend",     "extremes"};
  struct Settings {
    fs::path dataset, out_dir;
    std::size_t top;
    insights::Granularity granularity;
    insights::ExtremesMode mode;
    const insights::PollutantGroup* rank_group;
    std::vector<std::string> cities;
  };
  const auto s = resolve([&] {
    if (which != "all" && std::find(kinds.begin(), kinds.end(), which) == kinds.end()) {
      throw InvalidArgument("unknown insight '" + which + "'");
    }
    Settings r;
    r.dataset = cfg.get_string("insights", "dataset", "data/city_day.csv");
    r.out_dir = cfg.get_string("insights", "out_dir", "insights");
    r.top = cfg.get_uint("insights", "top", 9);
    if (r.top == 0) throw InvalidArgument("top must be >= 1");
    r.granularity = insights::parse_granularity(cfg.get_string("insights", "granularity", "yearly"));
    r.mode = insights::parse_extremes_mode(cfg.get_string("insights", "extremes_mode", "yearly_mean"));
    r.rank_group = &insights::GroupSet::defaults().by_name(
        cfg.get_string("insights", "group", "industrial"));
    r.cities = cfg.get_list("insights", "cities");
    return r;
  });

  const auto records = load_dataset(s.dataset);
  const auto& groups = insights::GroupSet::defaults();
  auto wanted = [&](const std::string& kind) { return which == "all" || which == kind; };
  auto emit = [&](const std::string& stem, const std::string& csv, const std::string& json) {
    write_output(s.out_dir / (stem + ".csv"), csv, out);
    write_output(s.out_dir / (stem + ".json"), json, out);
  };

  if (wanted("correlation")) {
    const auto m = insights::correlation_matrix(records, insights::numeric_columns());
    emit("correlation", m.to_csv(), m.to_json());
  }
  for (const auto* group : {&groups.vehicular, &groups.industrial}) {
    if (!wanted(group->name)) continue;
    const auto means = insights::group_pollution_by_city(records, *group, s.cities);
    for (const auto& w : means.warnings) out << "warning: " << w << '\n';
    emit("group_" + group->name, means.to_csv(), means.to_json());
  }
  if (wanted("rankings")) {
    const auto scores = insights::city_rankings(records, *s.rank_group, s.top);
    emit("rankings_" + s.rank_group->name, insights::rankings_csv(scores),
         insights::rankings_json(scores));
  }
  if (wanted("trend")) {
    std::vector<std::string> cities = s.cities;
    if (cities.empty()) {
      std::set<std::string> all;
      for (const auto& r : records) all.insert(r.city);
      cities.assign(all.begin(), all.end());
    }
    std::string csv;
    std::string json = "[\n";
    for (std::size_t i = 0; i < cities.size(); ++i) {
      const auto points = insights::aqi_trend(records, cities[i], s.granularity);
      auto part = insights::trend_csv(cities[i], points);
      csv += i == 0 ? part : part.substr(part.find('\n') + 1);
      json += insights::trend_json(cities[i], points);
      if (i + 1 < cities.size()) json.insert(json.size() - 1, ",");
    }
    json += "]\n";
    emit("trend", csv, json);
  }
  if (wanted("extremes")) {
    const auto e = insights::extremes(records, s.mode);
    out << e.to_csv();
    emit("extremes", e.to_csv(), e.to_json());
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"aeropipe: simulated air-quality telemetry, ingestion and analysis"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "Config file layered over built-in defaults")
      ->envname("AEROPIPE_CONFIG");

  Overrides ov;

  auto* simulate = app.add_subcommand("simulate", "Run virtual sensor devices against a service");
  std::string scenario_path;
  simulate->add_option("-s,--scenario", scenario_path, "Scenario file with [device:<id>] sections");
  ov.add(simulate, "--url", "simulate", "url", "Ingest service base URL");
  ov.add(simulate, "--local", "simulate", "local_dir",
         "Deliver into an in-process service over this data directory instead of HTTP");
  ov.add(simulate, "--duration", "simulate", "duration_s", "Virtual seconds to run");
  auto* period_opt = ov.add(simulate, "--period-ms", "simulate", "period_ms", "Sample period");
  auto* start_opt = ov.add(simulate, "--start", "simulate", "start", "Virtual start time (ISO 8601)");
  ov.add(simulate, "--devices", "simulate", "devices", "Device count without a scenario file");

  auto* serve = app.add_subcommand("serve", "Run the ingest HTTP service until SIGINT/SIGTERM");
  ov.add(serve, "--listen", "serve", "listen", "host:port");
  ov.add(serve, "--data-dir", "serve", "data_dir", "Persistence directory");

  auto* exp = app.add_subcommand("export", "Export a channel feed from a data directory");
  ov.add(exp, "--data-dir", "serve", "data_dir", "Persistence directory");
  ov.add(exp, "--channel", "export", "channel", "Channel id");
  ov.add(exp, "-o,--out", "export", "out", "Output file, '-' for stdout");
  ov.add(exp, "--format", "export", "format", "csv or json");
  ov.add(exp, "--results", "export", "results", "Newest N entries (json)");
  ov.add(exp, "--start", "export", "start", "Earliest created_at (csv)");
  ov.add(exp, "--end", "export", "end", "Latest created_at (csv)");

  auto* analyze = app.add_subcommand("analyze", "Train and score models on the city-day dataset");
  ov.add(analyze, "--dataset", "analyze", "dataset", "city_day.csv path");
  ov.add(analyze, "--out-dir", "analyze", "out_dir", "Report directory");
  ov.add(analyze, "--task", "analyze", "task", "regression or classification");
  ov.add(analyze, "--models", "analyze", "models", "Comma-separated model list");
  ov.add(analyze, "--smote", "analyze", "smote", "off, on or 'off, on'");
  ov.add(analyze, "--test-fraction", "analyze", "test_fraction", "Held-out share");
  ov.add(analyze, "--seed", "analyze", "seed", "Split and model seed");
  ov.add(analyze, "--trees", "model", "rf_trees", "Random forest size");

  auto* ins = app.add_subcommand("insights", "Write plot-ready insight tables");
  std::string which = "all";
  ins->add_option("which", which,
                  "all, correlation, vehicular, industrial, rankings, trend or extremes");
  ov.add(ins, "--dataset", "insights", "dataset", "city_day.csv path");
  ov.add(ins, "--out-dir", "insights", "out_dir", "Output directory");
  ov.add(ins, "--top", "insights", "top", "Ranking length");
  ov.add(ins, "--group", "insights", "group", "Ranking group: vehicular or industrial");
  ov.add(ins, "--cities", "insights", "cities", "Comma-separated city filter");
  ov.add(ins, "--granularity", "insights", "granularity", "daily, monthly or yearly");
  ov.add(ins, "--extremes-mode", "insights", "extremes_mode", "yearly_mean or worst_day");

  auto* dump = app.add_subcommand("config-dump", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto cfg = layered_config(config_path);
    ov.apply(cfg);
    if (dump->parsed()) {
      out << cfg.dump();
      return kExitOk;
    }
    if (simulate->parsed()) {
      const auto settings = resolve([&] {
        return resolve_simulate(cfg, scenario_path, period_opt->count() > 0,
                                start_opt->count() > 0);
      });
      return cmd_simulate(settings, out, err);
    }
    if (serve->parsed()) return cmd_serve(cfg, out, err);
    if (exp->parsed()) return cmd_export(cfg, out);
    if (analyze->parsed()) return cmd_analyze(cfg, out);
    if (ins->parsed()) return cmd_insights(cfg, which, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace aeropipe::cli
