#include <mutex>
#include <set>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "test_support.hpp"

#include "aeropipe/fileutil.hpp"
#include "aeropipe/http_server.hpp"
#include "aeropipe/http_sink.hpp"
#include "aeropipe/ingest.hpp"
#include "aeropipe/timeutil.hpp"

using namespace aeropipe;
using namespace aeropipe::ingest;
using namespace std::chrono_literals;

namespace {

const Timestamp t0 = parse_timestamp("2024-01-01T00:00:00Z");

struct Fixture {
  IngestService service;
  Timestamp now = t0;
  std::mutex clock_mutex;
  HttpServer server{service, [this] {
                      std::lock_guard lock(clock_mutex);
                      return now;
                    }};
  int port = -1;
  std::unique_ptr<httplib::Client> client;

  explicit Fixture(std::chrono::milliseconds interval = 1000ms) {
    ChannelConfig c;
    c.id = 1;
    c.name = "Air";
    c.write_api_key = "KEY";
    c.field_names = {"MQ135 ppm", "MQ3 ppm"};
    c.min_update_interval = interval;
    service.add_channel(c);
    port = server.start_background();
    REQUIRE(port > 0);
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  ~Fixture() { server.stop(); }

  void advance(std::chrono::milliseconds d) {
    std::lock_guard lock(clock_mutex);
    now += d;
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

// Forwards to an inner sink and remembers what it sent.
class TeeSink final : public sim::SampleSink {
 public:
  explicit TeeSink(sim::SampleSink& inner) : inner_(inner) {}
  sim::DeliveryResult deliver(const sim::DeviceConfig& d, const SensorSample& a,
                              const SensorSample& b) override {
    auto r = inner_.deliver(d, a, b);
    std::lock_guard lock(mutex_);
    if (r.ok) sent.emplace_back(a, b);
    return r;
  }
  std::vector<std::pair<SensorSample, SensorSample>> sent;

 private:
  sim::SampleSink& inner_;
  std::mutex mutex_;
};

}  // namespace

TEST_CASE("http: /update status and body conventions") {
  Fixture f;
  auto r = f.client->Get("/update?api_key=KEY&field1=400.5&field2=0.3");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->body == "1");

  f.advance(200ms);
  r = f.client->Get("/update?api_key=KEY&field1=401&field2=0.3");
  CHECK(r->status == 200);
  CHECK(r->body == "0");

  r = f.client->Get("/update?api_key=NOPE&field1=1");
  CHECK(r->status == 401);
  CHECK(r->body == "0");
  r = f.client->Get("/update?field1=1");
  CHECK(r->status == 401);

  f.advance(1s);
  r = f.client->Get("/update?api_key=KEY&field1=banana");
  CHECK(r->status == 400);

  r = f.client->Post("/update", httplib::Params{{"api_key", "KEY"}, {"field1", "402"}});
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->body == "2");

  r = f.client->Get("/update?api_key=KEY&field1=1&created_at=not-a-time");
  CHECK(r->status == 400);
  CHECK(f.service.entries(1).size() == 2);
}

TEST_CASE("http: exports") {
  Fixture f;
  auto r = f.client->Get("/channels/1/feeds.csv");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->body == "created_at,entry_id,field1,field2\n");

  for (int i = 0; i < 5; ++i) {
    f.client->Get("/update?api_key=KEY&field1=" + std::to_string(i) + "&field2=1");
    f.advance(1s);
  }
  r = f.client->Get("/channels/1/feeds.csv");
  CHECK(r->body == f.service.export_csv(1));
  r = f.client->Get("/channels/1/feeds.csv?start=2024-01-01T00:00:03Z");
  CHECK(parse_channel_csv(r->body).size() == 2);

  r = f.client->Get("/channels/1/feeds.json?results=1");
  CHECK(r->status == 200);
  CHECK(r->body == f.service.read_feed_json(1, 1));
  CHECK(f.client->Get("/channels/1/feeds.json?results=0")->status == 400);
  CHECK(f.client->Get("/channels/9/feeds.csv")->status == 404);
  CHECK(f.client->Get("/channels/9/feeds.json")->status == 404);
}

TEST_CASE("http: virtual pins") {
  Fixture f;
  CHECK(f.client->Get("/blynk/pin/V1")->status == 404);
  CHECK(f.client->Post("/blynk/pin/V1", httplib::Params{{"value", "42.5"}})->status == 200);
  auto r = f.client->Get("/blynk/pin/V1");
  CHECK(r->status == 200);
  CHECK(r->body == "{\"pin\":\"V1\",\"value\":42.5,\"updated_at\":\"2024-01-01T00:00:00Z\"}");
  CHECK(f.client->Get("/blynk/pin/V1?value=7")->status == 200);
  CHECK(f.service.read_virtual_pin("V1").value == 7);
  CHECK(f.client->Post("/blynk/pin/V1", "8.25", "text/plain")->status == 200);
  CHECK(f.service.read_virtual_pin("V1").value == 8.25);
  CHECK(f.client->Post("/blynk/pin/pin1", httplib::Params{{"value", "1"}})->status == 400);
  CHECK(f.client->Post("/blynk/pin/V2", httplib::Params{{"value", "x"}})->status == 400);
}

TEST_CASE("end to end: one device, ten virtual seconds") {
  Fixture f;
  sim::DeviceConfig dev;
  dev.write_api_key = "KEY";
  dev.rng_seed = 5;
  dev.start = t0;
  sim::GasScenario gas;
  gas.gas[0] = sim::Timeline::parse("0:400, 10:900");
  gas.gas[1] = sim::Timeline::parse("0:0.3");
  sim::VirtualDevice device(dev, gas);
  HttpSink http(f.url());
  TeeSink sink(http);
  auto stats = sim::run_device_loop(device, 10s, sink);
  CHECK(stats.delivered == 10);
  CHECK(stats.failed == 0);

  auto r = f.client->Get("/channels/1/feeds.csv");
  auto rows = parse_channel_csv(r->body);
  REQUIRE(rows.size() == 10);
  REQUIRE(sink.sent.size() == 10);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].entry_id == std::int64_t(i + 1));
    CHECK(rows[i].created_at == t0 + std::chrono::seconds(i));
    CHECK(rows[i].field1 == sink.sent[i].first.ppm);
    CHECK(rows[i].field2 == sink.sent[i].second.ppm);
  }
  CHECK(f.service.read_virtual_pin("V1").value == sink.sent.back().first.ppm);
}

TEST_CASE("end to end: eight concurrent devices on one channel") {
  Fixture f(0ms);
  HttpSink sink(f.url());
  std::vector<sim::LoopStats> stats(8);
  {
    std::vector<std::jthread> pool;
    for (int d = 0; d < 8; ++d) {
      pool.emplace_back([&, d] {
        sim::DeviceConfig dev;
        dev.device_id = "node-" + std::to_string(d);
        dev.write_api_key = "KEY";
        dev.rng_seed = std::uint64_t(d + 1);
        dev.start = t0;
        sim::GasScenario gas;
        gas.gas[0] = sim::Timeline::parse("0:400");
        gas.gas[1] = sim::Timeline::parse("0:0.4");
        sim::VirtualDevice device(dev, gas);
        stats[d] = sim::run_device_loop(device, 10s, sink);
      });
    }
  }
  for (const auto& s : stats) {
    CHECK(s.delivered == 10);
  }
  auto rows = parse_channel_csv(f.client->Get("/channels/1/feeds.csv")->body);
  REQUIRE(rows.size() == 80);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].entry_id == std::int64_t(i + 1));
}

TEST_CASE("http sink reports an unreachable service") {
  HttpSink sink("http://127.0.0.1:1", 200ms);
  sim::DeviceConfig dev;
  dev.write_api_key = "KEY";
  auto r = sink.deliver(dev, SensorSample{}, SensorSample{});
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("listen addresses") {
  CHECK(parse_listen_address("127.0.0.1:8080") == std::pair<std::string, int>{"127.0.0.1", 8080});
  CHECK_THROWS(parse_listen_address("localhost"));
  CHECK_THROWS(parse_listen_address("h:99999"));
}
