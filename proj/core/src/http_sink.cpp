#include "aeropipe/http_sink.hpp"

#include "httplib.h"

#include "aeropipe/fileutil.hpp"

namespace aeropipe::ingest {

sim::DeliveryResult ServiceSink::deliver(const sim::DeviceConfig& device,
                                         const SensorSample& mq135, const SensorSample& mq3) {
  const auto f1 = format_double(mq135.ppm);
  const auto f2 = format_double(mq3.ppm);
  auto res = service_.handle_update(device.write_api_key, f1, f2, mq135.taken_at);
  service_.write_virtual_pin("V1", mq135.ppm, mq135.taken_at);
  service_.write_virtual_pin("V2", mq3.ppm, mq3.taken_at);
  if (res.status != 200) return {false, "status " + std::to_string(res.status) + ": " + res.message};
  if (res.entry_id == 0) return {false, "update rejected (" + res.message + ")"};
  return {};
}

HttpSink::HttpSink(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {}

sim::DeliveryResult HttpSink::deliver(const sim::DeviceConfig& device, const SensorSample& mq135,
                                      const SensorSample& mq3) {
  httplib::Client client(base_url_);
  if (!client.is_valid()) return {false, "invalid service URL '" + base_url_ + "'"};
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);

  httplib::Params params{{"api_key", device.write_api_key},
                         {"field1", format_double(mq135.ppm)},
                         {"field2", format_double(mq3.ppm)},
                         {"created_at", format_timestamp(mq135.taken_at)}};
  auto res = client.Get("/update", params, httplib::Headers{});
  if (!res) return {false, "update request failed: " + httplib::to_string(res.error())};
  if (res->status != 200) return {false, "update returned HTTP " + std::to_string(res->status)};
  if (res->body == "0") return {false, "update rejected by service"};

  for (const auto& [pin, value] : {std::pair{"V1", mq135.ppm}, std::pair{"V2", mq3.ppm}}) {
    auto pr = client.Post(std::string("/blynk/pin/") + pin,
                          httplib::Params{{"value", format_double(value)}});
    if (!pr || pr->status != 200) return {false, std::string("pin write failed for ") + pin};
  }
  return {};
}

}  // namespace aeropipe::ingest
