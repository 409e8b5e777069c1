#pragma once

#include <chrono>
#include <string>

#include "aeropipe/ingest.hpp"
#include "aeropipe/sensor.hpp"

namespace aeropipe::ingest {

/// Delivers device pairs straight into an in-process IngestService:
/// field1/field2 on the device's channel, then pins V1/V2.
class ServiceSink final : public sim::SampleSink {
 public:
  explicit ServiceSink(IngestService& service) : service_(service) {}
  sim::DeliveryResult deliver(const sim::DeviceConfig& device, const SensorSample& mq135,
                              const SensorSample& mq3) override;

 private:
  IngestService& service_;
};

/// Same protocol over HTTP against a running `aeropipe serve`.
class HttpSink final : public sim::SampleSink {
 public:
  /// `base_url` like "http://127.0.0.1:8080".
  explicit HttpSink(std::string base_url,
                    std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));
  sim::DeliveryResult deliver(const sim::DeviceConfig& device, const SensorSample& mq135,
                              const SensorSample& mq3) override;

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

}  // namespace aeropipe::ingest
