#pragma once

#include <functional>
#include <memory>
#include <string>

#include "aeropipe/ingest.hpp"
#include "aeropipe/timeutil.hpp"

namespace aeropipe::ingest {

/// HTTP front end over an IngestService.
///
///   GET|POST /update?api_key=K&field1=F1&field2=F2[&created_at=ISO]
///   GET      /channels/{id}/feeds.csv[?start=ISO&end=ISO]
///   GET      /channels/{id}/feeds.json?results=N
///   GET|POST /blynk/pin/{name}[?value=X]
///
/// `created_at` on /update overrides the receive time, which lets simulated
/// devices on a virtual clock exercise the rate limiter deterministically.
class HttpServer {
 public:
  using Clock = std::function<Timestamp()>;

  explicit HttpServer(IngestService& service, Clock clock = now_utc);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Blocks until stop(). Returns false if the address cannot be bound.
  bool listen(const std::string& host, int port);

  /// Binds an ephemeral port and serves on a background thread.
  /// Returns the port, or -1 on failure.
  int start_background(const std::string& host = "127.0.0.1");

  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Splits "host:port". Throws ParseError.
std::pair<std::string, int> parse_listen_address(const std::string& text);

}  // namespace aeropipe::ingest
