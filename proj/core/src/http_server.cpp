#include "aeropipe/http_server.hpp"

#include <charconv>
#include <thread>

#include "httplib.h"

#include "aeropipe/errors.hpp"
#include "aeropipe/fileutil.hpp"

namespace aeropipe::ingest {

namespace {

std::optional<std::string_view> param(const httplib::Request& req, const char* name) {
  auto it = req.params.find(name);
  if (it == req.params.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::int64_t channel_id_from(const httplib::Request& req) {
  const auto& text = req.matches[1].str();
  std::int64_t id = 0;
  std::from_chars(text.data(), text.data() + text.size(), id);
  return id;
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(message + "\n", "text/plain");
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFound& e) {
    send_error(res, 404, e.what());
  } catch (const InvalidArgument& e) {
    send_error(res, 400, e.what());
  } catch (const ParseError& e) {
    send_error(res, 400, e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

struct HttpServer::Impl {
  IngestService& service;
  Clock clock;
  httplib::Server server;
  std::thread thread;

  Impl(IngestService& s, Clock c) : service(s), clock(std::move(c)) { routes(); }

  void handle_update(const httplib::Request& req, httplib::Response& res) {
    auto key = param(req, "api_key");
    if (!key) {
      res.status = 401;
      res.set_content("0", "text/plain");
      return;
    }
    Timestamp at = clock();
    if (auto created = param(req, "created_at")) {
      try {
        at = parse_timestamp(*created);
      } catch (const ParseError& e) {
        send_error(res, 400, e.what());
        return;
      }
    }
    auto result = service.handle_update(*key, param(req, "field1"), param(req, "field2"), at);
    res.status = result.status;
    if (result.status == 400) {
      res.set_content(result.message + "\n", "text/plain");
    } else {
      res.set_content(std::to_string(result.entry_id), "text/plain");
    }
  }

  void handle_pin(const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string pin = req.matches[1].str();
      if (auto value = param(req, "value"); value || req.method == "POST") {
        std::string text = value ? std::string(*value) : trim(req.body);
        double v = 0;
        if (!parse_double(trim(text), v)) {
          throw InvalidArgument("pin value '" + text + "' is not a number");
        }
        service.write_virtual_pin(pin, v, clock());
        res.set_content("1", "text/plain");
        return;
      }
      auto pv = service.read_virtual_pin(pin);
      res.set_content("{\"pin\":\"" + pin + "\",\"value\":" + format_double(pv.value) +
                          ",\"updated_at\":\"" + format_timestamp(pv.updated_at) + "\"}",
                      "application/json");
    });
  }

  void routes() {
    auto update = [this](const httplib::Request& req, httplib::Response& res) {
      handle_update(req, res);
    };
    server.Get("/update", update);
    server.Post("/update", update);

    server.Get(R"(/channels/(\d+)/feeds\.csv)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   std::optional<Timestamp> start, end;
                   if (auto s = param(req, "start")) start = parse_timestamp(*s);
                   if (auto e = param(req, "end")) end = parse_timestamp(*e);
                   res.set_content(service.export_csv(channel_id_from(req), start, end),
                                   "text/csv");
                 });
               });

    server.Get(R"(/channels/(\d+)/feeds\.json)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   std::size_t results = 100;
                   if (auto r = param(req, "results")) {
                     double v = 0;
                     if (!parse_double(*r, v) || v < 1 || v != static_cast<std::size_t>(v)) {
                       throw InvalidArgument("results must be a positive integer");
                     }
                     results = static_cast<std::size_t>(v);
                   }
                   res.set_content(service.read_feed_json(channel_id_from(req), results),
                                   "application/json");
                 });
               });

    auto pin = [this](const httplib::Request& req, httplib::Response& res) {
      handle_pin(req, res);
    };
    server.Get(R"(/blynk/pin/([^/]+))", pin);
    server.Post(R"(/blynk/pin/([^/]+))", pin);
  }
};

HttpServer::HttpServer(IngestService& service, Clock clock)
    : impl_(std::make_unique<Impl>(service, std::move(clock))) {}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int HttpServer::start_background(const std::string& host) {
  int port = impl_->server.bind_to_any_port(host);
  if (port < 0) return -1;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::pair<std::string, int> parse_listen_address(const std::string& text) {
  auto colon = text.rfind(':');
  int port = 0;
  if (colon == std::string::npos || colon == 0) {
    throw ParseError("listen address '" + text + "' must be host:port");
  }
  auto port_text = text.substr(colon + 1);
  auto res = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (res.ec != std::errc{} || res.ptr != port_text.data() + port_text.size() || port < 0 ||
      port > 65535) {
    throw ParseError("invalid port in listen address '" + text + "'");
  }
  return {text.substr(0, colon), port};
}

}  // namespace aeropipe::ingest
