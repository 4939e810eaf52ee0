#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxaudit/detector.hpp"

namespace ctxaudit {

using HeaderList = std::vector<std::pair<std::string, std::string>>;

struct HttpRequest {
  std::string method = "GET";
  std::string target;  // origin-form or absolute-form request target
  std::vector<RequestParam> query;
  std::vector<RequestParam> form;
  std::vector<RequestParam> cookies;
  HeaderList headers;
};

struct HttpResponse {
  int status = 200;
  HeaderList headers;
  Bytes body;  // as received; may be gzip/deflate encoded
};

struct HttpExchange {
  HttpRequest request;
  HttpResponse response;
};

enum class ProxyMode { Block, LogOnly };

struct ProxyConfig {
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;
  // Reverse mode target, "host:port" or "http://host:port". Without it the
  // proxy runs in forward mode and routes absolute-form requests.
  std::optional<std::string> upstream;
  ReflectionConfig reflection;
  int block_status = 404;
  ProxyMode mode = ProxyMode::Block;
  std::vector<std::string> analyzable_types = {"text/html"};
  std::size_t max_body = 8u << 20;
  bool fail_closed = false;

  // Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

enum class ActionKind { Forward, Block, ForwardWithLog };

struct ProxyAction {
  ActionKind kind = ActionKind::Forward;
  int status = 0;  // set for Block

  friend bool operator==(const ProxyAction&, const ProxyAction&) = default;
};

std::string_view to_string(ActionKind kind) noexcept;

struct ExchangeOutcome {
  ProxyAction action;
  std::optional<DetectionReport> report;  // set when the detector ran
  std::vector<std::string> log_lines;     // JSON records, one per line
};

// Decides what to do with one buffered exchange. Pure apart from the clock
// used for log timestamps.
ExchangeOutcome handle_exchange(const HttpExchange& exchange, const ProxyConfig& config);

// Parameters of an application/x-www-form-urlencoded string. Names and
// values are percent-decoded; `raw` keeps the undecoded value.
std::vector<RequestParam> parse_urlencoded(std::string_view text);
std::vector<RequestParam> parse_cookie_header(std::string_view header);

// Builds an exchange's request side from a request line target, headers and body.
HttpRequest make_request(std::string method, std::string target, HeaderList headers, const Bytes& body);

std::optional<std::string> find_header(const HeaderList& headers, std::string_view name);

// Content-Encoding aware body decoding; throws std::runtime_error on corrupt
// or unsupported encodings.
Bytes decode_body(const Bytes& body, std::string_view content_encoding);

using LogSink = std::function<void(const std::string& line)>;

// The HTTP service: reverse proxy to `upstream`, or forward proxy for
// absolute-form plain HTTP requests. GET /health answers 200 locally.
class ProxyServer {
 public:
  ProxyServer(ProxyConfig config, LogSink log);
  ~ProxyServer();
  ProxyServer(const ProxyServer&) = delete;
  ProxyServer& operator=(const ProxyServer&) = delete;

  // Binds the listen address; port 0 picks a free port. False on failure.
  bool bind();
  int port() const noexcept;
  // Serves until stop(); requires a successful bind().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ctxaudit
