#include <httplib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <mutex>

#include "ctxaudit/proxy.hpp"

namespace ctxaudit {
namespace {

struct Endpoint {
  std::string host;
  int port = 80;
  std::string target;  // origin-form path and query
};

// Headers that describe a single connection, plus the pseudo headers the
// server library injects.
bool is_hop_header(std::string_view name) {
  static constexpr std::array<std::string_view, 13> kHop = {
      "connection",  "proxy-connection", "keep-alive",  "transfer-encoding", "te",
      "upgrade",     "trailer",          "host",        "content-length",    "remote_addr",
      "remote_port", "local_addr",       "local_port",
  };
  std::string lowered(name);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
  return std::find(kHop.begin(), kHop.end(), lowered) != kHop.end();
}

std::optional<Endpoint> parse_authority(std::string_view authority) {
  Endpoint endpoint;
  const std::size_t colon = authority.rfind(':');
  if (colon == std::string_view::npos) {
    endpoint.host = std::string(authority);
  } else {
    endpoint.host = std::string(authority.substr(0, colon));
    const std::string_view port = authority.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), endpoint.port);
    if (ec != std::errc{} || ptr != port.data() + port.size() || endpoint.port <= 0 || endpoint.port > 65535) {
      return std::nullopt;
    }
  }
  if (endpoint.host.empty()) return std::nullopt;
  return endpoint;
}

// Splits "http://host[:port]/path?query" into an endpoint.
std::optional<Endpoint> parse_absolute(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) return std::nullopt;
  url.remove_prefix(kScheme.size());
  const std::size_t slash = url.find_first_of("/?");
  auto endpoint = parse_authority(url.substr(0, slash));
  if (!endpoint) return std::nullopt;
  endpoint->target = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
  if (endpoint->target.front() == '?') endpoint->target.insert(0, "/");
  return endpoint;
}

}  // namespace

struct ProxyServer::Impl {
  ProxyConfig config;
  LogSink log;
  std::mutex log_mutex;
  httplib::Server server;
  std::optional<Endpoint> upstream;
  int port = -1;

  void emit(const std::vector<std::string>& lines) {
    if (!log || lines.empty()) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    for (const std::string& line : lines) log(line);
  }

  httplib::Server::HandlerResponse handle(const httplib::Request& req, httplib::Response& res) {
    const bool absolute = req.target.rfind("http://", 0) == 0 || req.target.rfind("https://", 0) == 0;
    if (!absolute && req.path == "/health" && (req.method == "GET" || req.method == "HEAD")) {
      res.status = 200;
      res.set_content("ok\n", "text/plain");
      return httplib::Server::HandlerResponse::Handled;
    }

    std::optional<Endpoint> destination;
    if (upstream) {
      destination = *upstream;
      destination->target = req.target;
    } else if (absolute) {
      destination = parse_absolute(req.target);
    }
    if (!destination) {
      res.status = upstream || !absolute ? 400 : 501;
      return httplib::Server::HandlerResponse::Handled;
    }

    httplib::Request forwarded;
    forwarded.method = req.method;
    forwarded.path = destination->target;
    forwarded.body = req.body;
    HeaderList request_headers;
    for (const auto& [name, value] : req.headers) {
      if (is_hop_header(name)) continue;
      forwarded.headers.emplace(name, value);
      request_headers.emplace_back(name, value);
    }

    httplib::Client client(destination->host, destination->port);
    client.set_decompress(false);
    client.set_url_encode(false);
    client.set_keep_alive(false);
    auto result = client.send(forwarded);
    if (!result) {
      res.status = 502;
      return httplib::Server::HandlerResponse::Handled;
    }

    HttpExchange exchange;
    exchange.request = make_request(req.method, req.target, std::move(request_headers), req.body);
    exchange.response.status = result->status;
    for (const auto& [name, value] : result->headers) exchange.response.headers.emplace_back(name, value);
    exchange.response.body = result->body;

    const ExchangeOutcome outcome = handle_exchange(exchange, config);
    emit(outcome.log_lines);

    if (outcome.action.kind == ActionKind::Block) {
      res.status = outcome.action.status;
      return httplib::Server::HandlerResponse::Handled;
    }
    res.status = result->status;
    for (const auto& [name, value] : result->headers) {
      if (!is_hop_header(name)) res.headers.emplace(name, value);
    }
    res.body = std::move(exchange.response.body);
    return httplib::Server::HandlerResponse::Handled;
  }
};

ProxyServer::ProxyServer(ProxyConfig config, LogSink log) : impl_(std::make_unique<Impl>()) {
  config.validate();
  impl_->config = std::move(config);
  impl_->log = std::move(log);
}

ProxyServer::~ProxyServer() { stop(); }

bool ProxyServer::bind() {
  Impl& impl = *impl_;
  if (impl.config.upstream) {
    std::string_view text = *impl.config.upstream;
    if (text.rfind("http://", 0) == 0) text.remove_prefix(7);
    while (!text.empty() && text.back() == '/') text.remove_suffix(1);
    impl.upstream = parse_authority(text);
    if (!impl.upstream) return false;
  }
  impl.server.set_pre_routing_handler(
      [&impl](const httplib::Request& req, httplib::Response& res) { return impl.handle(req, res); });
  if (impl.config.listen_port == 0) {
    impl.port = impl.server.bind_to_any_port(impl.config.listen_host);
  } else if (impl.server.bind_to_port(impl.config.listen_host, impl.config.listen_port)) {
    impl.port = impl.config.listen_port;
  }
  return impl.port > 0;
}

int ProxyServer::port() const noexcept { return impl_->port; }

void ProxyServer::run() { impl_->server.listen_after_bind(); }

void ProxyServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace ctxaudit
