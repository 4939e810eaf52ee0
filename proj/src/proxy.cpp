#include "ctxaudit/proxy.hpp"

#include <zlib.h>

#include <algorithm>
#include <ctime>
#include <stdexcept>

#include <json.hpp>

#include "ctxaudit/catalog.hpp"

namespace ctxaudit {
namespace {

using json = nlohmann::ordered_json;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  return text;
}

std::string media_type(std::string_view content_type) {
  return lower(trim(content_type.substr(0, content_type.find(';'))));
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

Bytes inflate_with(const Bytes& body, int window_bits) {
  z_stream stream{};
  if (inflateInit2(&stream, window_bits) != Z_OK) throw std::runtime_error("zlib initialisation failed");
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(body.data()));
  stream.avail_in = static_cast<uInt>(body.size());
  Bytes out;
  char chunk[16384];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    stream.next_out = reinterpret_cast<Bytef*>(chunk);
    stream.avail_out = sizeof chunk;
    rc = inflate(&stream, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&stream);
      throw std::runtime_error("corrupt compressed body");
    }
    out.append(chunk, sizeof chunk - stream.avail_out);
    if (rc == Z_OK && stream.avail_in == 0 && stream.avail_out != 0) {
      inflateEnd(&stream);
      throw std::runtime_error("truncated compressed body");
    }
  }
  inflateEnd(&stream);
  return out;
}

json event_json(const TransitionEvent& event) {
  return json{{"index", event.index},
              {"from", qualified_name(event.from)},
              {"to", qualified_name(event.to)},
              {"is_error", event.is_error}};
}

// Request targets and fault messages may carry arbitrary bytes.
std::string line(const json& record) { return record.dump(-1, ' ', false, json::error_handler_t::replace); }

std::string action_label(const ProxyAction& action) { return std::string(to_string(action.kind)); }

}  // namespace

void ProxyConfig::validate() const {
  if (block_status < 400 || block_status > 599) throw std::invalid_argument("block status must be in [400, 599]");
  if (listen_port < 0 || listen_port > 65535) throw std::invalid_argument("listen port out of range");
  if (max_body == 0) throw std::invalid_argument("max body must be positive");
  reflection.validate();
}

std::string_view to_string(ActionKind kind) noexcept {
  switch (kind) {
    case ActionKind::Forward:
      return "forward";
    case ActionKind::Block:
      return "block";
    case ActionKind::ForwardWithLog:
      return "forward_with_log";
  }
  return "forward";
}

std::optional<std::string> find_header(const HeaderList& headers, std::string_view name) {
  const std::string wanted = lower(name);
  for (const auto& [key, value] : headers) {
    if (lower(key) == wanted) return value;
  }
  return std::nullopt;
}

std::vector<RequestParam> parse_urlencoded(std::string_view text) {
  std::vector<RequestParam> params;
  while (!text.empty()) {
    const std::size_t amp = text.find('&');
    const std::string_view pair = text.substr(0, amp);
    text = amp == std::string_view::npos ? std::string_view{} : text.substr(amp + 1);
    if (pair.empty()) continue;
    const std::size_t eq = pair.find('=');
    const std::string_view name = pair.substr(0, eq);
    const std::string_view raw = eq == std::string_view::npos ? std::string_view{} : pair.substr(eq + 1);
    RequestParam param{percent_decode(name), percent_decode(raw), std::nullopt};
    if (param.value != raw) param.raw = Bytes(raw);
    params.push_back(std::move(param));
  }
  return params;
}

std::vector<RequestParam> parse_cookie_header(std::string_view header) {
  std::vector<RequestParam> cookies;
  while (!header.empty()) {
    const std::size_t semi = header.find(';');
    const std::string_view pair = trim(header.substr(0, semi));
    header = semi == std::string_view::npos ? std::string_view{} : header.substr(semi + 1);
    const std::size_t eq = pair.find('=');
    if (pair.empty() || eq == std::string_view::npos) continue;
    const std::string_view raw = pair.substr(eq + 1);
    RequestParam cookie{std::string(trim(pair.substr(0, eq))), percent_decode(raw), std::nullopt};
    if (cookie.value != raw) cookie.raw = Bytes(raw);
    cookies.push_back(std::move(cookie));
  }
  return cookies;
}

HttpRequest make_request(std::string method, std::string target, HeaderList headers, const Bytes& body) {
  HttpRequest request;
  request.method = std::move(method);
  request.target = std::move(target);
  const std::size_t query = request.target.find('?');
  if (query != std::string::npos) {
    std::string_view q = std::string_view(request.target).substr(query + 1);
    q = q.substr(0, q.find('#'));
    request.query = parse_urlencoded(q);
  }
  const auto content_type = find_header(headers, "Content-Type");
  if (content_type && media_type(*content_type) == "application/x-www-form-urlencoded") {
    request.form = parse_urlencoded(body);
  }
  for (const auto& [key, value] : headers) {
    if (lower(key) != "cookie") continue;
    auto cookies = parse_cookie_header(value);
    request.cookies.insert(request.cookies.end(), cookies.begin(), cookies.end());
  }
  request.headers = std::move(headers);
  return request;
}

Bytes decode_body(const Bytes& body, std::string_view content_encoding) {
  const std::string encoding = lower(trim(content_encoding));
  if (encoding.empty() || encoding == "identity" || body.empty()) return body;
  if (encoding == "gzip" || encoding == "x-gzip") return inflate_with(body, 16 + MAX_WBITS);
  if (encoding == "deflate") {
    try {
      return inflate_with(body, MAX_WBITS);
    } catch (const std::runtime_error&) {
      return inflate_with(body, -MAX_WBITS);
    }
  }
  throw std::runtime_error("unsupported content encoding: " + encoding);
}

ExchangeOutcome handle_exchange(const HttpExchange& exchange, const ProxyConfig& config) {
  ExchangeOutcome outcome;
  const HttpRequest& request = exchange.request;
  const HttpResponse& response = exchange.response;

  std::vector<RequestParam> params = request.query;
  params.insert(params.end(), request.form.begin(), request.form.end());
  params.insert(params.end(), request.cookies.begin(), request.cookies.end());
  if (params.empty()) return outcome;

  const std::string type = media_type(find_header(response.headers, "Content-Type").value_or(""));
  if (std::find(config.analyzable_types.begin(), config.analyzable_types.end(), type) ==
      config.analyzable_types.end()) {
    return outcome;
  }

  const auto fault = [&](const std::string& reason) {
    outcome.action = config.fail_closed ? ProxyAction{ActionKind::Block, config.block_status} : ProxyAction{};
    outcome.log_lines.push_back(line(json{{"timestamp", timestamp()},
                                     {"url", request.target},
                                     {"fault", reason},
                                     {"action", action_label(outcome.action)}}));
    return outcome;
  };

  if (response.body.size() > config.max_body) {
    outcome.log_lines.push_back(line(json{{"timestamp", timestamp()},
                                     {"url", request.target},
                                     {"note", "body exceeds analysis limit; forwarded unanalyzed"},
                                     {"action", action_label(outcome.action)}}));
    return outcome;
  }

  DetectionReport report;
  try {
    const Bytes body = decode_body(response.body, find_header(response.headers, "Content-Encoding").value_or(""));
    report = analyze_exchange(params, body, ContentKind::HtmlDocument, config.reflection);
  } catch (const StepBudgetExceeded& e) {
    return fault(e.what());
  } catch (const std::runtime_error& e) {
    return fault(e.what());
  }

  if (report.verdict.malicious()) {
    outcome.action = config.mode == ProxyMode::Block ? ProxyAction{ActionKind::Block, config.block_status}
                                                     : ProxyAction{ActionKind::ForwardWithLog, 0};
    const TransitionEvent& event = *report.verdict.evidence;
    json span;
    for (const ParamReflection& r : report.reflections) {
      if (r.span.contains(event.index)) {
        span = json{{"start", r.span.start}, {"end", r.span.end}};
        break;
      }
    }
    json record{{"timestamp", timestamp()},
                {"url", request.target},
                {"param", report.evidence_param.value_or("")},
                {"span", span},
                {"event", event_json(event)},
                {"action", action_label(outcome.action)}};
    outcome.log_lines.push_back(line(record));
  }
  outcome.report = std::move(report);
  return outcome;
}

}  // namespace ctxaudit
