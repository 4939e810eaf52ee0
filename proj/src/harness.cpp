#include "ctxaudit/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ctxaudit/catalog.hpp"

namespace ctxaudit {
namespace {

using nlohmann::json;

constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

Decision parse_label(const std::string& text, const char* field) {
  if (text == "malicious") return Decision::Malicious;
  if (text == "benign") return Decision::Benign;
  throw std::invalid_argument(std::string(field) + " must be \"malicious\" or \"benign\"");
}

std::string glyph(char c) {
  switch (c) {
    case '\n':
      return "\\n";
    case '\t':
      return "\\t";
    case '\r':
      return "\\r";
    default:
      break;
  }
  const auto u = static_cast<unsigned char>(c);
  if (u < 0x20 || u >= 0x7f) {
    char buffer[8];
    std::snprintf(buffer, sizeof buffer, "\\x%02x", u);
    return buffer;
  }
  return std::string(1, c);
}

}  // namespace

Bytes base64_decode(std::string_view text) {
  Bytes out;
  std::uint32_t buffer = 0;
  int bits = 0;
  std::size_t padding = 0;
  for (char c : text) {
    if (c == '=') {
      ++padding;
      continue;
    }
    if (c == '\n' || c == '\r') continue;
    const std::size_t value = kAlphabet.find(c);
    if (value == std::string_view::npos || padding > 0) throw std::invalid_argument("invalid base64 input");
    buffer = (buffer << 6) | static_cast<std::uint32_t>(value);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((buffer >> bits) & 0xFF));
    }
  }
  if (padding > 2) throw std::invalid_argument("invalid base64 padding");
  return out;
}

std::string base64_encode(BytesView bytes) {
  std::string out;
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t n = (std::uint8_t(bytes[i]) << 16) | (std::uint8_t(bytes[i + 1]) << 8) | std::uint8_t(bytes[i + 2]);
    for (int shift : {18, 12, 6, 0}) out.push_back(kAlphabet[(n >> shift) & 0x3F]);
  }
  if (i < bytes.size()) {
    std::uint32_t n = std::uint8_t(bytes[i]) << 16;
    if (i + 1 < bytes.size()) n |= std::uint8_t(bytes[i + 1]) << 8;
    out.push_back(kAlphabet[(n >> 18) & 0x3F]);
    out.push_back(kAlphabet[(n >> 12) & 0x3F]);
    out.push_back(i + 1 < bytes.size() ? kAlphabet[(n >> 6) & 0x3F] : '=');
    out.push_back('=');
  }
  return out;
}

CorpusRecord parse_corpus_record(std::string_view json_line, std::size_t line) {
  const json doc = json::parse(json_line);
  if (!doc.is_object()) throw std::invalid_argument("record is not a JSON object");

  CorpusRecord record;
  record.line = line;
  record.id = doc.value("id", "line-" + std::to_string(line));
  record.malicious = parse_label(doc.at("label").get<std::string>(), "label") == Decision::Malicious;
  record.category = doc.at("category").get<std::string>();
  static const std::array<std::string_view, 4> kCategories = {"html", "js", "css", "shell"};
  if (std::find(kCategories.begin(), kCategories.end(), record.category) == kCategories.end()) {
    throw std::invalid_argument("unknown category \"" + record.category + "\"");
  }

  const auto kind = parse_content_kind(doc.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown kind");
  record.kind = *kind;

  const char* content_field = record.kind == ContentKind::ShellCommand ? "command_b64" : "response_body_b64";
  record.content = base64_decode(doc.at(content_field).get<std::string>());

  if (doc.contains("request_params")) {
    for (const auto& [name, value] : doc.at("request_params").items()) {
      record.params.push_back(RequestParam{name, value.get<std::string>(), std::nullopt});
    }
  }
  record.expected = record.malicious ? Decision::Malicious : Decision::Benign;
  if (doc.contains("expected") && !doc.at("expected").is_null()) {
    record.expected = parse_label(doc.at("expected").get<std::string>(), "expected");
  }
  return record;
}

CorpusLoad load_corpus(std::istream& in) {
  CorpusLoad load;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      load.records.push_back(parse_corpus_record(text, line));
    } catch (const std::exception& e) {
      load.errors.push_back(CorpusError{line, e.what()});
    }
  }
  return load;
}

RecordResult evaluate_record(const CorpusRecord& record, const ReflectionConfig& config) {
  RecordResult result;
  result.id = record.id;
  result.category = record.category;
  result.expected = record.expected;
  try {
    const DetectionReport report = analyze_exchange(record.params, record.content, record.kind, config);
    result.verdict = report.verdict.decision;
    result.evidence = report.verdict.evidence;
    result.evidence_param = report.evidence_param;
  } catch (const StepBudgetExceeded& e) {
    result.fault = true;
    result.fault_message = e.what();
  }
  return result;
}

CorpusMetrics run_corpus(std::span<const CorpusRecord> records, const ReflectionConfig& config, bool fail_fast) {
  CorpusMetrics metrics;
  for (const CorpusRecord& record : records) {
    RecordResult result = evaluate_record(record, config);
    CategoryMetrics& category = metrics.by_category[record.category];
    ++metrics.total;
    ++category.total;
    if (result.fault) ++metrics.faults;
    if (result.verdict == Decision::Malicious) {
      ++metrics.flagged;
      ++category.flagged;
    }
    if (!result.fault && result.expected == Decision::Malicious && result.verdict == Decision::Benign) {
      ++metrics.missed;
      ++category.missed;
    }
    if (!result.fault && result.expected == Decision::Benign && result.verdict == Decision::Malicious) {
      ++metrics.false_positives;
      ++category.false_positives;
    }
    const bool mismatch = !result.matches();
    metrics.results.push_back(std::move(result));
    if (fail_fast && mismatch) break;
  }
  return metrics;
}

std::string format_metrics(const CorpusMetrics& metrics) {
  std::ostringstream out;
  for (const RecordResult& r : metrics.results) {
    out << (r.matches() ? "ok   " : "FAIL ") << r.id << " expected=" << to_string(r.expected)
        << " verdict=" << to_string(r.verdict);
    if (r.evidence) {
      out << " at=" << r.evidence->index << " " << qualified_name(r.evidence->from) << "->"
          << qualified_name(r.evidence->to);
      if (r.evidence_param) out << " param=" << *r.evidence_param;
    }
    if (r.fault) out << " fault=\"" << r.fault_message << "\"";
    out << "\n";
  }
  for (const auto& [name, c] : metrics.by_category) {
    out << "category " << name << ": total=" << c.total << " flagged=" << c.flagged << " missed=" << c.missed
        << " false_positives=" << c.false_positives << "\n";
  }
  out << "total=" << metrics.total << " flagged=" << metrics.flagged << " missed=" << metrics.missed
      << " false_positives=" << metrics.false_positives << " faults=" << metrics.faults << "\n";
  return out.str();
}

std::string dump_trace(BytesView content, ContentKind kind) {
  const ParseTrace trace = run_automaton(content, spec_for(kind));
  std::ostringstream out;
  out << "offset\tbyte\tstate\tevents\n";
  auto event = trace.events.begin();
  for (std::size_t i = 0; i < trace.labels.size(); ++i) {
    out << i << "\t" << glyph(content[i]) << "\t" << qualified_name(trace.labels[i]) << "\t";
    bool first = true;
    for (; event != trace.events.end() && event->index == i; ++event) {
      out << (first ? "" : "; ") << qualified_name(event->from) << " -> " << qualified_name(event->to);
      if (event->is_error) out << " (error)";
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

Bytes make_bench_document(std::size_t size) {
  static constexpr std::string_view kHead = "<!doctype html><html><body>\n";
  static constexpr std::string_view kChunk =
      "<div class=\"item\" id='row'><p>Hello &amp; welcome, friend.</p>\n"
      "<script>var total = 0; for (var i = 0; i < 3; i++) { total += i * 2; }\n"
      "if (total > 1) { log(\"sum \" + total); }</script>\n"
      "<style>p.item { color: #333; margin: 0 auto; }</style></div>\n";
  static constexpr std::string_view kTail = "</p></body></html>\n";

  Bytes document;
  document.reserve(size);
  if (size < kHead.size() + kTail.size() + 3) return Bytes(size, 'a');
  document += kHead;
  while (document.size() + kChunk.size() + kTail.size() + 3 <= size) document += kChunk;
  document += "<p>";
  document.append(size - document.size() - kTail.size(), 'a');
  document += kTail;
  return document;
}

std::vector<BenchRow> bench(std::span<const std::size_t> sizes, double taint_fraction, int repeats) {
  using Clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (std::size_t size : sizes) {
    BenchRow row;
    row.size = size;
    if (size == 0) {
      rows.push_back(row);
      continue;
    }
    const Bytes document = make_bench_document(size);
    row.taint_end = std::clamp<std::size_t>(static_cast<std::size_t>(taint_fraction * double(size)), 1, size);
    const TaintedContent content(document, {ByteSpan{row.taint_end - 1, row.taint_end}}, ContentKind::HtmlDocument);

    row.seconds = row.full_seconds = 1e300;
    for (int r = 0; r < std::max(repeats, 1); ++r) {
      auto start = Clock::now();
      const TracedDetection detection = detect_traced(content);
      row.seconds = std::min(row.seconds, std::chrono::duration<double>(Clock::now() - start).count());
      row.steps = detection.trace.steps;

      start = Clock::now();
      const ParseTrace full = run_automaton(content.bytes(), spec_for(ContentKind::HtmlDocument));
      row.full_steps = full.steps;
      row.full_seconds = std::min(row.full_seconds, std::chrono::duration<double>(Clock::now() - start).count());
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ctxaudit
