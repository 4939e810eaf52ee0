#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxaudit/detector.hpp"

namespace ctxaudit {

// One line of a corpus file:
// {"id", "label": "malicious"|"benign", "category": "html"|"js"|"css"|"shell",
//  "kind": "html"|"shell", "request_params": {name: value},
//  "response_body_b64" | "command_b64", "expected"?: "malicious"|"benign"}
struct CorpusRecord {
  std::string id;
  bool malicious = false;
  std::string category;
  ContentKind kind = ContentKind::HtmlDocument;
  std::vector<RequestParam> params;
  Bytes content;  // response body or command line
  Decision expected = Decision::Benign;
  std::size_t line = 0;
};

struct CorpusError {
  std::size_t line = 0;
  std::string message;
};

struct CorpusLoad {
  std::vector<CorpusRecord> records;
  std::vector<CorpusError> errors;
};

CorpusLoad load_corpus(std::istream& in);
CorpusRecord parse_corpus_record(std::string_view json_line, std::size_t line = 0);

struct RecordResult {
  std::string id;
  std::string category;
  Decision expected = Decision::Benign;
  Decision verdict = Decision::Benign;
  std::optional<TransitionEvent> evidence;
  std::optional<std::string> evidence_param;
  bool fault = false;  // engine fault outside taint
  std::string fault_message;

  bool matches() const noexcept { return !fault && expected == verdict; }
};

struct CategoryMetrics {
  std::size_t total = 0;
  std::size_t flagged = 0;
  std::size_t missed = 0;           // expected malicious, reported benign
  std::size_t false_positives = 0;  // expected benign, reported malicious
};

struct CorpusMetrics {
  std::size_t total = 0;
  std::size_t flagged = 0;
  std::size_t missed = 0;
  std::size_t false_positives = 0;
  std::size_t faults = 0;
  std::map<std::string, CategoryMetrics> by_category;
  std::vector<RecordResult> results;

  bool clean() const noexcept { return missed == 0 && false_positives == 0 && faults == 0; }
};

RecordResult evaluate_record(const CorpusRecord& record, const ReflectionConfig& config = {});

// Evaluates records in order; with fail_fast, stops after the first mismatch.
CorpusMetrics run_corpus(std::span<const CorpusRecord> records, const ReflectionConfig& config = {},
                         bool fail_fast = false);

std::string format_metrics(const CorpusMetrics& metrics);

// One line per byte: offset, glyph, state, and the events at that offset.
std::string dump_trace(BytesView content, ContentKind kind);

struct BenchRow {
  std::size_t size = 0;
  std::size_t taint_end = 0;
  std::size_t steps = 0;       // detect up to the taint
  std::size_t full_steps = 0;  // whole document
  double seconds = 0;       // best of the repeats, detect up to the taint
  double full_seconds = 0;  // best of the repeats, whole document
};

// A well-formed HTML document of exactly `size` bytes mixing markup, script
// and style.
Bytes make_bench_document(std::size_t size);

// Times detect with a one-byte taint ending at `taint_fraction` of each size.
std::vector<BenchRow> bench(std::span<const std::size_t> sizes, double taint_fraction, int repeats);

Bytes base64_decode(std::string_view text);
std::string base64_encode(BytesView bytes);

}  // namespace ctxaudit
