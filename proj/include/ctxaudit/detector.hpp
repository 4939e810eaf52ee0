#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxaudit/core.hpp"
#include "ctxaudit/engine.hpp"

namespace ctxaudit {

struct ReflectionConfig {
  std::size_t min_length = 3;
  std::size_t max_reflections_per_param = 5;

  // Throws std::invalid_argument when a field is zero.
  void validate() const;
};

// The automaton matching a content kind.
const AutomatonSpec& spec_for(ContentKind kind);

// Parses up to the last tainted byte and reports the first context switch or
// parse error inside a taint span. Empty taint is BENIGN without parsing.
Verdict detect(const TaintedContent& content);

struct TracedDetection {
  Verdict verdict;
  ParseTrace trace;  // empty when the detector did not parse
};
TracedDetection detect_traced(const TaintedContent& content, const EngineOptions& options = {});

// True when the event is a context switch caused by tainted bytes: its index
// lies in a span, except that entering a DATA state on the first byte of a
// span is the surrounding context opening a literal, not a switch.
bool is_tainted_switch(const TransitionEvent& event, std::span<const ByteSpan> taint);

// Verdict implied by a precomputed trace: the first tainted switch. Used to
// cross-check detect() against full parses.
Verdict verdict_from_trace(const ParseTrace& trace, std::span<const ByteSpan> taint);

// Verbatim matching: for every value of at least min_length bytes, its first
// max_reflections_per_param non-overlapping occurrences, merged across values.
std::vector<ByteSpan> find_reflections(std::span<const Bytes> values, BytesView body,
                                       const ReflectionConfig& config = {});

struct RequestParam {
  std::string name;
  Bytes value;                // decoded value
  std::optional<Bytes> raw;   // wire form, when it differs from the decoded value
};

struct ParamReflection {
  std::string param;
  ByteSpan span;
};

// Maps request inputs to their locations in the output.
class ReflectionFinder {
 public:
  virtual ~ReflectionFinder() = default;
  virtual std::vector<ParamReflection> find(std::span<const RequestParam> params, BytesView body,
                                            const ReflectionConfig& config) const = 0;
};

// Byte-exact matching of decoded and raw values. The minimum length is
// checked against the decoded value.
class ExactReflectionFinder final : public ReflectionFinder {
 public:
  std::vector<ParamReflection> find(std::span<const RequestParam> params, BytesView body,
                                    const ReflectionConfig& config) const override;
};

const ReflectionFinder& exact_reflection_finder();

struct DetectionReport {
  Verdict verdict;
  bool analyzed = false;                     // false when nothing was reflected
  std::vector<ByteSpan> taint;               // merged spans handed to detect
  std::vector<ParamReflection> reflections;  // per-parameter spans before merging
  std::vector<TransitionEvent> tainted_events;
  std::optional<std::string> evidence_param;
  ReflectionConfig config;
  std::chrono::nanoseconds elapsed{0};
};

DetectionReport analyze_exchange(std::span<const RequestParam> params, BytesView body, ContentKind kind,
                                 const ReflectionConfig& config = {},
                                 const ReflectionFinder& finder = exact_reflection_finder());

// Merges possibly overlapping spans into sorted disjoint spans.
std::vector<ByteSpan> merge_spans(std::vector<ByteSpan> spans);

// Decodes %XX escapes once and maps '+' to a space. Malformed escapes are
// kept verbatim.
Bytes percent_decode(BytesView text);

}  // namespace ctxaudit
