#include "ctxaudit/detector.hpp"

#include <algorithm>
#include <stdexcept>

#include "ctxaudit/catalog.hpp"
#include "ctxaudit/shell_lang.hpp"
#include "ctxaudit/web_langs.hpp"

namespace ctxaudit {
namespace {

const ByteSpan* span_at(std::span<const ByteSpan> spans, std::size_t index) {
  auto it = std::upper_bound(spans.begin(), spans.end(), index,
                             [](std::size_t i, const ByteSpan& s) { return i < s.end; });
  return it != spans.end() && it->contains(index) ? &*it : nullptr;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

void ReflectionConfig::validate() const {
  if (min_length < 1) throw std::invalid_argument("min_length must be at least 1");
  if (max_reflections_per_param < 1) throw std::invalid_argument("max_reflections_per_param must be at least 1");
}

const AutomatonSpec& spec_for(ContentKind kind) {
  return kind == ContentKind::ShellCommand ? shell_spec() : html_spec();
}

bool is_tainted_switch(const TransitionEvent& event, std::span<const ByteSpan> taint) {
  const ByteSpan* span = span_at(taint, event.index);
  if (!span) return false;
  if (event.index == span->start && !event.is_error && describe(event.to).role == Role::Data) return false;
  return true;
}

Verdict verdict_from_trace(const ParseTrace& trace, std::span<const ByteSpan> taint) {
  Verdict verdict;
  verdict.bytes_parsed = trace.labels.size();
  for (const TransitionEvent& event : trace.events) {
    if (is_tainted_switch(event, taint)) {
      verdict.decision = Decision::Malicious;
      verdict.evidence = event;
      break;
    }
  }
  return verdict;
}

TracedDetection detect_traced(const TaintedContent& content, const EngineOptions& options) {
  TracedDetection result;
  if (content.taint().empty()) return result;

  const AutomatonSpec& spec = spec_for(content.kind());
  EngineOptions run_options = options;
  run_options.settle = true;
  try {
    result.trace = run_automaton(content.bytes(), spec, content.taint_end(), run_options);
  } catch (const StepBudgetExceeded& e) {
    if (!content.is_tainted(e.position())) throw;
    const StateId error = spec.error_state(describe(e.state()).language).value_or(e.state());
    result.verdict.decision = Decision::Malicious;
    result.verdict.evidence = TransitionEvent{e.position(), e.state(), error, true};
    result.verdict.bytes_parsed = e.position();
    return result;
  }
  result.verdict = verdict_from_trace(result.trace, content.taint());
  return result;
}

Verdict detect(const TaintedContent& content) { return detect_traced(content).verdict; }

std::vector<ByteSpan> merge_spans(std::vector<ByteSpan> spans) {
  std::sort(spans.begin(), spans.end(),
            [](const ByteSpan& a, const ByteSpan& b) { return a.start < b.start || (a.start == b.start && a.end < b.end); });
  std::vector<ByteSpan> merged;
  for (const ByteSpan& span : spans) {
    if (span.size() == 0) continue;
    if (!merged.empty() && span.start < merged.back().end) {
      merged.back().end = std::max(merged.back().end, span.end);
    } else {
      merged.push_back(span);
    }
  }
  return merged;
}

namespace {

void collect_occurrences(BytesView value, BytesView body, std::size_t cap, std::vector<ByteSpan>& out) {
  std::size_t found = 0;
  std::size_t from = 0;
  while (found < cap) {
    const std::size_t at = body.find(value, from);
    if (at == BytesView::npos) break;
    out.push_back(ByteSpan{at, at + value.size()});
    ++found;
    from = at + value.size();
  }
}

}  // namespace

std::vector<ByteSpan> find_reflections(std::span<const Bytes> values, BytesView body, const ReflectionConfig& config) {
  config.validate();
  std::vector<ByteSpan> spans;
  for (const Bytes& value : values) {
    if (value.size() < config.min_length) continue;
    collect_occurrences(value, body, config.max_reflections_per_param, spans);
  }
  return merge_spans(std::move(spans));
}

std::vector<ParamReflection> ExactReflectionFinder::find(std::span<const RequestParam> params, BytesView body,
                                                         const ReflectionConfig& config) const {
  config.validate();
  std::vector<ParamReflection> found;
  for (const RequestParam& param : params) {
    if (param.value.size() < config.min_length) continue;
    std::vector<ByteSpan> spans;
    collect_occurrences(param.value, body, config.max_reflections_per_param, spans);
    if (param.raw && *param.raw != param.value) {
      collect_occurrences(*param.raw, body, config.max_reflections_per_param, spans);
    }
    for (const ByteSpan& span : spans) found.push_back(ParamReflection{param.name, span});
  }
  return found;
}

const ReflectionFinder& exact_reflection_finder() {
  static const ExactReflectionFinder finder;
  return finder;
}

DetectionReport analyze_exchange(std::span<const RequestParam> params, BytesView body, ContentKind kind,
                                 const ReflectionConfig& config, const ReflectionFinder& finder) {
  const auto started = std::chrono::steady_clock::now();
  DetectionReport report;
  report.config = config;
  report.reflections = finder.find(params, body, config);

  std::vector<ByteSpan> spans;
  spans.reserve(report.reflections.size());
  for (const ParamReflection& r : report.reflections) spans.push_back(r.span);
  report.taint = merge_spans(std::move(spans));

  if (!report.taint.empty()) {
    report.analyzed = true;
    TaintedContent content(Bytes(body), report.taint, kind);
    TracedDetection detection = detect_traced(content);
    report.verdict = detection.verdict;
    for (const TransitionEvent& event : detection.trace.events) {
      if (is_tainted_switch(event, report.taint)) report.tainted_events.push_back(event);
    }
    if (report.verdict.evidence) {
      const std::size_t index = report.verdict.evidence->index;
      for (const ParamReflection& r : report.reflections) {
        if (r.span.contains(index)) {
          report.evidence_param = r.param;
          break;
        }
      }
    }
  }
  report.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started);
  return report;
}

Bytes percent_decode(BytesView text) {
  Bytes out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '+') {
      out.push_back(' ');
    } else if (c == '%' && i + 2 < text.size() && hex_value(text[i + 1]) >= 0 && hex_value(text[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(text[i + 1]) * 16 + hex_value(text[i + 2])));
      i += 2;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace ctxaudit
