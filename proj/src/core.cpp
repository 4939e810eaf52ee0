#include "ctxaudit/core.hpp"

#include <algorithm>
#include <string>

namespace ctxaudit {

std::string_view to_string(ContentKind kind) noexcept {
  switch (kind) {
    case ContentKind::HtmlDocument: return "html-document";
    case ContentKind::ShellCommand: return "shell-command";
  }
  return "unknown";
}

std::optional<ContentKind> parse_content_kind(std::string_view text) noexcept {
  if (text == "html-document" || text == "html") return ContentKind::HtmlDocument;
  if (text == "shell-command" || text == "shell") return ContentKind::ShellCommand;
  return std::nullopt;
}

std::string_view to_string(Language language) noexcept {
  switch (language) {
    case Language::Html: return "HTML";
    case Language::Css: return "CSS";
    case Language::Js: return "JS";
    case Language::Shell: return "SHELL";
  }
  return "?";
}

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Data: return "DATA";
    case Role::Delimiter: return "DELIMITER";
    case Role::Code: return "CODE";
    case Role::Error: return "ERROR";
  }
  return "?";
}

std::string_view to_string(Decision decision) noexcept {
  return decision == Decision::Malicious ? "MALICIOUS" : "BENIGN";
}

void validate_spans(std::span<const ByteSpan> spans, std::size_t content_size) {
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const ByteSpan& span = spans[i];
    if (span.start >= span.end) {
      throw std::invalid_argument("taint span " + std::to_string(i) + " is empty or inverted");
    }
    if (span.end > content_size) {
      throw std::invalid_argument("taint span " + std::to_string(i) + " exceeds content");
    }
    if (i > 0 && span.start < previous_end) {
      throw std::invalid_argument("taint spans must be sorted and disjoint");
    }
    previous_end = span.end;
  }
}

TaintedContent::TaintedContent(Bytes bytes, std::vector<ByteSpan> taint, ContentKind kind)
    : bytes_(std::move(bytes)), taint_(std::move(taint)), kind_(kind) {
  validate_spans(taint_, bytes_.size());
}

bool TaintedContent::is_tainted(std::size_t index) const noexcept {
  auto it = std::upper_bound(taint_.begin(), taint_.end(), index,
                             [](std::size_t i, const ByteSpan& s) { return i < s.start; });
  return it != taint_.begin() && std::prev(it)->contains(index);
}

std::size_t TaintedContent::taint_end() const noexcept {
  return taint_.empty() ? 0 : taint_.back().end;
}

StepBudgetExceeded::StepBudgetExceeded(std::size_t position, StateId state, std::size_t steps)
    : std::runtime_error("step budget exceeded at byte " + std::to_string(position) + " after " +
                         std::to_string(steps) + " steps"),
      position_(position),
      state_(state),
      steps_(steps) {}

}  // namespace ctxaudit
