#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctxaudit {

using Bytes = std::string;
using BytesView = std::string_view;

// Half-open byte range [start, end) into some content buffer.
struct ByteSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  bool contains(std::size_t index) const noexcept { return index >= start && index < end; }
  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

enum class ContentKind : std::uint8_t { HtmlDocument, ShellCommand };

std::string_view to_string(ContentKind kind) noexcept;
std::optional<ContentKind> parse_content_kind(std::string_view text) noexcept;

// Output bytes plus the untrusted spans inside them.
class TaintedContent {
 public:
  // Throws std::invalid_argument unless spans are non-empty, sorted,
  // pairwise disjoint and inside `bytes`.
  TaintedContent(Bytes bytes, std::vector<ByteSpan> taint, ContentKind kind);

  BytesView bytes() const noexcept { return bytes_; }
  std::span<const ByteSpan> taint() const noexcept { return taint_; }
  ContentKind kind() const noexcept { return kind_; }

  bool is_tainted(std::size_t index) const noexcept;
  // End offset of the last span, or 0 when there is no taint.
  std::size_t taint_end() const noexcept;

 private:
  Bytes bytes_;
  std::vector<ByteSpan> taint_;
  ContentKind kind_;
};

void validate_spans(std::span<const ByteSpan> spans, std::size_t content_size);

enum class Language : std::uint8_t { Html, Css, Js, Shell };
enum class Role : std::uint8_t { Data, Delimiter, Code, Error };

std::string_view to_string(Language language) noexcept;
std::string_view to_string(Role role) noexcept;

// Index into the state catalog.
using StateId = std::uint16_t;

struct ContextState {
  StateId id = 0;
  Language language = Language::Html;
  std::string name;
  Role role = Role::Data;
};

struct TransitionEvent {
  std::size_t index = 0;
  StateId from = 0;
  StateId to = 0;
  bool is_error = false;

  friend bool operator==(const TransitionEvent&, const TransitionEvent&) = default;
};

struct ParseTrace {
  std::vector<StateId> labels;
  std::vector<TransitionEvent> events;
  std::size_t steps = 0;
  // Labels before this offset can no longer be changed by a rewind.
  std::size_t settled = 0;
};

enum class Decision : std::uint8_t { Benign, Malicious };

std::string_view to_string(Decision decision) noexcept;

struct Verdict {
  Decision decision = Decision::Benign;
  std::optional<TransitionEvent> evidence;
  std::size_t bytes_parsed = 0;

  bool malicious() const noexcept { return decision == Decision::Malicious; }
};

class StepBudgetExceeded : public std::runtime_error {
 public:
  StepBudgetExceeded(std::size_t position, StateId state, std::size_t steps);

  std::size_t position() const noexcept { return position_; }
  StateId state() const noexcept { return state_; }
  std::size_t steps() const noexcept { return steps_; }

 private:
  std::size_t position_;
  StateId state_;
  std::size_t steps_;
};

class MalformedSpec : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace ctxaudit
