#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ctxaudit/core.hpp"

namespace ctxaudit {

// One stack cell. `kind` is interpreted by the owning automaton except for
// the reserved values below; kind 0 doubles as "empty stack" when peeking.
struct StackSymbol {
  std::uint8_t kind = 0;
  std::uint8_t aux = 0;
  std::uint16_t value = 0;

  friend bool operator==(const StackSymbol&, const StackSymbol&) = default;
};

namespace stack_kind {
inline constexpr std::uint8_t kEmpty = 0;
// Base of an embedded-language region (script/style/rcdata); value is the
// region index into AutomatonSpec::regions().
inline constexpr std::uint8_t kRegion = 1;
// First kind available to automata.
inline constexpr std::uint8_t kUser = 8;
}  // namespace stack_kind

enum class StackOp : std::uint8_t {
  None,
  Push,
  Pop,
  Replace,          // overwrite the top symbol, keeping its recorded position
  UnwindToRegion,   // pop down to the innermost region base (or clear)
  Clear,
};

enum class HeadOp : std::uint8_t {
  Advance,    // label the byte with `next` and move right
  Revisit,    // re-consume the same byte in `next`
  Rewind,     // move back to where the top symbol was pushed, re-consume from there
  AsiAtMark,  // virtual semicolon at the top mark's position, then re-consume from it
  AsiHere,    // virtual semicolon before the current byte, then re-consume it
  Error,      // no transition defined: route to the language's Syntax_Error
};

struct Transition {
  StateId next = 0;
  HeadOp head = HeadOp::Advance;
  StackOp stack = StackOp::None;
  StackSymbol symbol{};
};

// Embedded-language region entered from an HTML start tag. While the stack
// base is this region, the bytes `</name` followed by a tag terminator end it.
struct Region {
  std::string element;  // lower-case tag name
  StateId entry = 0;    // first state inside the region
  // Labels for `<`, `/` and the tag name bytes of the closing tag.
  StateId lt_state = 0;
  StateId slash_state = 0;
  StateId name_state = 0;
  // Stack content after the closing tag name has been consumed.
  StackSymbol end_tag_symbol{};
};

// A (trigger token, target state) pair crossing a language boundary.
struct LanguageBridge {
  std::string trigger;
  StateId target = 0;
};

// A two-way pushdown automaton description. Implementations are immutable
// and shared across runs.
class AutomatonSpec {
 public:
  virtual ~AutomatonSpec() = default;

  virtual std::string_view name() const noexcept = 0;
  virtual StateId entry() const noexcept = 0;
  // Pure transition function over (state, stack top, byte).
  virtual Transition next(StateId state, StackSymbol top, std::uint8_t byte) const = 0;
  virtual std::span<const LanguageBridge> bridges() const noexcept = 0;
  virtual std::span<const Region> regions() const noexcept { return {}; }
  // Error sink for a language; nullopt if the language is not modelled.
  virtual std::optional<StateId> error_state(Language language) const noexcept = 0;
  // The end state for a virtual semicolon, if the spec models ASI.
  virtual std::optional<StateId> asi_state() const noexcept { return std::nullopt; }
  // True for symbols that mark a pending rewind target.
  virtual bool is_rewind_mark(StackSymbol /*symbol*/) const noexcept { return false; }
  // True if a virtual semicolon may not be inserted directly inside `symbol`.
  virtual bool forbids_asi(StackSymbol /*symbol*/) const noexcept { return false; }
  // Called once when the whole content has been consumed. Returning false
  // relabels the last byte as a syntax error.
  virtual bool accepts_end(StateId /*state*/, std::span<const StackSymbol> /*stack*/) const {
    return true;
  }
};

struct EngineOptions {
  // Total step budget is budget_factor * bytes parsed (the constant C).
  std::size_t budget_factor = 8;
  std::size_t max_stack_depth = 4096;
  // Visits of one offset beyond this force error recovery at that offset.
  std::size_t max_visits_per_byte = 16;
  // Keep consuming past stop_at until every rewind mark placed before it is
  // resolved, so that labels inside [0, stop_at) are final.
  bool settle = false;
};

ParseTrace run_automaton(BytesView content, const AutomatonSpec& spec,
                         std::optional<std::size_t> stop_at = std::nullopt,
                         const EngineOptions& options = {});

ContextState state_at(const ParseTrace& trace, std::size_t index);

// Events implied by a label sequence: every i >= 1 with labels[i-1] != labels[i],
// plus index 0 when the first byte already lands in an error state.
std::vector<TransitionEvent> label_events(std::span<const StateId> labels, StateId entry);

}  // namespace ctxaudit
