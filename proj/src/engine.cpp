#include "ctxaudit/engine.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "ctxaudit/catalog.hpp"

namespace ctxaudit {
namespace {

struct Frame {
  StackSymbol symbol;
  std::size_t position;  // offset of the byte being consumed when pushed
};

std::uint8_t lower(std::uint8_t c) { return (c >= 'A' && c <= 'Z') ? c + 32 : c; }

bool is_tag_terminator(std::uint8_t c) {
  return c == '\t' || c == '\n' || c == '\f' || c == '\r' || c == ' ' || c == '/' || c == '>';
}

// One run of the automaton. Owns every piece of mutable state.
class Run {
 public:
  Run(BytesView content, const AutomatonSpec& spec, std::size_t stop, const EngineOptions& options)
      : content_(content),
        spec_(spec),
        catalog_(StateCatalog::builtin()),
        options_(options),
        stop_(stop),
        limit_(stop),
        state_(spec.entry()),
        labels_(content.size(), 0),
        visits_(content.size(), 0) {
    if (!catalog_.contains(state_)) throw MalformedSpec("entry state is not registered");
    for (const LanguageBridge& bridge : spec.bridges()) {
      if (!catalog_.contains(bridge.target)) throw MalformedSpec("bridge target is not registered");
    }
    for (const Region& region : spec.regions()) {
      for (StateId id : {region.entry, region.lt_state, region.slash_state, region.name_state}) {
        if (!catalog_.contains(id)) throw MalformedSpec("region state is not registered");
      }
    }
  }

  ParseTrace execute() {
    while (true) {
      if (pos_ >= limit_) {
        if (!options_.settle || pos_ >= content_.size() || !pending_mark_before(stop_)) break;
        limit_ = content_.size();
      }
      step();
    }
    finish();
    return std::move(trace_);
  }

 private:
  void step() {
    if (++visits_[pos_] > options_.max_visits_per_byte) {
      force_error();
      return;
    }
    if (try_close_region()) return;

    const std::uint8_t byte = static_cast<std::uint8_t>(content_[pos_]);
    const StackSymbol top = stack_.empty() ? StackSymbol{} : stack_.back().symbol;
    const Transition t = spec_.next(state_, top, byte);
    count_step();
    if (!catalog_.contains(t.next)) {
      throw MalformedSpec("transition into unregistered state " + std::to_string(t.next));
    }

    switch (t.head) {
      case HeadOp::Error:
        force_error();
        return;
      case HeadOp::AsiAtMark:
        apply_asi_at_mark(t);
        return;
      case HeadOp::Rewind: {
        if (stack_.empty()) throw MalformedSpec("rewind with an empty stack");
        const std::size_t target = stack_.back().position;
        if (!apply_stack(t)) return;
        state_ = t.next;
        rewind_to(target);
        return;
      }
      case HeadOp::AsiHere:
        if (!apply_stack(t)) return;
        asi_events_.push_back(TransitionEvent{pos_, state_, require_asi_state(), false});
        state_ = t.next;
        return;
      case HeadOp::Revisit:
        if (!apply_stack(t)) return;
        state_ = t.next;
        return;
      case HeadOp::Advance:
        if (!apply_stack(t)) return;
        state_ = t.next;
        advance();
        return;
    }
  }

  // Ends an embedded region when `</element` plus a terminator starts here.
  bool try_close_region() {
    if (stack_.empty() || stack_.front().symbol.kind != stack_kind::kRegion) return false;
    if (content_[pos_] != '<') return false;
    const auto regions = spec_.regions();
    const std::size_t index = stack_.front().symbol.value;
    if (index >= regions.size()) throw MalformedSpec("region index out of range");
    const Region& region = regions[index];

    const std::size_t length = 2 + region.element.size();
    std::size_t matched = 1;
    bool ok = pos_ + length < content_.size() && content_[pos_ + 1] == '/';
    if (ok) ++matched;
    for (std::size_t i = 0; ok && i < region.element.size(); ++i) {
      ok = lower(static_cast<std::uint8_t>(content_[pos_ + 2 + i])) ==
           static_cast<std::uint8_t>(region.element[i]);
      if (ok) ++matched;
    }
    ok = ok && is_tag_terminator(static_cast<std::uint8_t>(content_[pos_ + length]));
    if (!ok) {
      // The peeked bytes are re-read by the regular transition.
      trace_.steps += matched - 1;
      return false;
    }

    stack_.clear();
    stack_.push_back(Frame{region.end_tag_symbol, pos_});
    for (std::size_t i = 0; i < length; ++i) {
      count_step();
      state_ = i == 0 ? region.lt_state : i == 1 ? region.slash_state : region.name_state;
      advance();
    }
    return true;
  }

  bool apply_stack(const Transition& t) {
    switch (t.stack) {
      case StackOp::None:
        break;
      case StackOp::Push:
        if (stack_.size() >= options_.max_stack_depth) {
          force_error();
          return false;
        }
        stack_.push_back(Frame{t.symbol, pos_});
        break;
      case StackOp::Pop:
        if (!stack_.empty()) stack_.pop_back();
        break;
      case StackOp::Replace:
        if (stack_.empty()) {
          stack_.push_back(Frame{t.symbol, pos_});
        } else {
          stack_.back().symbol = t.symbol;
        }
        break;
      case StackOp::UnwindToRegion:
        while (!stack_.empty() && stack_.back().symbol.kind != stack_kind::kRegion) stack_.pop_back();
        break;
      case StackOp::Clear:
        stack_.clear();
        break;
    }
    return true;
  }

  void apply_asi_at_mark(const Transition& t) {
    if (stack_.empty()) throw MalformedSpec("ASI without a mark");
    const Frame mark = stack_.back();
    stack_.pop_back();
    if (!stack_.empty() && spec_.forbids_asi(stack_.back().symbol)) {
      // Insertion not permitted here.
      force_error();
      return;
    }
    asi_events_.push_back(TransitionEvent{mark.position, labels_[mark.position], require_asi_state(), false});
    state_ = t.next;
    rewind_to(mark.position);
  }

  void rewind_to(std::size_t target) {
    std::erase_if(asi_events_, [&](const TransitionEvent& e) { return e.index > target; });
    pos_ = target;
  }

  void force_error() {
    const Language language = catalog_.at(state_).language;
    auto error = spec_.error_state(language);
    if (!error) throw MalformedSpec("no error state for language " + std::string(to_string(language)));
    state_ = *error;
    advance();
  }

  void advance() {
    labels_[pos_] = state_;
    ++pos_;
    high_water_ = std::max(high_water_, pos_);
  }

  void count_step() {
    ++trace_.steps;
    const std::size_t budget = options_.budget_factor * std::max<std::size_t>(limit_, 1);
    if (trace_.steps > budget) throw StepBudgetExceeded(pos_, state_, trace_.steps);
  }

  StateId require_asi_state() const {
    auto asi = spec_.asi_state();
    if (!asi) throw MalformedSpec("automaton does not model automatic semicolon insertion");
    return *asi;
  }

  bool pending_mark_before(std::size_t offset) const {
    return std::any_of(stack_.begin(), stack_.end(), [&](const Frame& f) {
      return f.position < offset && spec_.is_rewind_mark(f.symbol);
    });
  }

  void finish() {
    const std::size_t parsed = high_water_;
    labels_.resize(parsed);

    if (parsed == content_.size() && parsed > 0) {
      std::vector<StackSymbol> symbols;
      symbols.reserve(stack_.size());
      for (const Frame& f : stack_) symbols.push_back(f.symbol);
      if (!spec_.accepts_end(state_, symbols)) {
        const Language language = catalog_.at(labels_.back()).language;
        if (auto error = spec_.error_state(language)) labels_.back() = *error;
      }
    }

    trace_.settled = parsed;
    for (const Frame& f : stack_) {
      if (spec_.is_rewind_mark(f.symbol)) trace_.settled = std::min(trace_.settled, f.position);
    }

    std::vector<TransitionEvent> events = label_events(labels_, spec_.entry());
    std::erase_if(asi_events_, [&](const TransitionEvent& e) { return e.index >= parsed; });
    events.insert(events.end(), asi_events_.begin(), asi_events_.end());
    std::stable_sort(events.begin(), events.end(),
                     [](const TransitionEvent& a, const TransitionEvent& b) { return a.index < b.index; });
    trace_.labels = std::move(labels_);
    trace_.events = std::move(events);
  }

  BytesView content_;
  const AutomatonSpec& spec_;
  const StateCatalog& catalog_;
  EngineOptions options_;
  std::size_t stop_;
  std::size_t limit_;

  StateId state_;
  std::vector<Frame> stack_;
  std::size_t pos_ = 0;
  std::size_t high_water_ = 0;
  std::vector<StateId> labels_;
  std::vector<std::uint16_t> visits_;
  std::vector<TransitionEvent> asi_events_;
  ParseTrace trace_;
};

}  // namespace

ParseTrace run_automaton(BytesView content, const AutomatonSpec& spec, std::optional<std::size_t> stop_at,
                         const EngineOptions& options) {
  const std::size_t stop = stop_at.value_or(content.size());
  if (stop > content.size()) throw OutOfRange("stop_at beyond end of content");
  return Run(content, spec, stop, options).execute();
}

ContextState state_at(const ParseTrace& trace, std::size_t index) {
  if (index >= trace.labels.size()) {
    throw OutOfRange("index " + std::to_string(index) + " outside trace of " +
                     std::to_string(trace.labels.size()) + " bytes");
  }
  return describe(trace.labels[index]);
}

std::vector<TransitionEvent> label_events(std::span<const StateId> labels, StateId entry) {
  std::vector<TransitionEvent> events;
  if (labels.empty()) return events;
  if (describe(labels[0]).role == Role::Error) events.push_back(TransitionEvent{0, entry, labels[0], true});
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] != labels[i - 1]) {
      events.push_back(TransitionEvent{i, labels[i - 1], labels[i], describe(labels[i]).role == Role::Error});
    }
  }
  return events;
}

}  // namespace ctxaudit
