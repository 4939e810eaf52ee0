#include "ctxaudit/shell_lang.hpp"

#include <algorithm>

#include "automaton_util.hpp"

namespace ctxaudit {
namespace detail {
namespace {

enum class S : std::uint8_t {
  Start, CommandWord, Blank, Argument, SingleQuoted, DoubleQuoted, Escape, DqEscape, Dollar, Variable,
  ParamExpansion, SubstOpen, BacktickOpen, Arithmetic, Array, GroupOpen, GroupClose, Redirection,
  ControlOperator, Comment, Error,
};
constexpr std::array<std::string_view, 21> kShellNames = {
    "SH_Start", "SH_Command_Word", "SH_Blank", "SH_Argument", "SH_Single_Quoted", "SH_Double_Quoted",
    "SH_Escape", "SH_Dq_Escape", "SH_Dollar", "SH_Variable", "SH_Param_Expansion", "SH_Command_Subst_Open",
    "SH_Backtick_Open", "SH_Arithmetic", "SH_Array", "SH_Group_Open", "SH_Group_Close", "SH_Redirection",
    "SH_Control_Operator", "SH_Comment", "Syntax_Error",
};

// A construct that resumes a recorded state when it closes.
constexpr std::uint8_t kReturn = stack_kind::kUser + 0;  // aux: Construct, value: return state
constexpr std::uint8_t kSubshell = stack_kind::kUser + 1;
constexpr std::uint8_t kBraceGroup = stack_kind::kUser + 2;
constexpr std::uint8_t kArray = stack_kind::kUser + 3;
constexpr std::uint8_t kArithParen = stack_kind::kUser + 4;

enum class Construct : std::uint8_t {
  SingleQuote, DoubleQuote, Escape, DqEscape, Dollar, Variable, SpecialVariable, Param, Subst, Backtick,
  Arith, ArithClosing,
};

bool is_blank(std::uint8_t c) { return c == ' ' || c == '\t'; }
bool is_name_start(std::uint8_t c) { return is_alpha(c) || c == '_'; }
bool is_name_char(std::uint8_t c) { return is_name_start(c) || is_digit(c); }
bool is_special_param(std::uint8_t c) {
  return is_digit(c) || c == '@' || c == '*' || c == '#' || c == '?' || c == '$' || c == '!' || c == '-';
}
bool is_word_char(std::uint8_t c) {
  switch (c) {
    case ' ': case '\t': case '\n': case ';': case '&': case '|': case '<': case '>': case '(': case ')':
    case '\'': case '"': case '\\': case '$': case '`':
      return false;
    default:
      return true;
  }
}

StackSymbol returning(Construct construct, StateId state) {
  return StackSymbol{kReturn, static_cast<std::uint8_t>(construct), state};
}
bool is_construct(StackSymbol top, Construct construct) {
  return top.kind == kReturn && top.aux == static_cast<std::uint8_t>(construct);
}

class ShellSpec final : public AutomatonSpec {
 public:
  ShellSpec() : s_(Language::Shell, kShellNames) {
    bridges_ = {{"$(", s_(S::SubstOpen)}, {"`", s_(S::BacktickOpen)}, {"$((", s_(S::Arithmetic)}};
  }

  std::string_view name() const noexcept override { return "shell"; }
  StateId entry() const noexcept override { return s_(S::Start); }
  std::span<const LanguageBridge> bridges() const noexcept override { return bridges_; }
  std::optional<StateId> error_state(Language language) const noexcept override {
    if (language == Language::Shell) return s_(S::Error);
    return std::nullopt;
  }

  bool accepts_end(StateId state, std::span<const StackSymbol> stack) const override {
    if (state == s_(S::Redirection) || state == s_(S::Error)) return false;
    return std::all_of(stack.begin(), stack.end(), [](StackSymbol symbol) {
      return is_construct(symbol, Construct::Dollar) || is_construct(symbol, Construct::Variable) ||
             is_construct(symbol, Construct::SpecialVariable);
    });
  }

  Transition next(StateId id, StackSymbol top, std::uint8_t c) const override {
    const auto state = s_.local(id);
    if (!state) throw MalformedSpec("state " + std::to_string(id) + " is not part of the shell automaton");
    switch (*state) {
      case S::Start:
      case S::ControlOperator:
      case S::SubstOpen:
      case S::BacktickOpen:
      case S::GroupOpen:
        return command_position(*state, top, c);
      case S::CommandWord:
      case S::Argument:
        return in_word(*state, top, c);
      case S::Blank:
      case S::GroupClose:
      case S::Redirection:
        return between_words(*state, top, c);
      case S::SingleQuoted:
        if (c == '\'') return pop(top.value);
        return advance(s_(S::SingleQuoted));
      case S::DoubleQuoted:
        if (c == '"') return pop(top.value);
        if (c == '\\') return push(s_(S::DqEscape), returning(Construct::DqEscape, s_(S::DoubleQuoted)));
        if (c == '$') return push(s_(S::Dollar), returning(Construct::Dollar, s_(S::DoubleQuoted)));
        if (c == '`') return push(s_(S::BacktickOpen), returning(Construct::Backtick, s_(S::DoubleQuoted)));
        return advance(s_(S::DoubleQuoted));
      case S::Escape:
      case S::DqEscape:
        return pop(top.value);
      case S::Dollar:
        return dollar(top, c);
      case S::Variable:
        if (is_construct(top, Construct::Variable) && is_name_char(c)) return advance(s_(S::Variable));
        return pop(top.value, HeadOp::Revisit);
      case S::ParamExpansion:
        if (c == '}') return pop(top.value);
        return advance(s_(S::ParamExpansion));
      case S::Arithmetic:
        return arithmetic(top, c);
      case S::Array:
        if (c == ')') return pop(s_(S::Argument));
        return advance(s_(S::Array));
      case S::Comment:
        if (c == '\n') return advance(s_(S::ControlOperator));
        return advance(s_(S::Comment));
      case S::Error:
        if (c == ';' || c == '\n') return Transition{s_(S::ControlOperator), HeadOp::Advance, StackOp::Clear, {}};
        return advance(s_(S::Error));
    }
    return error_at(id);
  }

 private:
  // Expansion and quoting shared by every word-building state.
  std::optional<Transition> word_construct(StateId word_state, StackSymbol top, std::uint8_t c) const {
    switch (c) {
      case '\'':
        return push(s_(S::SingleQuoted), returning(Construct::SingleQuote, word_state));
      case '"':
        return push(s_(S::DoubleQuoted), returning(Construct::DoubleQuote, word_state));
      case '\\':
        return push(s_(S::Escape), returning(Construct::Escape, word_state));
      case '$':
        return push(s_(S::Dollar), returning(Construct::Dollar, word_state));
      case '`':
        if (is_construct(top, Construct::Backtick)) return pop(top.value);
        return push(s_(S::BacktickOpen), returning(Construct::Backtick, word_state));
      default:
        return std::nullopt;
    }
  }

  // Operators that may follow any complete word.
  std::optional<Transition> operator_after_word(S state, StackSymbol top, std::uint8_t c) const {
    switch (c) {
      case ';':
      case '&':
      case '|':
      case '\n':
        return advance(s_(S::ControlOperator));
      case '<':
      case '>':
        return advance(s_(S::Redirection));
      case ')':
        if (is_construct(top, Construct::Subst)) return pop(top.value);
        if (top.kind == kSubshell) return pop(s_(S::GroupClose));
        return error_at(s_(state));
      default:
        return std::nullopt;
    }
  }

  Transition command_position(S state, StackSymbol top, std::uint8_t c) const {
    if (is_blank(c) || c == '\n') return advance(s_(state));
    if (auto t = word_construct(s_(S::CommandWord), top, c)) return *t;
    switch (c) {
      case '(':
        if (state == S::SubstOpen && is_construct(top, Construct::Subst)) {
          return replace(s_(S::Arithmetic), returning(Construct::Arith, top.value));
        }
        return push(s_(S::GroupOpen), StackSymbol{kSubshell, 0, 0});
      case '{':
        return push(s_(S::GroupOpen), StackSymbol{kBraceGroup, 0, 0});
      case '}':
        if (top.kind == kBraceGroup) return pop(s_(S::GroupClose));
        return advance(s_(S::CommandWord));
      case ')':
        if (is_construct(top, Construct::Subst)) return pop(top.value);
        if (top.kind == kSubshell) return pop(s_(S::GroupClose));
        return error_at(s_(state));
      case '!':
        return advance(s_(S::ControlOperator));
      case '#':
        return advance(s_(S::Comment));
      case '<':
      case '>':
        return advance(s_(S::Redirection));
      case ';':
      case '&':
      case '|':
        if (state == S::ControlOperator && c != ';') return advance(s_(S::ControlOperator));
        return error_at(s_(state));
      default:
        return advance(s_(S::CommandWord));
    }
  }

  Transition in_word(S state, StackSymbol top, std::uint8_t c) const {
    if (is_word_char(c)) return advance(s_(state));
    if (is_blank(c)) return advance(s_(S::Blank));
    if (auto t = word_construct(s_(state), top, c)) return *t;
    if (c == '(') {
      if (state == S::CommandWord) return push(s_(S::Array), StackSymbol{kArray, 0, 0});
      return error_at(s_(state));
    }
    if (auto t = operator_after_word(state, top, c)) return *t;
    return error_at(s_(state));
  }

  Transition between_words(S state, StackSymbol top, std::uint8_t c) const {
    if (is_blank(c)) return advance(s_(state == S::GroupClose ? S::Blank : state));
    if (state == S::Redirection && (c == '>' || c == '<' || c == '&' || c == '|')) return advance(s_(state));
    if (state == S::Redirection && c == '(') return push(s_(S::SubstOpen), returning(Construct::Subst, s_(S::Argument)));
    if (state == S::Blank && c == '#') return advance(s_(S::Comment));
    if (auto t = operator_after_word(state, top, c)) return *t;
    if (state == S::GroupClose || c == '(') return error_at(s_(state));
    if (auto t = word_construct(s_(S::Argument), top, c)) return *t;
    return advance(s_(S::Argument));
  }

  Transition dollar(StackSymbol top, std::uint8_t c) const {
    const StateId ret = top.value;
    if (c == '(') return replace(s_(S::SubstOpen), returning(Construct::Subst, ret));
    if (c == '{') return replace(s_(S::ParamExpansion), returning(Construct::Param, ret));
    if (is_name_start(c)) return replace(s_(S::Variable), returning(Construct::Variable, ret));
    if (is_special_param(c)) return replace(s_(S::Variable), returning(Construct::SpecialVariable, ret));
    // A lone `$` is literal.
    return pop(ret, HeadOp::Revisit);
  }

  Transition arithmetic(StackSymbol top, std::uint8_t c) const {
    if (is_construct(top, Construct::ArithClosing)) {
      if (c == ')') return pop(top.value);
      return error_at(s_(S::Arithmetic));
    }
    if (c == '(') return push(s_(S::Arithmetic), StackSymbol{kArithParen, 0, 0});
    if (c == ')') {
      if (top.kind == kArithParen) return pop(s_(S::Arithmetic));
      return replace(s_(S::Arithmetic), returning(Construct::ArithClosing, top.value));
    }
    return advance(s_(S::Arithmetic));
  }

  StateBinding<S, kShellNames.size()> s_;
  std::vector<LanguageBridge> bridges_;
};

}  // namespace
}  // namespace detail

const AutomatonSpec& shell_spec() {
  static const detail::ShellSpec spec;
  return spec;
}

}  // namespace ctxaudit
