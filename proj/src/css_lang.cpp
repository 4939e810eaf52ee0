#include "web_spec.hpp"

namespace ctxaudit::detail {

using namespace web_kind;

namespace {

constexpr std::uint8_t kDoubleQuote = 1;
constexpr std::uint8_t kSingleQuote = 2;
constexpr std::uint8_t kNoMatch = 0xFF;
constexpr std::string_view kUrl = "url";

bool is_ident_char(std::uint8_t c) { return is_alpha(c) || is_digit(c) || c == '-' || c == '_' || c >= 0x80; }

std::uint8_t url_progress(std::uint8_t matched, std::uint8_t c) {
  if (matched == kNoMatch || matched >= kUrl.size()) return kNoMatch;
  if (c >= 'A' && c <= 'Z') c = static_cast<std::uint8_t>(c + 32);
  return c == static_cast<std::uint8_t>(kUrl[matched]) ? static_cast<std::uint8_t>(matched + 1) : kNoMatch;
}

}  // namespace

Transition WebSpec::css(C state, StackSymbol top, std::uint8_t c) const {
  // Strings, comments and escapes return to the state recorded on the stack.
  const auto open_string = [&](C from) {
    const std::uint8_t quote = c == '"' ? kDoubleQuote : kSingleQuote;
    return push(c_(quote == kDoubleQuote ? C::StringDq : C::StringSq),
                StackSymbol{kCssReturn, quote, c_(from)});
  };
  const auto open_slash = [&](C from) { return push(c_(C::Slash), StackSymbol{kCssReturn, 0, c_(from)}); };
  const auto close_brace = [&]() {
    if (top.kind == kCssBlock || top.kind == kCssAtBlock) return pop(c_(C::Start));
    return error_at(c_(state));
  };

  switch (state) {
    case C::Start:
      if (is_space(c)) return advance(c_(C::Start));
      if (c == '@') return advance(c_(C::AtRule));
      if (c == '}') return top.kind == kCssAtBlock ? pop(c_(C::Start)) : error_at(c_(state));
      if (c == '/') return open_slash(C::Start);
      if (c == '{') return push(c_(C::DeclBlock), StackSymbol{kCssBlock, 0, 0});
      if (c == ';') return error_at(c_(state));
      if (c == '"' || c == '\'') return open_string(C::Selector);
      return advance(c_(C::Selector));

    case C::Selector:
      if (c == '{') return push(c_(C::DeclBlock), StackSymbol{kCssBlock, 0, 0});
      if (c == '"' || c == '\'') return open_string(C::Selector);
      if (c == '/') return open_slash(C::Selector);
      if (c == '}' || c == ';') return error_at(c_(state));
      return advance(c_(C::Selector));

    case C::DeclBlock:
      if (is_space(c) || c == ';') return advance(c_(C::DeclBlock));
      if (c == '}') return close_brace();
      if (c == '/') return open_slash(C::DeclBlock);
      if (c == ':' || c == '{') return error_at(c_(state));
      return advance(c_(C::PropName));

    case C::PropName:
      if (c == ':') return advance(c_(C::PropValue));
      if (c == ';') return advance(c_(C::DeclBlock));
      if (c == '}') return close_brace();
      if (c == '/') return open_slash(C::PropName);
      if (c == '{') return error_at(c_(state));
      return advance(c_(C::PropName));

    case C::PropValue:
      if (top.kind == kCssIdent) {
        if (is_ident_char(c)) return replace(c_(C::PropValue), StackSymbol{kCssIdent, url_progress(top.aux, c), 0});
        if (c == '(' && top.aux == kUrl.size()) return replace(c_(C::Url), StackSymbol{kCssUrl, 0, 0});
        return pop(c_(C::PropValue), HeadOp::Revisit);
      }
      if (is_ident_char(c)) return push(c_(C::PropValue), StackSymbol{kCssIdent, url_progress(0, c), 0});
      if (c == '"' || c == '\'') return open_string(C::PropValue);
      if (c == '/') return open_slash(C::PropValue);
      if (c == '(') return push(c_(C::PropValue), StackSymbol{kCssParen, 0, 0});
      if (c == ')') return top.kind == kCssParen ? pop(c_(C::PropValue)) : error_at(c_(state));
      if (c == ';') return top.kind == kCssBlock ? advance(c_(C::DeclBlock)) : error_at(c_(state));
      if (c == '}') return top.kind == kCssBlock ? pop(c_(C::Start)) : error_at(c_(state));
      if (c == '{') return error_at(c_(state));
      return advance(c_(C::PropValue));

    case C::Url:
      if (c == ')') return pop(c_(C::PropValue));
      if (c == '"' || c == '\'') return open_string(C::Url);
      return advance(c_(C::Url));

    case C::StringDq:
    case C::StringSq: {
      const std::uint8_t quote = state == C::StringDq ? '"' : '\'';
      if (c == quote) return pop(top.value);
      if (c == '\\') return advance(c_(C::StringEscape));
      if (c == '\n') return error_at(c_(state));
      return advance(c_(state));
    }

    case C::StringEscape:
      return advance(c_(top.aux == kSingleQuote ? C::StringSq : C::StringDq));

    case C::Slash:
      if (c == '*') return advance(c_(C::Comment));
      return pop(top.value, HeadOp::Revisit);

    case C::Comment:
      return advance(c_(c == '*' ? C::CommentStar : C::Comment));
    case C::CommentStar:
      if (c == '/') return pop(top.value);
      return advance(c_(c == '*' ? C::CommentStar : C::Comment));

    case C::AtRule:
      if (c == '{') return push(c_(C::Start), StackSymbol{kCssAtBlock, 0, 0});
      if (c == ';') return advance(c_(C::Start));
      if (c == '"' || c == '\'') return open_string(C::AtRule);
      if (c == '}') return error_at(c_(state));
      return advance(c_(C::AtRule));

    case C::Error:
      if (c == '}') return Transition{c_(C::Start), HeadOp::Advance, StackOp::UnwindToRegion, {}};
      return advance(c_(C::Error));
  }
  return error_at(c_(state));
}

}  // namespace ctxaudit::detail
