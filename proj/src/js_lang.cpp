#include "web_spec.hpp"

namespace ctxaudit::detail {

using namespace web_kind;

namespace {

bool is_ident_start(std::uint8_t c) { return is_alpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool is_ident_part(std::uint8_t c) { return is_ident_start(c) || is_digit(c); }

// Tokens that cannot continue the expression before a line break, so a
// virtual semicolon goes at the break.
bool is_offending(std::uint8_t c) {
  return is_ident_start(c) || is_digit(c) || c == '"' || c == '\'' || c == '{' || c == '}' || c == '!' ||
         c == '~' || c == '@' || c == '#';
}

bool semicolon_forbidden(StackSymbol top) {
  return top.kind == kParen || top.kind == kBracket || top.kind == kCondParen;
}

}  // namespace

Transition WebSpec::js_slash(J state, SlashMeaning meaning) const {
  return push(j_(J::Slash), StackSymbol{kSlash, static_cast<std::uint8_t>(meaning), j_(state)});
}

Transition WebSpec::js_close(J state, StackSymbol top, std::uint8_t c) const {
  if (c == ')') {
    if (top.kind == kParen) return pop(j_(J::ExprEnd));
    if (top.kind == kCondParen || top.kind == kForParen) return pop(j_(J::ControlClose));
  } else if (c == ']') {
    if (top.kind == kBracket) return pop(j_(J::ExprEnd));
  } else if (c == '}') {
    if (top.kind == kBrace) return pop(j_(J::BlockClose));
    if (top.kind == kTemplateBrace) return pop(j_(J::Template));
  }
  return error_at(j_(state));
}

// States where an operand (or a statement) is expected next.
Transition WebSpec::js_operand(J state, StackSymbol top, std::uint8_t c) const {
  if (c == '\n' && state == J::AfterRestricted) return Transition{j_(J::StmntEnd), HeadOp::AsiHere};

  if (state == J::BlockClose) {
    if (top.kind == kAsiMark) {
      if (is_space(c)) return advance(j_(state));
      if (is_offending(c)) return Transition{j_(J::StmntEnd), HeadOp::AsiAtMark};
      return pop(j_(state), HeadOp::Revisit);
    }
    if (c == '\n') return push(j_(state), StackSymbol{kAsiMark, 0, 0});
    if (c == '/') return js_slash(state, SlashMeaning::Ambiguous);
  }

  if (is_space(c)) return advance(j_(state));
  if (is_ident_start(c)) {
    return push(j_(J::Identifier), StackSymbol{kIdent, 0, keywords_.child(WordTrie::kRoot, c)});
  }
  if (is_digit(c)) return advance(j_(J::Numeric));
  switch (c) {
    case '"':
      return advance(j_(J::DqString));
    case '\'':
      return advance(j_(J::SqString));
    case '`':
      return advance(j_(J::Template));
    case '/':
      return js_slash(state, SlashMeaning::Regex);
    case '(': {
      const std::uint8_t kind = state == J::AfterControl ? kCondParen : state == J::AfterFor ? kForParen : kParen;
      return push(j_(J::OpenGroup), StackSymbol{kind, 0, 0});
    }
    case '[':
      return push(j_(J::OpenGroup), StackSymbol{kBracket, 0, 0});
    case '{':
      return push(j_(J::BraceOpen), StackSymbol{kBrace, 0, 0});
    case ')':
    case ']':
    case '}':
      return js_close(state, top, c);
    case ';':
      return semicolon_forbidden(top) ? error_at(j_(state)) : advance(j_(J::StmntEnd));
    case '\\':
      return error_at(j_(state));
    default:
      return advance(j_(J::Punctuator));
  }
}

// After a complete operand: an operator, a closer, or a statement end.
Transition WebSpec::js_after_operand(J state, StackSymbol top, std::uint8_t c) const {
  if (top.kind == kAsiMark) {
    if (is_space(c)) return advance(j_(state));
    if (is_offending(c)) return Transition{j_(J::StmntEnd), HeadOp::AsiAtMark};
    // No line break may precede a postfix ++ or --; the sign waits on the mark.
    if (c == '+' || c == '-') return replace(j_(J::Additive), StackSymbol{kAsiMark, c, 0});
    return pop(j_(state), HeadOp::Revisit);
  }
  if (c == '\n') return push(j_(state), StackSymbol{kAsiMark, 0, 0});
  if (is_space(c)) return advance(j_(state));
  if (is_ident_start(c)) {
    return push(j_(J::Identifier), StackSymbol{kIdent, 0, keywords_.child(WordTrie::kRoot, c)});
  }
  if (is_digit(c) || c == '"' || c == '\'' || c == '\\') return error_at(j_(state));
  switch (c) {
    case '`':
      return advance(j_(J::Template));
    case '.':
      return advance(j_(J::Dot));
    case '+':
    case '-':
      return advance(j_(J::Additive));
    case '/':
      return js_slash(state, SlashMeaning::Division);
    case '(':
      return push(j_(J::OpenGroup), StackSymbol{kParen, 0, 0});
    case '[':
      return push(j_(J::OpenGroup), StackSymbol{kBracket, 0, 0});
    case '{':
      return push(j_(J::BraceOpen), StackSymbol{kBrace, 0, 0});
    case '}':
      if (top.kind == kBrace) return Transition{j_(J::StmntEnd), HeadOp::AsiHere};
      return js_close(state, top, c);
    case ')':
    case ']':
      return js_close(state, top, c);
    case ';':
      return semicolon_forbidden(top) ? error_at(j_(state)) : advance(j_(J::StmntEnd));
    default:
      return advance(j_(J::Punctuator));
  }
}

Transition WebSpec::js(J state, StackSymbol top, std::uint8_t c) const {
  switch (state) {
    case J::Start:
    case J::StmntEnd:
    case J::AfterKeyword:
    case J::AfterRestricted:
    case J::AfterControl:
    case J::AfterFor:
    case J::Punctuator:
    case J::OpenGroup:
    case J::ControlClose:
    case J::BraceOpen:
    case J::BlockClose:
    case J::TemplateSubst:
      return js_operand(state, top, c);

    case J::ExprEnd:
      return js_after_operand(state, top, c);

    case J::Identifier: {
      if (is_ident_part(c)) return replace(j_(J::Identifier), StackSymbol{kIdent, 0, keywords_.child(top.value, c)});
      switch (static_cast<KeywordClass>(keywords_.tag(top.value))) {
        case KeywordClass::Operand:
          return pop(j_(J::AfterKeyword), HeadOp::Revisit);
        case KeywordClass::Restricted:
          return pop(j_(J::AfterRestricted), HeadOp::Revisit);
        case KeywordClass::Control:
          return pop(j_(J::AfterControl), HeadOp::Revisit);
        case KeywordClass::For:
          return pop(j_(J::AfterFor), HeadOp::Revisit);
      }
      return pop(j_(J::ExprEnd), HeadOp::Revisit);
    }

    case J::Dot:
      if (is_ident_start(c)) return push(j_(J::Identifier), StackSymbol{kIdent, 0, WordTrie::kNoNode});
      if (is_space(c)) return advance(j_(J::Dot));
      if (c == '.') return advance(j_(J::Punctuator));
      return revisit(j_(J::Punctuator));

    case J::Additive:
      if (top.kind == kAsiMark) {
        if (c == top.aux) return Transition{j_(J::StmntEnd), HeadOp::AsiAtMark};
        return pop(j_(J::Additive), HeadOp::Revisit);
      }
      if (c == '+' || c == '-') return advance(j_(J::PostfixOp));
      return revisit(j_(J::Punctuator));

    case J::PostfixOp:
    case J::RegexFlags:
      if (state == J::RegexFlags && is_ident_part(c)) return advance(j_(J::RegexFlags));
      return revisit(j_(J::ExprEnd));

    case J::Numeric:
      if (is_ident_part(c) || c == '.') return advance(j_(J::Numeric));
      return revisit(j_(J::ExprEnd));

    case J::DqString:
    case J::SqString: {
      const std::uint8_t quote = state == J::DqString ? '"' : '\'';
      if (c == quote) return advance(j_(J::ExprEnd));
      if (c == '\\') return advance(j_(state == J::DqString ? J::DqEscape : J::SqEscape));
      if (c == '\n') return error_at(j_(state));
      return advance(j_(state));
    }
    case J::DqEscape:
      return advance(j_(J::DqString));
    case J::SqEscape:
      return advance(j_(J::SqString));

    case J::Template:
      if (c == '`') return advance(j_(J::ExprEnd));
      if (c == '\\') return advance(j_(J::TemplateEscape));
      if (c == '$') return advance(j_(J::TemplateDollar));
      return advance(j_(J::Template));
    case J::TemplateEscape:
      return advance(j_(J::Template));
    case J::TemplateDollar:
      if (c == '{') return push(j_(J::TemplateSubst), StackSymbol{kTemplateBrace, 0, 0});
      return revisit(j_(J::Template));

    case J::Slash:
      if (c == '/') return replace(j_(J::LineComment), StackSymbol{kComment, 0, top.value});
      if (c == '*') return replace(j_(J::BlockComment), StackSymbol{kComment, 0, top.value});
      switch (static_cast<SlashMeaning>(top.aux)) {
        case SlashMeaning::Division:
          return pop(j_(J::Punctuator), HeadOp::Revisit);
        case SlashMeaning::Regex:
          return pop(j_(J::Regex), HeadOp::Revisit);
        case SlashMeaning::Ambiguous:
          break;
      }
      return error_at(j_(state));

    case J::LineComment:
      if (c == '\n') return pop(top.value, HeadOp::Revisit);
      return advance(j_(J::LineComment));
    case J::BlockComment:
      return advance(j_(c == '*' ? J::BlockCommentStar : J::BlockComment));
    case J::BlockCommentStar:
      if (c == '/') return pop(top.value);
      return advance(j_(c == '*' ? J::BlockCommentStar : J::BlockComment));

    case J::Regex:
      if (c == '/') return advance(j_(J::RegexFlags));
      if (c == '\\') return advance(j_(J::RegexEscape));
      if (c == '[') return advance(j_(J::RegexClass));
      if (c == '\n') return error_at(j_(state));
      return advance(j_(J::Regex));
    case J::RegexEscape:
      return advance(j_(J::Regex));
    case J::RegexClass:
      if (c == ']') return advance(j_(J::Regex));
      if (c == '\\') return advance(j_(J::RegexClassEscape));
      return advance(j_(J::RegexClass));
    case J::RegexClassEscape:
      return advance(j_(J::RegexClass));

    case J::Asi:
      return revisit(j_(J::StmntEnd));

    case J::Error:
      if (c == ';' || c == '}') return Transition{j_(J::StmntEnd), HeadOp::Advance, StackOp::UnwindToRegion, {}};
      return advance(j_(J::Error));
  }
  return error_at(j_(state));
}

}  // namespace ctxaudit::detail
