#include "web_spec.hpp"

namespace ctxaudit::detail {

using namespace web_kind;

Transition WebSpec::close_tag(StackSymbol top) const {
  if (top.kind == kTag && top.aux == 0) {
    const int region = tags_.tag(top.value);
    if (region >= 0) {
      return replace(regions_[region].entry,
                     StackSymbol{stack_kind::kRegion, 0, static_cast<std::uint16_t>(region)});
    }
  }
  return Transition{h_(H::Start), HeadOp::Advance, StackOp::Clear, {}};
}

Transition WebSpec::html(H state, StackSymbol top, std::uint8_t c) const {
  switch (state) {
    case H::Start:
      if (c != '<') return advance(h_(H::Start));
      if (top.kind == kLtLiteral) return pop(h_(H::Start));
      return push(h_(H::TagOpen), StackSymbol{kLtMark, 0, 0});

    case H::TagOpen:
      if (is_alpha(c)) return replace(h_(H::TagName), StackSymbol{kTag, 0, tags_.child(WordTrie::kRoot, c)});
      if (c == '/') return advance(h_(H::EndTagOpen));
      if (c == '!') return pop(h_(H::MarkupDeclOpen));
      if (c == '?') return pop(h_(H::BogusComment));
      // Not a tag after all: the `<` is text.
      return Transition{h_(H::Start), HeadOp::Rewind, StackOp::Replace, StackSymbol{kLtLiteral, 0, 0}};

    case H::EndTagOpen:
      if (is_alpha(c)) return replace(h_(H::TagName), StackSymbol{kTag, 1, tags_.child(WordTrie::kRoot, c)});
      if (c == '>') return pop(h_(H::Start));
      return pop(h_(H::BogusComment), HeadOp::Revisit);

    case H::TagName:
      if (is_space(c)) return advance(h_(H::BeforeAttrName));
      if (c == '/') return advance(h_(H::SelfClosing));
      if (c == '>') return close_tag(top);
      return replace(h_(H::TagName), StackSymbol{kTag, top.aux, tags_.child(top.value, c)});

    case H::BeforeAttrName:
      if (is_space(c)) return advance(h_(H::BeforeAttrName));
      if (c == '/') return advance(h_(H::SelfClosing));
      if (c == '>') return close_tag(top);
      if (c == '=' || c == '"' || c == '\'' || c == '<') return error_at(h_(state));
      return advance(h_(H::AttrName));

    case H::AttrName:
      if (is_space(c)) return advance(h_(H::AfterAttrName));
      if (c == '/') return advance(h_(H::SelfClosing));
      if (c == '>') return close_tag(top);
      if (c == '=') return advance(h_(H::BeforeAttrValue));
      if (c == '"' || c == '\'' || c == '<') return error_at(h_(state));
      return advance(h_(H::AttrName));

    case H::AfterAttrName:
      if (is_space(c)) return advance(h_(H::AfterAttrName));
      if (c == '/') return advance(h_(H::SelfClosing));
      if (c == '=') return advance(h_(H::BeforeAttrValue));
      if (c == '>') return close_tag(top);
      return revisit(h_(H::BeforeAttrName));

    case H::BeforeAttrValue:
      if (is_space(c)) return advance(h_(H::BeforeAttrValue));
      if (c == '"') return advance(h_(H::AttrDq));
      if (c == '\'') return advance(h_(H::AttrSq));
      if (c == '>') return close_tag(top);
      return revisit(h_(H::AttrUnquoted));

    case H::AttrDq:
      return advance(c == '"' ? h_(H::AfterAttrValueQuoted) : h_(H::AttrDq));
    case H::AttrSq:
      return advance(c == '\'' ? h_(H::AfterAttrValueQuoted) : h_(H::AttrSq));

    case H::AttrUnquoted:
      if (is_space(c)) return advance(h_(H::BeforeAttrName));
      if (c == '>') return close_tag(top);
      if (c == '"' || c == '\'' || c == '<' || c == '=' || c == '`') return error_at(h_(state));
      return advance(h_(H::AttrUnquoted));

    case H::AfterAttrValueQuoted:
      if (is_space(c)) return advance(h_(H::BeforeAttrName));
      if (c == '/') return advance(h_(H::SelfClosing));
      if (c == '>') return close_tag(top);
      return error_at(h_(state));

    case H::SelfClosing:
      if (c == '>') return close_tag(top);
      return revisit(h_(H::BeforeAttrName));

    case H::MarkupDeclOpen:
      if (c == '-') return advance(h_(H::CommentStart));
      if (c == 'd' || c == 'D') return advance(h_(H::Doctype));
      if (c == '>') return advance(h_(H::Start));
      return advance(h_(H::BogusComment));

    case H::CommentStart:
      if (c == '-') return advance(h_(H::Comment));
      return revisit(h_(H::BogusComment));

    case H::Comment:
      return advance(c == '-' ? h_(H::CommentEndDash) : h_(H::Comment));
    case H::CommentEndDash:
      return advance(c == '-' ? h_(H::CommentEnd) : h_(H::Comment));
    case H::CommentEnd:
      if (c == '>') return advance(h_(H::Start));
      if (c == '-' || c == '!') return advance(h_(H::CommentEnd));
      return advance(h_(H::Comment));

    case H::Doctype:
    case H::BogusComment:
      return advance(c == '>' ? h_(H::Start) : h_(state));

    case H::Rcdata:
      return advance(h_(H::Rcdata));

    case H::Error:
      if (c == '>') return Transition{h_(H::Start), HeadOp::Advance, StackOp::Clear, {}};
      return advance(h_(H::Error));
  }
  return error_at(h_(state));
}

}  // namespace ctxaudit::detail
