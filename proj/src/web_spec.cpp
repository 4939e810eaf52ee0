#include "web_spec.hpp"

#include "ctxaudit/web_langs.hpp"

namespace ctxaudit {
namespace detail {
namespace {

struct RegionDef {
  std::string_view element;
  Language language;
};

// Elements whose content is not tokenized as markup.
constexpr std::array<RegionDef, 9> kRegionDefs = {{
    {"script", Language::Js},
    {"style", Language::Css},
    {"textarea", Language::Html},
    {"title", Language::Html},
    {"xmp", Language::Html},
    {"iframe", Language::Html},
    {"noembed", Language::Html},
    {"noframes", Language::Html},
    {"noscript", Language::Html},
}};

std::vector<std::pair<std::string_view, int>> region_words() {
  std::vector<std::pair<std::string_view, int>> words;
  for (std::size_t i = 0; i < kRegionDefs.size(); ++i) words.emplace_back(kRegionDefs[i].element, int(i));
  return words;
}

std::vector<std::pair<std::string_view, int>> keyword_words() {
  std::vector<std::pair<std::string_view, int>> words;
  for (std::string_view w : {"var", "let", "const", "new", "delete", "typeof", "void", "in", "instanceof",
                             "of", "case", "do", "else", "await", "extends", "export", "import", "default",
                             "throw", "function", "class", "async", "static", "try", "finally"}) {
    words.emplace_back(w, int(KeywordClass::Operand));
  }
  for (std::string_view w : {"return", "break", "continue", "yield"}) {
    words.emplace_back(w, int(KeywordClass::Restricted));
  }
  for (std::string_view w : {"if", "while", "switch", "catch", "with"}) {
    words.emplace_back(w, int(KeywordClass::Control));
  }
  words.emplace_back("for", int(KeywordClass::For));
  return words;
}

}  // namespace

WebSpec::WebSpec()
    : h_(Language::Html, kHtmlNames),
      c_(Language::Css, kCssNames),
      j_(Language::Js, kJsNames),
      tags_(region_words(), true),
      keywords_(keyword_words(), false) {
  for (std::size_t i = 0; i < kRegionDefs.size(); ++i) {
    const RegionDef& def = kRegionDefs[i];
    std::uint16_t node = WordTrie::kRoot;
    for (char ch : def.element) node = tags_.child(node, static_cast<std::uint8_t>(ch));

    Region region;
    region.element = std::string(def.element);
    region.entry = def.language == Language::Js    ? j_(J::Start)
                   : def.language == Language::Css ? c_(C::Start)
                                                   : h_(H::Rcdata);
    region.lt_state = h_(H::TagOpen);
    region.slash_state = h_(H::EndTagOpen);
    region.name_state = h_(H::TagName);
    region.end_tag_symbol = StackSymbol{web_kind::kTag, 1, node};
    regions_.push_back(std::move(region));
  }
  bridges_ = {
      {"<script>", j_(J::Start)},      {"</script", h_(H::TagOpen)}, {"<style>", c_(C::Start)},
      {"</style", h_(H::TagOpen)},     {"<textarea>", h_(H::Rcdata)}, {"<title>", h_(H::Rcdata)},
  };
}

Transition WebSpec::next(StateId state, StackSymbol top, std::uint8_t byte) const {
  if (auto s = h_.local(state)) return html(*s, top, byte);
  if (auto s = j_.local(state)) return js(*s, top, byte);
  if (auto s = c_.local(state)) return css(*s, top, byte);
  throw MalformedSpec("state " + std::to_string(state) + " is not part of the html automaton");
}

std::optional<StateId> WebSpec::error_state(Language language) const noexcept {
  switch (language) {
    case Language::Html:
      return h_(H::Error);
    case Language::Css:
      return c_(C::Error);
    case Language::Js:
      return j_(J::Error);
    case Language::Shell:
      break;
  }
  return std::nullopt;
}

bool WebSpec::is_rewind_mark(StackSymbol symbol) const noexcept {
  return symbol.kind == web_kind::kLtMark || symbol.kind == web_kind::kAsiMark;
}

bool WebSpec::forbids_asi(StackSymbol symbol) const noexcept {
  using namespace web_kind;
  return symbol.kind == kParen || symbol.kind == kBracket || symbol.kind == kForParen ||
         symbol.kind == kCondParen;
}

}  // namespace detail

const AutomatonSpec& html_spec() {
  static const detail::WebSpec spec;
  return spec;
}

}  // namespace ctxaudit
