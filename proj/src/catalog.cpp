#include "ctxaudit/catalog.hpp"

#include <charconv>
#include <string>

#include "catalog_data.hpp"

namespace ctxaudit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    fields.push_back(trim(line.substr(pos, tab == std::string_view::npos ? line.npos : tab - pos)));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return fields;
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "DATA") return Role::Data;
  if (text == "DELIMITER") return Role::Delimiter;
  if (text == "CODE") return Role::Code;
  if (text == "ERROR") return Role::Error;
  return std::nullopt;
}

}  // namespace

std::optional<Language> parse_language(std::string_view text) noexcept {
  if (text == "HTML") return Language::Html;
  if (text == "CSS") return Language::Css;
  if (text == "JS") return Language::Js;
  if (text == "SHELL") return Language::Shell;
  return std::nullopt;
}

StateCatalog StateCatalog::parse(std::string_view tsv) {
  StateCatalog catalog;
  std::size_t line_no = 0;
  while (!tsv.empty()) {
    std::size_t nl = tsv.find('\n');
    std::string_view line = tsv.substr(0, nl);
    tsv.remove_prefix(nl == std::string_view::npos ? tsv.size() : nl + 1);
    ++line_no;

    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      // "# version<TAB>N" is the only meaningful comment.
      auto fields = split_tabs(line.substr(1));
      if (fields.size() == 2 && fields[0] == "version") {
        std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), catalog.version_);
      }
      continue;
    }

    auto fields = split_tabs(line);
    auto where = [&] { return "state catalog line " + std::to_string(line_no); };
    if (fields.size() != 3) throw MalformedSpec(where() + ": expected 3 fields");
    auto language = parse_language(fields[0]);
    auto role = parse_role(fields[2]);
    if (!language) throw MalformedSpec(where() + ": unknown language");
    if (!role) throw MalformedSpec(where() + ": unknown role");
    if (fields[1].empty()) throw MalformedSpec(where() + ": empty name");
    if (catalog.find(*language, fields[1])) throw MalformedSpec(where() + ": duplicate state");
    if (catalog.states_.size() > 0xFFFF) throw MalformedSpec("state catalog too large");

    catalog.states_.push_back(ContextState{static_cast<StateId>(catalog.states_.size()), *language,
                                           std::string(fields[1]), *role});
  }
  return catalog;
}

const StateCatalog& StateCatalog::builtin() {
  static const StateCatalog catalog = parse(detail::kBuiltinCatalog);
  return catalog;
}

const ContextState& StateCatalog::at(StateId id) const {
  if (!contains(id)) throw MalformedSpec("unregistered state id " + std::to_string(id));
  return states_[id];
}

std::optional<StateId> StateCatalog::find(Language language, std::string_view name) const noexcept {
  for (const ContextState& s : states_) {
    if (s.language == language && s.name == name) return s.id;
  }
  return std::nullopt;
}

StateId StateCatalog::require(Language language, std::string_view name) const {
  if (auto id = find(language, name)) return *id;
  throw MalformedSpec("state " + std::string(to_string(language)) + ":" + std::string(name) +
                      " is not in the catalog");
}

const ContextState& describe(StateId id) { return StateCatalog::builtin().at(id); }

std::string_view state_name(StateId id) { return describe(id).name; }

std::string qualified_name(StateId id) {
  const ContextState& s = describe(id);
  return std::string(to_string(s.language)) + ":" + s.name;
}

}  // namespace ctxaudit
