#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxaudit/core.hpp"

namespace ctxaudit {

// The fixed table of parsing states bundled with the build.
class StateCatalog {
 public:
  // Parses the tab-separated catalog format. Throws MalformedSpec on bad
  // records or duplicate (language, name) pairs.
  static StateCatalog parse(std::string_view tsv);

  // The catalog compiled into this library.
  static const StateCatalog& builtin();

  int version() const noexcept { return version_; }
  std::size_t size() const noexcept { return states_.size(); }
  std::span<const ContextState> states() const noexcept { return states_; }

  bool contains(StateId id) const noexcept { return id < states_.size(); }
  const ContextState& at(StateId id) const;
  std::optional<StateId> find(Language language, std::string_view name) const noexcept;
  // Throws MalformedSpec when the state is not registered.
  StateId require(Language language, std::string_view name) const;

 private:
  int version_ = 0;
  std::vector<ContextState> states_;
};

// Shorthands over the builtin catalog.
const ContextState& describe(StateId id);
std::string_view state_name(StateId id);
// "LANG:Name", unambiguous across languages.
std::string qualified_name(StateId id);

std::optional<Language> parse_language(std::string_view text) noexcept;

}  // namespace ctxaudit
