#include <doctest.h>

#include <set>
#include <stdexcept>

#include "ctxaudit/catalog.hpp"
#include "ctxaudit/core.hpp"

using namespace ctxaudit;

TEST_CASE("byte span containment is half-open") {
  const ByteSpan span{2, 5};
  CHECK(span.size() == 3);
  CHECK_FALSE(span.contains(1));
  CHECK(span.contains(2));
  CHECK(span.contains(4));
  CHECK_FALSE(span.contains(5));
}

TEST_CASE("tainted content validates its spans") {
  CHECK_NOTHROW(TaintedContent("abcdef", {{0, 2}, {3, 6}}, ContentKind::HtmlDocument));
  CHECK_NOTHROW(TaintedContent("abc", {}, ContentKind::HtmlDocument));
  CHECK_THROWS_AS(TaintedContent("abc", {{1, 1}}, ContentKind::HtmlDocument), std::invalid_argument);
  CHECK_THROWS_AS(TaintedContent("abc", {{2, 4}}, ContentKind::HtmlDocument), std::invalid_argument);
  CHECK_THROWS_AS(TaintedContent("abcdef", {{0, 3}, {2, 4}}, ContentKind::HtmlDocument), std::invalid_argument);
  CHECK_THROWS_AS(TaintedContent("abcdef", {{3, 4}, {0, 2}}, ContentKind::HtmlDocument), std::invalid_argument);
}

TEST_CASE("tainted content answers membership and taint end") {
  const TaintedContent content("abcdefgh", {{1, 3}, {5, 6}}, ContentKind::ShellCommand);
  CHECK_FALSE(content.is_tainted(0));
  CHECK(content.is_tainted(1));
  CHECK(content.is_tainted(2));
  CHECK_FALSE(content.is_tainted(3));
  CHECK(content.is_tainted(5));
  CHECK_FALSE(content.is_tainted(7));
  CHECK(content.taint_end() == 6);
  CHECK(TaintedContent("ab", {}, ContentKind::ShellCommand).taint_end() == 0);
}

TEST_CASE("content kinds round-trip through text") {
  CHECK(parse_content_kind("html") == ContentKind::HtmlDocument);
  CHECK(parse_content_kind("shell-command") == ContentKind::ShellCommand);
  CHECK(parse_content_kind(to_string(ContentKind::HtmlDocument)) == ContentKind::HtmlDocument);
  CHECK_FALSE(parse_content_kind("pdf").has_value());
}

TEST_CASE("builtin catalog holds the named states with their roles") {
  const StateCatalog& catalog = StateCatalog::builtin();
  CHECK(catalog.version() >= 1);
  const auto expect_role = [&](Language language, const char* name, Role role) {
    const auto id = catalog.find(language, name);
    REQUIRE_MESSAGE(id.has_value(), name);
    CHECK(catalog.at(*id).role == role);
  };
  expect_role(Language::Html, "HTML_Start", Role::Data);
  expect_role(Language::Js, "Script_Start", Role::Delimiter);
  expect_role(Language::Css, "CSS_Start", Role::Delimiter);
  expect_role(Language::Shell, "SH_Start", Role::Delimiter);
  expect_role(Language::Js, "Quoted_Literal", Role::Data);
  expect_role(Language::Js, "Stmnt_End", Role::Delimiter);
  expect_role(Language::Js, "Automatic_Semicolon_Insertion", Role::Code);
  for (Language language : {Language::Html, Language::Css, Language::Js, Language::Shell}) {
    expect_role(language, "Syntax_Error", Role::Error);
  }
}

TEST_CASE("catalog names are unique per language and ids are dense") {
  const StateCatalog& catalog = StateCatalog::builtin();
  std::set<std::string> seen;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const ContextState& state = catalog.states()[i];
    CHECK(state.id == i);
    CHECK(seen.insert(std::string(to_string(state.language)) + ":" + state.name).second);
  }
}

TEST_CASE("catalog parser rejects malformed tables") {
  CHECK_NOTHROW(StateCatalog::parse("# version\t2\nHTML\tA\tDATA\n"));
  CHECK(StateCatalog::parse("# version\t2\nHTML\tA\tDATA\n").version() == 2);
  CHECK_THROWS_AS(StateCatalog::parse("HTML\tA\tDATA\nHTML\tA\tCODE\n"), MalformedSpec);
  CHECK_THROWS_AS(StateCatalog::parse("HTML\tA\n"), MalformedSpec);
  CHECK_THROWS_AS(StateCatalog::parse("PHP\tA\tDATA\n"), MalformedSpec);
  CHECK_THROWS_AS(StateCatalog::parse("HTML\tA\tSOMETIMES\n"), MalformedSpec);
}

TEST_CASE("require throws for unregistered states") {
  CHECK_THROWS_AS(StateCatalog::builtin().require(Language::Html, "No_Such_State"), MalformedSpec);
  CHECK_THROWS(StateCatalog::builtin().at(static_cast<StateId>(StateCatalog::builtin().size())));
}

TEST_CASE("qualified names carry the language") {
  const StateId id = StateCatalog::builtin().require(Language::Js, "Quoted_Literal");
  CHECK(qualified_name(id) == "JS:Quoted_Literal");
  CHECK(state_name(id) == "Quoted_Literal");
  CHECK(describe(id).language == Language::Js);
}
