#include <doctest.h>

#include <random>
#include <string>

#include "ctxaudit/catalog.hpp"
#include "ctxaudit/engine.hpp"
#include "ctxaudit/shell_lang.hpp"
#include "support.hpp"

using namespace ctxaudit;

namespace {

ParseTrace parse(std::string_view command) { return run_automaton(command, shell_spec()); }

std::string names(std::string_view command) {
  std::string out;
  for (StateId id : parse(command).labels) {
    if (!out.empty()) out += ' ';
    out += state_name(id);
  }
  return out;
}

std::vector<std::size_t> indices(std::string_view command) { return test::event_indices(parse(command)); }

}  // namespace

TEST_CASE("the shell automaton starts at SH_Start") {
  CHECK(state_name(shell_spec().entry()) == "SH_Start");
  CHECK(describe(shell_spec().entry()).language == Language::Shell);
}

TEST_CASE("command words, blanks and arguments") {
  CHECK(names("ls -la") == "SH_Command_Word SH_Command_Word SH_Blank SH_Argument SH_Argument SH_Argument");
  CHECK(indices("ls -la") == std::vector<std::size_t>{2, 3});
}

TEST_CASE("a pipeline and a list switch contexts at operators and word starts") {
  const std::string command = "cat userinfo.txt | grep Auditor; rm userinfo.txt";
  const ParseTrace trace = parse(command);
  const auto at = [&](char c, std::size_t from = 0) { return command.find(c, from); };
  CHECK(test::name_at(trace, at('|')) == "SHELL:SH_Control_Operator");
  CHECK(test::name_at(trace, at(';')) == "SHELL:SH_Control_Operator");
  CHECK(test::name_at(trace, command.find("grep")) == "SHELL:SH_Command_Word");
  CHECK(test::name_at(trace, command.find("rm")) == "SHELL:SH_Command_Word");
  const auto events = test::event_indices(trace);
  for (std::size_t index : {at('|'), at(';'), command.find("grep"), command.find("rm")}) {
    CHECK(std::find(events.begin(), events.end(), index) != events.end());
  }
}

TEST_CASE("a single operand produces no events inside it") {
  const std::string command = "grep Auditor";
  const auto events = indices(command);
  for (std::size_t index : events) CHECK_FALSE((index > 5 && index < command.size()));
}

TEST_CASE("command substitution inside double quotes is nested and balanced") {
  const std::string command = "echo \"$(whoami)\"";
  CHECK(names(command) ==
        "SH_Command_Word SH_Command_Word SH_Command_Word SH_Command_Word SH_Blank SH_Double_Quoted SH_Dollar "
        "SH_Command_Subst_Open SH_Command_Word SH_Command_Word SH_Command_Word SH_Command_Word SH_Command_Word "
        "SH_Command_Word SH_Double_Quoted SH_Argument");
  const ParseTrace trace = parse(command);
  for (const TransitionEvent& e : trace.events) CHECK_FALSE(e.is_error);
}

TEST_CASE("control operators") {
  CHECK(names("a && b || c &") ==
        "SH_Command_Word SH_Blank SH_Control_Operator SH_Control_Operator SH_Control_Operator SH_Command_Word "
        "SH_Blank SH_Control_Operator SH_Control_Operator SH_Control_Operator SH_Command_Word SH_Blank "
        "SH_Control_Operator");
  CHECK(test::name_at(parse("a\nb"), 1) == "SHELL:SH_Control_Operator");
  CHECK(test::name_at(parse("a\nb"), 2) == "SHELL:SH_Command_Word");
}

TEST_CASE("subshells and brace groups") {
  CHECK(names("(cd x; ls)") ==
        "SH_Group_Open SH_Command_Word SH_Command_Word SH_Blank SH_Argument SH_Control_Operator "
        "SH_Control_Operator SH_Command_Word SH_Command_Word SH_Group_Close");
  CHECK(names("{ ls; }") ==
        "SH_Group_Open SH_Group_Open SH_Command_Word SH_Command_Word SH_Control_Operator SH_Control_Operator "
        "SH_Group_Close");
}

TEST_CASE("expansions") {
  const ParseTrace trace = parse("echo $((1+2)) ${HOME} $1 `id`");
  CHECK(test::name_at(trace, 7) == "SHELL:SH_Arithmetic");
  CHECK(test::name_at(trace, 15) == "SHELL:SH_Param_Expansion");
  CHECK(test::name_at(trace, 23) == "SHELL:SH_Variable");
  CHECK(test::name_at(trace, 25) == "SHELL:SH_Backtick_Open");
  CHECK(test::name_at(trace, 26) == "SHELL:SH_Command_Word");
  for (const TransitionEvent& e : trace.events) CHECK_FALSE(e.is_error);
}

TEST_CASE("quotes, escapes, redirections, comments and arrays") {
  CHECK(test::name_at(parse("echo 'a; b'"), 7) == "SHELL:SH_Single_Quoted");
  CHECK(test::name_at(parse("echo \\$x"), 5) == "SHELL:SH_Escape");
  CHECK(test::name_at(parse("echo \\$x"), 6) == "SHELL:SH_Argument");
  CHECK(test::name_at(parse("ls > out"), 3) == "SHELL:SH_Redirection");
  CHECK(test::name_at(parse("ls # c; d"), 6) == "SHELL:SH_Comment");
  CHECK(test::name_at(parse("arr=(a b)"), 5) == "SHELL:SH_Array");
}

TEST_CASE("unterminated constructs end in a syntax error") {
  for (const char* command : {"echo 'a b", "echo \"a", "echo $(ls", "(ls", "echo `id", "ls >"}) {
    const ParseTrace trace = parse(command);
    CHECK_MESSAGE(state_name(trace.labels.back()) == "Syntax_Error", command);
  }
  CHECK(state_name(parse("echo $").labels.back()) != "Syntax_Error");
  CHECK(state_name(parse("echo $HOME").labels.back()) != "Syntax_Error");
}

TEST_CASE("an unexpected closer is an error and parsing resumes after the next separator") {
  const ParseTrace trace = parse("ls ); echo ok");
  bool error = false;
  for (const TransitionEvent& e : trace.events) error |= e.is_error;
  CHECK(error);
  CHECK(test::name_at(trace, 6) == "SHELL:SH_Command_Word");
}

TEST_CASE("single-quoted splices and word-internal bytes are inert") {
  std::mt19937_64 rng(13);
  const std::string quoted_alphabet = "ab ;|&$()`\"\\<>{}#\n*?";
  const std::string word_alphabet = "abcXYZ019_-./";
  for (int round = 0; round < 500; ++round) {
    const std::string inside = test::random_from(rng, quoted_alphabet, 1 + rng() % 20);
    const std::string quoted = "grep '" + inside + "' f";
    const ParseTrace trace = parse(quoted);
    for (const TransitionEvent& e : trace.events) {
      CHECK_FALSE_MESSAGE((e.index >= 6 && e.index < 6 + inside.size()), quoted);
    }

    const std::string word = test::random_from(rng, word_alphabet, 1 + rng() % 20);
    const std::string plain = "ls " + word;
    const ParseTrace plain_trace = parse(plain);
    for (const TransitionEvent& e : plain_trace.events) CHECK_FALSE_MESSAGE(e.index > 3, plain);
  }
}
