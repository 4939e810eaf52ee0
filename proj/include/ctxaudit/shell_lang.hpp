#pragma once

#include "ctxaudit/engine.hpp"

namespace ctxaudit {

// Automaton for POSIX shell command lines (quoting, expansions, command
// substitution, grouping, redirections and control operators). Here-document
// bodies are not modelled.
const AutomatonSpec& shell_spec();

}  // namespace ctxaudit
