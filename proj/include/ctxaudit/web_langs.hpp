#pragma once

#include "ctxaudit/engine.hpp"

namespace ctxaudit {

// Automaton for HTML documents with embedded JavaScript (<script>) and CSS
// (<style>) regions. Raw-text elements such as <textarea> and <title> are
// labelled Rcdata until their end tag.
const AutomatonSpec& html_spec();

}  // namespace ctxaudit
