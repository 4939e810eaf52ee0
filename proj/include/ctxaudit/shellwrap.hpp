#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxaudit/detector.hpp"

namespace ctxaudit {

inline constexpr std::string_view kTaintEnv = "CA_TAINT";
inline constexpr std::string_view kRealShellEnv = "CA_REAL_SHELL";
inline constexpr std::string_view kDefaultShell = "/bin/sh";
inline constexpr int kRefusedExit = 126;
inline constexpr int kShellNotFoundExit = 127;
inline constexpr int kUsageExit = 2;

// Decodes `<decimal length>:<bytes>` records. Empty text yields no sources.
// Throws std::invalid_argument on malformed input.
std::vector<Bytes> parse_taint_env(std::string_view text);
std::string encode_taint_env(std::span<const Bytes> sources);

// Index of the command string in a `sh [options] -c command [name args...]`
// argument vector, if the invocation carries one.
std::optional<std::size_t> command_argument(std::span<const std::string> argv);

struct CommandCheck {
  Verdict verdict;
  std::vector<ByteSpan> taint;
};

// Locates the taint sources in `command` and runs shell detection on it.
CommandCheck check_command(BytesView command, std::span<const Bytes> sources, const ReflectionConfig& config = {});

// `context-auditor: blocked command injection at byte <i> (<from> -> <to>)`
std::string refusal_message(const TransitionEvent& event);

// Entry point of the wrapper binary. Returns only when the real shell is not
// executed.
int wrap_main(int argc, char** argv, char** envp);

}  // namespace ctxaudit
