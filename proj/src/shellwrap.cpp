#include "ctxaudit/shellwrap.hpp"

#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <iostream>
#include <stdexcept>

#include "ctxaudit/catalog.hpp"

namespace ctxaudit {

std::vector<Bytes> parse_taint_env(std::string_view text) {
  std::vector<Bytes> sources;
  while (!text.empty()) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0) throw std::invalid_argument("taint record lacks a length prefix");
    std::size_t length = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + colon, length);
    if (ec != std::errc{} || ptr != text.data() + colon) throw std::invalid_argument("taint record length is not a number");
    text.remove_prefix(colon + 1);
    if (length > text.size()) throw std::invalid_argument("taint record is shorter than its length prefix");
    sources.emplace_back(text.substr(0, length));
    text.remove_prefix(length);
  }
  return sources;
}

std::string encode_taint_env(std::span<const Bytes> sources) {
  std::string out;
  for (const Bytes& source : sources) {
    out += std::to_string(source.size());
    out += ':';
    out += source;
  }
  return out;
}

std::optional<std::size_t> command_argument(std::span<const std::string> argv) {
  for (std::size_t i = 1; i < argv.size(); ++i) {
    const std::string& arg = argv[i];
    if (arg == "--" || arg.size() < 2 || (arg[0] != '-' && arg[0] != '+')) return std::nullopt;
    // `-o option` and `+o option` consume the next argument.
    if (arg == "-o" || arg == "+o") {
      ++i;
      continue;
    }
    if (arg[0] == '-' && arg.find('c') != std::string::npos) {
      if (i + 1 < argv.size()) return i + 1;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

CommandCheck check_command(BytesView command, std::span<const Bytes> sources, const ReflectionConfig& config) {
  CommandCheck check;
  check.taint = find_reflections(sources, command, config);
  if (check.taint.empty()) return check;
  check.verdict = detect(TaintedContent(Bytes(command), check.taint, ContentKind::ShellCommand));
  return check;
}

std::string refusal_message(const TransitionEvent& event) {
  return "context-auditor: blocked command injection at byte " + std::to_string(event.index) + " (" +
         std::string(state_name(event.from)) + " -> " + std::string(state_name(event.to)) + ")";
}

namespace {

void usage(const char* self) {
  std::cerr << "usage: " << (self ? self : "ca-sh") << " [shell options] -c command [args...]\n"
            << "  " << kTaintEnv << "     taint sources as concatenated <length>:<bytes> records\n"
            << "  " << kRealShellEnv << "  shell to execute (default " << kDefaultShell << ")\n";
}

}  // namespace

int wrap_main(int argc, char** argv, char** envp) {
  std::vector<Bytes> sources;
  const char* taint_text = std::getenv(std::string(kTaintEnv).c_str());
  try {
    if (taint_text) sources = parse_taint_env(taint_text);
  } catch (const std::invalid_argument& e) {
    std::cerr << "context-auditor: malformed " << kTaintEnv << ": " << e.what() << "\n";
    usage(argc > 0 ? argv[0] : nullptr);
    return kUsageExit;
  }

  const std::vector<std::string> args(argv, argv + argc);
  if (const auto index = command_argument(args); index && !sources.empty()) {
    try {
      const CommandCheck check = check_command(args[*index], sources);
      if (check.verdict.malicious()) {
        std::cerr << refusal_message(*check.verdict.evidence) << "\n";
        return kRefusedExit;
      }
    } catch (const StepBudgetExceeded& e) {
      std::cerr << "context-auditor: refusing command, analysis aborted: " << e.what() << "\n";
      return kRefusedExit;
    }
  }

  const char* shell_env = std::getenv(std::string(kRealShellEnv).c_str());
  const std::string shell = shell_env && *shell_env ? shell_env : std::string(kDefaultShell);

  std::vector<char*> env;
  const std::string prefix = std::string(kTaintEnv) + "=";
  for (char** e = envp; e && *e; ++e) {
    if (std::strncmp(*e, prefix.c_str(), prefix.size()) != 0) env.push_back(*e);
  }
  env.push_back(nullptr);

  std::vector<char*> exec_args(argv, argv + argc);
  exec_args.push_back(nullptr);
  execve(shell.c_str(), exec_args.data(), env.data());

  const int error = errno;
  std::cerr << "context-auditor: cannot execute " << shell << ": " << std::strerror(error) << "\n";
  return error == ENOENT || error == ENOTDIR ? kShellNotFoundExit : kRefusedExit;
}

}  // namespace ctxaudit
