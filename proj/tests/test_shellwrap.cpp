#include <doctest.h>

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "ctxaudit/catalog.hpp"
#include "ctxaudit/shellwrap.hpp"

using namespace ctxaudit;

extern char** environ;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string err;
};

// Runs the wrapper binary with `args` and exactly the given environment.
RunResult run_wrapper(const std::vector<std::string>& args, const std::vector<std::string>& env) {
  std::vector<char*> argv;
  std::string self = CA_SH_BINARY;
  argv.push_back(self.data());
  std::vector<std::string> arg_copy = args;
  for (std::string& a : arg_copy) argv.push_back(a.data());
  argv.push_back(nullptr);
  std::vector<std::string> env_copy = env;
  std::vector<char*> envp;
  for (std::string& e : env_copy) envp.push_back(e.data());
  envp.push_back(nullptr);

  int pipe_fds[2];
  REQUIRE(pipe(pipe_fds) == 0);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, pipe_fds[1], STDERR_FILENO);
  posix_spawn_file_actions_addclose(&actions, pipe_fds[0]);
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, self.c_str(), &actions, nullptr, argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  close(pipe_fds[1]);
  REQUIRE(rc == 0);

  RunResult result;
  char buffer[512];
  for (ssize_t n; (n = read(pipe_fds[0], buffer, sizeof buffer)) > 0;) result.err.append(buffer, n);
  close(pipe_fds[0]);
  int status = 0;
  REQUIRE(waitpid(pid, &status, 0) == pid);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string taint_env(std::vector<Bytes> sources) { return "CA_TAINT=" + encode_taint_env(sources); }

const std::string kShellEnv = "CA_REAL_SHELL=/bin/sh";
const std::string kPathEnv = "PATH=/usr/bin:/bin";

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / ("ca-shellwrap-" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("taint sources are length-prefixed records") {
  CHECK(parse_taint_env("").empty());
  CHECK(parse_taint_env("3:abc5:hello") == std::vector<Bytes>{"abc", "hello"});
  CHECK(parse_taint_env("0:") == std::vector<Bytes>{""});
  const std::vector<Bytes> tricky = {"a:b", "12:x", std::string("nul\0byte", 8), "; rm -rf /"};
  CHECK(parse_taint_env(encode_taint_env(tricky)) == tricky);
  for (const char* bad : {"3:ab", "x:abc", "3abc", ":abc", "99999999999999999999:a", "-1:a"}) {
    CHECK_THROWS_AS_MESSAGE(parse_taint_env(bad), std::invalid_argument, bad);
  }
}

TEST_CASE("the command string is located after -c") {
  using Args = std::vector<std::string>;
  CHECK(command_argument(Args{"sh", "-c", "ls"}) == 2u);
  CHECK(command_argument(Args{"sh", "-ec", "ls", "name", "arg"}) == 2u);
  CHECK(command_argument(Args{"sh", "-o", "pipefail", "-c", "ls"}) == 4u);
  CHECK(command_argument(Args{"sh", "+o", "c", "-c", "ls"}) == 4u);
  CHECK_FALSE(command_argument(Args{"sh", "script.sh"}).has_value());
  CHECK_FALSE(command_argument(Args{"sh", "-c"}).has_value());
  CHECK_FALSE(command_argument(Args{"sh"}).has_value());
  CHECK_FALSE(command_argument(Args{"sh", "--", "-c", "ls"}).has_value());
}

TEST_CASE("check_command finds the taint and runs shell detection") {
  const std::vector<Bytes> injected = {"Auditor; rm userinfo.txt"};
  const CommandCheck bad = check_command("cat userinfo.txt | grep Auditor; rm userinfo.txt", injected);
  CHECK(bad.verdict.malicious());
  CHECK(bad.taint == std::vector<ByteSpan>{{24, 48}});

  const std::vector<Bytes> plain = {"Auditor"};
  CHECK_FALSE(check_command("cat userinfo.txt | grep Auditor", plain).verdict.malicious());
  const std::vector<Bytes> absent = {"nothing"};
  const CommandCheck none = check_command("ls", absent);
  CHECK(none.taint.empty());
  CHECK_FALSE(none.verdict.malicious());
}

TEST_CASE("refusal messages name the byte and the states") {
  const StateId arg = StateCatalog::builtin().require(Language::Shell, "SH_Argument");
  const StateId op = StateCatalog::builtin().require(Language::Shell, "SH_Control_Operator");
  CHECK(refusal_message({31, arg, op, false}) ==
        "context-auditor: blocked command injection at byte 31 (SH_Argument -> SH_Control_Operator)");
}

TEST_CASE("the wrapper executes benign commands with the taint variable removed") {
  const RunResult plain = run_wrapper({"-c", "exit 7"}, {kShellEnv, kPathEnv});
  CHECK(plain.exit_code == 7);

  const RunResult stripped =
      run_wrapper({"-c", "test -z \"$CA_TAINT\" && test \"$0\" = x", "x"}, {kShellEnv, kPathEnv, taint_env({"zzz"})});
  CHECK(stripped.exit_code == 0);

  const auto dir = scratch_dir();
  const auto marker = dir / "benign";
  const RunResult benign = run_wrapper({"-c", "echo Auditor > " + marker.string()},
                                       {kShellEnv, kPathEnv, taint_env({"Auditor"})});
  CHECK(benign.exit_code == 0);
  CHECK(std::filesystem::exists(marker));
  std::filesystem::remove_all(dir);
}

TEST_CASE("the wrapper refuses injected commands without running them") {
  const auto dir = scratch_dir();
  const auto marker = dir / "pwned";
  const std::string value = "Auditor; touch " + marker.string();
  const RunResult refused =
      run_wrapper({"-c", "grep -q " + value}, {kShellEnv, kPathEnv, taint_env({value})});
  CHECK(refused.exit_code == kRefusedExit);
  CHECK(refused.err.find("blocked command injection") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(marker));
  std::filesystem::remove_all(dir);
}

TEST_CASE("a fully tainted single-token command still runs") {
  const RunResult single = run_wrapper({"-c", "true"}, {kShellEnv, kPathEnv, taint_env({"true"})});
  CHECK(single.exit_code == 0);
}

TEST_CASE("wrapper error exits") {
  const RunResult missing = run_wrapper({"-c", "true"}, {"CA_REAL_SHELL=/nonexistent/sh", kPathEnv});
  CHECK(missing.exit_code == kShellNotFoundExit);

  const RunResult malformed = run_wrapper({"-c", "true"}, {kShellEnv, kPathEnv, "CA_TAINT=5:ab"});
  CHECK(malformed.exit_code == kUsageExit);
}
