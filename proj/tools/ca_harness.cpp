// Corpus runner, trace dumper and scaling benchmark.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>

#include "ctxaudit/harness.hpp"

namespace {

constexpr int kClean = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

int run_command(const std::string& path, bool fail_fast, bool skip_malformed, const ctxaudit::ReflectionConfig& config) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "ca-harness: cannot read " << path << "\n";
    return kUsage;
  }
  const ctxaudit::CorpusLoad load = ctxaudit::load_corpus(in);
  for (const ctxaudit::CorpusError& error : load.errors) {
    std::cerr << path << ":" << error.line << ": malformed record: " << error.message << "\n";
  }
  if (!load.errors.empty() && !skip_malformed) return kUsage;

  const ctxaudit::CorpusMetrics metrics = ctxaudit::run_corpus(load.records, config, fail_fast);
  std::cout << ctxaudit::format_metrics(metrics);
  return metrics.clean() && metrics.results.size() == load.records.size() ? kClean : kMismatch;
}

int trace_command(const std::string& path, const std::string& kind_text) {
  const auto kind = ctxaudit::parse_content_kind(kind_text);
  if (!kind) {
    std::cerr << "ca-harness: unknown kind " << kind_text << "\n";
    return kUsage;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "ca-harness: cannot read " << path << "\n";
    return kUsage;
  }
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::cout << ctxaudit::dump_trace(content, *kind);
  return kClean;
}

int bench_command(const std::vector<std::size_t>& sizes, double taint_at, int repeats) {
  const auto rows = ctxaudit::bench(sizes, taint_at, repeats);
  std::printf("%12s %12s %12s %12s %14s %14s\n", "bytes", "taint_end", "steps", "full_steps", "detect_ms", "full_ms");
  for (const ctxaudit::BenchRow& row : rows) {
    std::printf("%12zu %12zu %12zu %12zu %14.3f %14.3f\n", row.size, row.taint_end, row.steps, row.full_steps,
                row.seconds * 1e3, row.full_seconds * 1e3);
  }
  return kClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ca-harness: evaluate the detector on corpora"};
  app.require_subcommand(1);

  ctxaudit::ReflectionConfig config;
  std::string corpus;
  bool fail_fast = false;
  bool skip_malformed = false;
  auto* run = app.add_subcommand("run", "replay a corpus and report detection metrics");
  run->add_option("--corpus", corpus, "JSONL corpus file")->required();
  run->add_flag("--fail-fast", fail_fast, "stop at the first mismatch");
  run->add_flag("--skip-malformed", skip_malformed, "report malformed records and continue");
  run->add_option("--min-reflect-len", config.min_length)->check(CLI::PositiveNumber);
  run->add_option("--max-reflections", config.max_reflections_per_param)->check(CLI::PositiveNumber);

  std::string input;
  std::string kind = "html";
  auto* trace = app.add_subcommand("trace", "print the per-byte parse trace of a file");
  trace->add_option("--in", input, "input file")->required();
  trace->add_option("--kind", kind, "html or shell")->check(CLI::IsMember({"html", "shell"}));

  std::vector<std::size_t> sizes = {65536, 131072};
  double taint_at = 1.0;
  int repeats = 5;
  auto* bench = app.add_subcommand("bench", "time detection against document size");
  bench->add_option("--sizes", sizes, "document sizes in bytes")->delimiter(',');
  bench->add_option("--taint-at", taint_at, "end of the taint as a fraction of the size")->check(CLI::Range(0.0, 1.0));
  bench->add_option("--repeats", repeats, "timing repeats (best is reported)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kClean : kUsage;
  }

  if (*run) return run_command(corpus, fail_fast, skip_malformed, config);
  if (*trace) return trace_command(input, kind);
  return bench_command(sizes, taint_at, repeats);
}
