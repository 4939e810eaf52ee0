#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "ctxaudit/harness.hpp"
#include "support.hpp"

using namespace ctxaudit;
using nlohmann::json;

namespace {

std::string record_line(const std::string& id, const std::string& label, const std::string& kind,
                        const std::string& content, const json& params, const char* expected = nullptr) {
  json doc{{"id", id},
           {"label", label},
           {"category", kind == "shell" ? "shell" : "html"},
           {"kind", kind},
           {"request_params", params},
           {kind == "shell" ? "command_b64" : "response_body_b64", base64_encode(content)}};
  if (expected) doc["expected"] = expected;
  return doc.dump();
}

std::size_t count_lines(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

CorpusLoad load_file(const std::string& name) {
  std::ifstream in(std::string(CA_CORPUS_DIR) + "/" + name);
  REQUIRE(in.good());
  return load_corpus(in);
}

}  // namespace

TEST_CASE("base64 round trips arbitrary bytes") {
  for (const std::string& value : {std::string(), std::string("f"), std::string("fo"), std::string("foo"),
                                  std::string("\0\xff\x10 binary", 10)}) {
    CHECK(base64_decode(base64_encode(value)) == value);
  }
  CHECK(base64_encode("foobar") == "Zm9vYmFy");
  CHECK(base64_decode("Zm9vYg==") == "foob");
  CHECK_THROWS(base64_decode("Zm9v!"));
}

TEST_CASE("corpus records parse with their labels and overrides") {
  const CorpusRecord record =
      parse_corpus_record(record_line("r1", "malicious", "shell", "whoami", {{"cmd", "whoami"}}, "benign"), 4);
  CHECK(record.id == "r1");
  CHECK(record.malicious);
  CHECK(record.kind == ContentKind::ShellCommand);
  CHECK(record.content == "whoami");
  CHECK(record.expected == Decision::Benign);
  CHECK(record.line == 4);
  REQUIRE(record.params.size() == 1);
  CHECK(record.params[0].name == "cmd");

  CHECK(parse_corpus_record(record_line("r2", "malicious", "html", "<b>", json::object())).expected ==
        Decision::Malicious);
}

TEST_CASE("malformed corpus lines are reported with line numbers") {
  std::istringstream in(record_line("ok", "benign", "html", "<p>hi</p>", {{"q", "hi!"}}) + "\n" +
                        "\n"
                        "{not json}\n" +
                        R"({"label": "maybe", "category": "html", "kind": "html", "response_body_b64": ""})" + "\n" +
                        R"({"label": "benign", "category": "sql", "kind": "html", "response_body_b64": ""})" + "\n" +
                        R"({"label": "benign", "category": "html", "kind": "html"})" + "\n");
  const CorpusLoad load = load_corpus(in);
  CHECK(load.records.size() == 1);
  REQUIRE(load.errors.size() == 4);
  CHECK(load.errors[0].line == 3);
  CHECK(load.errors[1].line == 4);
  CHECK(load.errors[2].line == 5);
  CHECK(load.errors[3].line == 6);
}

TEST_CASE("run_corpus counts flags, misses and false positives per category") {
  std::istringstream in(
      record_line("hit", "malicious", "html", "<p><b>x</b></p>", {{"q", "<b>x</b>"}}) + "\n" +
      record_line("miss", "malicious", "html", "<p>plain text</p>", {{"q", "plain text"}}) + "\n" +
      record_line("fp", "benign", "shell", "grep x; ls", {{"q", "x; ls"}}) + "\n" +
      record_line("quiet", "benign", "shell", "grep Auditor", {{"q", "Auditor"}}) + "\n");
  const CorpusLoad load = load_corpus(in);
  REQUIRE(load.errors.empty());
  const CorpusMetrics metrics = run_corpus(load.records);
  CHECK(metrics.total == 4);
  CHECK(metrics.flagged == 2);
  CHECK(metrics.missed == 1);
  CHECK(metrics.false_positives == 1);
  CHECK_FALSE(metrics.clean());
  CHECK(metrics.by_category.at("html").missed == 1);
  CHECK(metrics.by_category.at("shell").false_positives == 1);

  const CorpusMetrics fast = run_corpus(load.records, {}, true);
  CHECK(fast.results.size() == 2);

  const std::string text = format_metrics(metrics);
  CHECK(text.find("FAIL miss") != std::string::npos);
  CHECK(text.find("total=4 flagged=2 missed=1 false_positives=1 faults=0") != std::string::npos);
}

TEST_CASE("an empty corpus yields zero metrics") {
  const CorpusMetrics metrics = run_corpus({});
  CHECK(metrics.total == 0);
  CHECK(metrics.flagged == 0);
  CHECK(metrics.missed == 0);
  CHECK(metrics.clean());
}

TEST_CASE("metrics are reproducible") {
  const CorpusLoad load = load_file("exploits.jsonl");
  REQUIRE(load.errors.empty());
  const std::string first = format_metrics(run_corpus(load.records));
  CHECK(format_metrics(run_corpus(load.records)) == first);
}

TEST_CASE("bundled corpora match their labels") {
  for (const char* name : {"exploits.jsonl", "benign.jsonl", "limitations.jsonl"}) {
    const CorpusLoad load = load_file(name);
    CHECK(load.errors.empty());
    const CorpusMetrics metrics = run_corpus(load.records);
    CHECK_MESSAGE(metrics.clean(), name << "\n" << format_metrics(metrics));
  }
}

TEST_CASE("trace dumps list one line per byte with events") {
  const std::string dump = dump_trace("<b>", ContentKind::HtmlDocument);
  CHECK(count_lines(dump) == 4);
  CHECK(dump.rfind("offset\tbyte\tstate\tevents\n", 0) == 0);
  CHECK(dump.find("1\tb\tHTML:Tag_Name\tHTML:Tag_Open -> HTML:Tag_Name\n") != std::string::npos);
  CHECK(dump.find("2\t>\tHTML:HTML_Start\tHTML:Tag_Name -> HTML:HTML_Start\n") != std::string::npos);

  CHECK(count_lines(dump_trace("", ContentKind::HtmlDocument)) == 1);

  const std::string script = dump_trace(test::script_string_document("admin"), ContentKind::HtmlDocument);
  CHECK(script.find("51\ta\tJS:Quoted_Literal\t\n") != std::string::npos);
  CHECK(script.find("55\tn\tJS:Quoted_Literal\t\n") != std::string::npos);
}

TEST_CASE("bench documents have the requested size and parse cleanly") {
  for (std::size_t size : {0u, 1u, 10u, 100u, 4096u, 65536u}) {
    const Bytes doc = make_bench_document(size);
    CHECK(doc.size() == size);
  }
  const Bytes doc = make_bench_document(65536);
  const ParseTrace trace = run_automaton(doc, spec_for(ContentKind::HtmlDocument));
  std::size_t errors = 0;
  for (const TransitionEvent& e : trace.events) errors += e.is_error;
  CHECK(errors == 0);
  CHECK(state_name(trace.labels.back()) == "HTML_Start");
}

TEST_CASE("detection stops at the taint") {
  const std::size_t sizes[] = {1u << 20};
  const auto rows = bench(sizes, 0.1, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].size == (1u << 20));
  CHECK(rows[0].steps < rows[0].full_steps / 5);
  CHECK(rows[0].full_steps <= 8 * rows[0].size);

  const std::size_t empty[] = {0u};
  const auto zero = bench(empty, 1.0, 1);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].steps == 0);
}
