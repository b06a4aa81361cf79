#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "notchkit/cli.hpp"

using namespace notchkit;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome notch(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = exec_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(std::string_view name) { return std::string(NOTCHKIT_CORPUS_DIR) + "/" + std::string(name); }

std::string scratch(std::string_view name, std::string_view content) {
  const auto path = std::filesystem::temp_directory_path() / ("notchkit-cli-" + std::string(name));
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 2") {
  CHECK(notch({}).code == kExitUsage);
  CHECK(notch({"frobnicate"}).code == kExitUsage);
  CHECK(notch({"metrics", corpus("forloop.notch"), "--level", "sideways"}).code == kExitUsage);
  CHECK(notch({"complete", "--prefix", "a", "--context", "color"}).code == kExitUsage);
}

TEST_CASE("help exits 0") { CHECK(notch({"--help"}).code == kExitOk); }

TEST_CASE("parse") {
  const Outcome ok = notch({"parse", corpus("hello.notch"), "--json"});
  CHECK(ok.code == kExitOk);
  CHECK(nlohmann::json::parse(ok.out)["tree"]["kind"] == "Program");
  CHECK(notch({"parse", scratch("bad.notch", "var x = ;\n")}).code == kExitFailure);
  CHECK(notch({"parse", "/nonexistent/file.notch"}).code == kExitFailure);
}

TEST_CASE("blockify and textify round-trip through a file") {
  const Outcome b = notch({"blockify", corpus("melody.notch"), "--json"});
  REQUIRE(b.code == kExitOk);
  const std::string ws = scratch("melody.json", b.out);
  const Outcome t = notch({"textify", ws});
  CHECK(t.code == kExitOk);
  CHECK(t.out.find("playNoteFor") != std::string::npos);
}

TEST_CASE("blockify refuses unbalanced text") {
  const Outcome r = notch({"blockify", scratch("open.notch", "while (true) {\n"), "--json"});
  CHECK(r.code == kExitFailure);
  CHECK(nlohmann::json::parse(r.out)["diagnostics"][0]["severity"] == "SwitchBlocking");
}

TEST_CASE("blockify svg") {
  const Outcome r = notch({"blockify", corpus("square.notch"), "--out", "svg"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("<svg", 0) == 0);
}

TEST_CASE("roundtrip") {
  CHECK(notch({"roundtrip", corpus("forloop.notch")}).code == kExitOk);
  CHECK(notch({"roundtrip", corpus("forloop.notch"), "--level", "CLAUSES"}).code == kExitOk);
  CHECK(notch({"roundtrip", scratch("open2.notch", "say((1);\n")}).code == kExitFailure);
}

TEST_CASE("run with a trace file") {
  const std::string trace = scratch("trace.jsonl", "");
  const Outcome r = notch({"run", corpus("hello.notch"), "--trace", trace});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "Hello, world!\n");
  std::ifstream in(trace);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(nlohmann::json::parse(line)["step"] == 0);
}

TEST_CASE("run failures exit 1") {
  CHECK(notch({"run", scratch("loop.notch", "while (true) {\n}\n"), "--max-steps", "50"}).code == kExitFailure);
  CHECK(notch({"run", scratch("div.notch", "say(1 / 0);\n")}).code == kExitFailure);
}

TEST_CASE("complete") {
  const Outcome r = notch({"complete", "--prefix", "rep", "--context", "cmd"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("repeat\t", 0) == 0);
  const Outcome j = notch({"complete", "--prefix", "pla", "--context", "cmd", "--json"});
  CHECK(j.code == kExitOk);
  CHECK(j.out.find("play_note") != std::string::npos);
}

TEST_CASE("metrics") {
  const Outcome r = notch({"metrics", corpus("forloop.notch"), "--json"});
  CHECK(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["lines"][0]["total"] == 17);
  CHECK(doc["chunks"]["blocks"][0]["chunks"] == 2);
  const auto clauses = nlohmann::json::parse(notch({"metrics", corpus("forloop.notch"), "--json", "--level", "clauses"}).out);
  std::size_t total = 0;
  for (const auto& b : clauses["chunks"]["blocks"]) total += b["chunks"].get<std::size_t>();
  CHECK(clauses["chunks"]["blocks"][0]["chunks"] == 4);
  CHECK(total > 4);
}

TEST_CASE("corpus") {
  CHECK(notch({"corpus", NOTCHKIT_CORPUS_DIR}).code == kExitOk);
  const auto dir = std::filesystem::temp_directory_path() / "notchkit-cli-corpus";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "broken.notch") << "repeat (3) {\n";
  CHECK(notch({"corpus", dir.string(), "--json"}).code == kExitFailure);
}

}  // TEST_SUITE
