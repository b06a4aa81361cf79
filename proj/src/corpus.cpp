#include "notchkit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "notchkit/projection.hpp"
#include "notchkit/serialize.hpp"

namespace notchkit {

namespace {

bool simple_statement(NodeKind k) {
  return k == NodeKind::VarDecl || k == NodeKind::Assign || k == NodeKind::CallStmt;
}

/// Byte ranges whose tokens are statement-local.
void local_ranges(const SyntaxNode& n, std::vector<Span>& out) {
  if (simple_statement(n.kind) || is_expression(n.kind)) {
    out.push_back(n.span);
    return;
  }
  for (const auto& c : n.children) local_ranges(c, out);
  for (const auto& body : n.bodies) {
    for (const auto& s : body) local_ranges(s, out);
  }
}

bool is_delimiter(const Token& t) {
  return t.kind == TokenKind::Punct && (t.lexeme == "(" || t.lexeme == ")" || t.lexeme == "{" || t.lexeme == "}");
}

}  // namespace

bool delimiters_balanced(std::string_view text) {
  std::string stack;
  for (const auto& t : tokenize(text)) {
    if (t.kind != TokenKind::Punct) continue;
    if (t.lexeme == "(" || t.lexeme == "{") {
      stack.push_back(t.lexeme[0]);
    } else if (t.lexeme == ")" || t.lexeme == "}") {
      const char open = t.lexeme == ")" ? '(' : '{';
      if (stack.empty() || stack.back() != open) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

std::vector<Mutation> mutation_suite(std::string_view text) {
  const ParseResult parsed = parse(text);
  std::vector<Span> ranges;
  local_ranges(parsed.tree, ranges);
  std::vector<Mutation> out;
  for (const auto& t : tokenize(text)) {
    if (t.is_trivia()) continue;
    const bool local = std::any_of(ranges.begin(), ranges.end(), [&](const Span& r) {
      return r.begin <= t.span.begin && t.span.end <= r.end;
    });
    const std::string before(text.substr(0, t.span.begin));
    const std::string after(text.substr(t.span.end));
    if (local) out.push_back(Mutation{Mutation::Kind::Replace, t.span.begin, t.lexeme, before + "@" + after});
    if (is_delimiter(t)) out.push_back(Mutation{Mutation::Kind::Delete, t.span.begin, t.lexeme, before + after});
  }
  return out;
}

bool round_trips(const Palette& palette, std::string_view text, ChunkLevel level) {
  const ParseResult parsed = parse(text);
  if (parsed.has_switch_blocking()) return false;
  return textify(palette, blockify(palette, parsed.tree, level)) == text;
}

std::size_t error_block_count(const Workspace& w) {
  std::size_t n = 0;
  auto visit = [&](auto&& self, const std::vector<BlockInstance>& stack) -> void {
    for (const auto& b : stack) {
      if (b.definition == kErrorStatementBlock || b.definition == kErrorExpressionBlock) ++n;
      for (const auto& s : b.sockets) self(self, s.blocks);
    }
  };
  for (const auto& island : w.islands) visit(visit, island.stack);
  return n;
}

FileReport check_source(const Palette& palette, std::string path, std::string_view text, bool mutate) {
  FileReport r;
  r.path = std::move(path);
  r.units = count_units(text);
  const ParseResult parsed = parse(text);
  r.diagnostics = parsed.diagnostics.size();
  if (parsed.has_switch_blocking()) {
    r.refused = true;
    return r;
  }
  const BlockTree blocks = blockify(palette, parsed.tree, ChunkLevel::Collapsed);
  r.error_blocks = error_block_count(blocks);
  r.roundtrip_collapsed = textify(palette, blocks) == text;
  r.roundtrip_clauses = round_trips(palette, text, ChunkLevel::Clauses);
  if (!mutate) return r;

  for (auto& m : mutation_suite(text)) {
    ++r.mutations;
    std::string reason;
    if (!delimiters_balanced(m.text)) {
      try {
        switch_to_blocks(palette, m.text, ChunkLevel::Collapsed);
        reason = "unbalanced text was not refused";
      } catch (const ModeSwitchRefused&) {
        ++r.refusals;
      }
    } else {
      try {
        for (auto level : {ChunkLevel::Collapsed, ChunkLevel::Clauses}) {
          const BlockTree mb = switch_to_blocks(palette, m.text, level);
          const std::size_t errors = error_block_count(mb);
          if (level == ChunkLevel::Collapsed) ++r.error_block_histogram[errors];
          if (errors == 0) {
            reason = "no error block";
          } else if (textify(palette, mb) != m.text) {
            reason = "does not round-trip at " + std::string(to_string(level));
          }
          if (!reason.empty()) break;
        }
      } catch (const ModeSwitchRefused&) {
        reason = "balanced text was refused";
      }
    }
    if (reason.empty()) {
      ++r.mutations_ok;
    } else {
      r.failures.push_back(MutationFailure{std::move(m), std::move(reason)});
    }
  }
  return r;
}

CorpusReport corpus_report(const Palette& palette, const std::filesystem::path& dir, CorpusOptions options) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (auto it = std::filesystem::recursive_directory_iterator(dir, ec);
       !ec && it != std::filesystem::recursive_directory_iterator(); it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".notch") files.push_back(it->path());
  }
  if (ec) throw std::filesystem::filesystem_error("cannot list corpus", dir, ec);
  std::sort(files.begin(), files.end());

  CorpusReport report;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    FileReport r;
    if (!in) {
      r.path = f.string();
      r.io_error = "cannot read file";
    } else {
      std::ostringstream buf;
      buf << in.rdbuf();
      r = check_source(palette, f.string(), buf.str(), options.mutate);
    }
    ++report.files_total;
    report.roundtrip_pass += r.roundtrip_pass();
    report.mutations += r.mutations;
    report.mutations_ok += r.mutations_ok;
    report.files.push_back(std::move(r));
  }
  return report;
}

std::string corpus_json(const CorpusReport& report) {
  using nlohmann::json;
  json files = json::array();
  for (const auto& f : report.files) {
    json j;
    j["path"] = f.path;
    if (!f.io_error.empty()) j["io_error"] = f.io_error;
    j["refused"] = f.refused;
    j["roundtrip"] = json{{"collapsed", f.roundtrip_collapsed}, {"clauses", f.roundtrip_clauses}, {"pass", f.roundtrip_pass()}};
    j["diagnostics"] = f.diagnostics;
    j["error_blocks"] = f.error_blocks;
    j["units"] = json{{"words", f.units.words}, {"punctuation", f.units.punctuation}, {"numbers", f.units.numbers}, {"total", f.units.total}};
    json hist = json::object();
    for (const auto& [errors, count] : f.error_block_histogram) hist[std::to_string(errors)] = count;
    json failures = json::array();
    for (const auto& m : f.failures) {
      failures.push_back(json{{"kind", m.mutation.kind == Mutation::Kind::Replace ? "replace" : "delete"},
                              {"offset", m.mutation.offset},
                              {"token", m.mutation.original},
                              {"reason", m.reason}});
    }
    j["mutations"] = json{{"total", f.mutations}, {"ok", f.mutations_ok}, {"refused", f.refusals},
                          {"error_block_histogram", std::move(hist)}, {"failures", std::move(failures)}};
    files.push_back(std::move(j));
  }
  json doc;
  doc["schema_version"] = kJsonSchemaVersion;
  doc["files"] = std::move(files);
  doc["aggregate"] = json{{"files", report.files_total},
                          {"roundtrip_pass", report.roundtrip_pass},
                          {"mutations", report.mutations},
                          {"mutations_ok", report.mutations_ok}};
  return doc.dump(2);
}

}  // namespace notchkit
