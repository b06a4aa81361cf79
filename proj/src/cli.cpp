#include "notchkit/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "notchkit/completion.hpp"
#include "notchkit/corpus.hpp"
#include "notchkit/metrics.hpp"
#include "notchkit/projection.hpp"
#include "notchkit/runtime.hpp"
#include "notchkit/serialize.hpp"
#include "notchkit/svg.hpp"

namespace notchkit {

namespace {

struct Failure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_diagnostics(std::ostream& os, const std::string& path, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    os << path << ":" << d.span.begin << "-" << d.span.end << ": " << to_string(d.severity) << ": " << d.message
       << "\n";
  }
}

void outline(std::ostream& os, const SyntaxNode& n, int depth) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << to_string(n.kind);
  if (!n.text.empty()) {
    std::string t = n.text;
    if (t.size() > 40) t = t.substr(0, 37) + "...";
    for (char& c : t) {
      if (c == '\n') c = ' ';
    }
    os << " " << t;
  }
  os << " [" << n.span.begin << "," << n.span.end << ")\n";
  for (const auto& c : n.children) outline(os, c, depth + 1);
  for (const auto& body : n.bodies) {
    for (const auto& s : body) outline(os, s, depth + 1);
  }
}

void block_outline(std::ostream& os, const Palette& palette, const std::vector<BlockInstance>& stack, int depth) {
  for (const auto& b : stack) {
    const auto& def = palette.at(b.definition);
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "#" << b.id << " " << def.id;
    for (std::size_t i = 0; i < b.sockets.size(); ++i) {
      if (b.sockets[i].literal) os << " [" << display(*b.sockets[i].literal) << "]";
    }
    os << "\n";
    for (const auto& s : b.sockets) block_outline(os, palette, s.blocks, depth + 1);
  }
}

const std::map<std::string, ConnectorShape> kContexts = {
    {"cmd", ConnectorShape::Command}, {"num", ConnectorShape::Number},          {"str", ConnectorShape::String},
    {"bool", ConnectorShape::Boolean}, {"any", ConnectorShape::Any}, {"slot", ConnectorShape::ContainerSlot},
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

const std::map<std::string, ChunkLevel> kLevels = {{"collapsed", ChunkLevel::Collapsed},
                                                   {"clauses", ChunkLevel::Clauses}};

}  // namespace

int exec_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"notch: blocks and text tools for the Notch language", "notch"};
  app.require_subcommand(1);

  std::string palette_path;
  app.add_option("--palette", palette_path, "Palette document (default: the built-in palette)");

  std::string file;
  std::string level_name;
  bool as_json = false;
  std::string out_format = "text";
  std::size_t max_steps = kDefaultMaxSteps;
  std::string trace_path;
  std::string prefix;
  std::string context_name = "cmd";
  bool mutate = false;

  auto add_level = [&](CLI::App* sub) {
    sub->add_option("--level", level_name, "Chunk level: collapsed or clauses")
        ->check(CLI::IsMember(kLevels, CLI::ignore_case));
  };

  auto* parse_cmd = app.add_subcommand("parse", "Parse a file and show its tree and diagnostics");
  parse_cmd->add_option("file", file, "Source file")->required();
  parse_cmd->add_flag("--json", as_json, "Machine-readable output");

  auto* blockify_cmd = app.add_subcommand("blockify", "Project a file into blocks");
  blockify_cmd->add_option("file", file, "Source file")->required();
  add_level(blockify_cmd);
  blockify_cmd->add_option("--out", out_format, "Output: text, json or svg")
      ->check(CLI::IsMember({"text", "json", "svg"}));
  blockify_cmd->add_flag("--json", as_json, "Same as --out json");

  auto* textify_cmd = app.add_subcommand("textify", "Turn a saved workspace back into text");
  textify_cmd->add_option("file", file, "Workspace document")->required();

  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "Check text -> blocks -> text is byte-identical");
  roundtrip_cmd->add_option("file", file, "Source file")->required();
  add_level(roundtrip_cmd);
  roundtrip_cmd->add_flag("--json", as_json, "Machine-readable output");

  auto* run_cmd = app.add_subcommand("run", "Run a program");
  run_cmd->add_option("file", file, "Source file")->required();
  run_cmd->add_option("--max-steps", max_steps, "Step limit")->check(CLI::PositiveNumber);
  run_cmd->add_option("--trace", trace_path, "Write the trace as JSON lines to this file");
  run_cmd->add_flag("--json", as_json, "Machine-readable output");

  auto* complete_cmd = app.add_subcommand("complete", "Blocks matching a typed prefix");
  complete_cmd->add_option("--prefix", prefix, "Typed text");
  complete_cmd->add_option("--context", context_name, "Insertion site: cmd, num, str, bool, any or slot")
      ->check(CLI::IsMember(kContexts, CLI::ignore_case));
  complete_cmd->add_flag("--json", as_json, "Machine-readable output");

  auto* metrics_cmd = app.add_subcommand("metrics", "Unit counts per line and chunk counts per block");
  metrics_cmd->add_option("file", file, "Source file")->required();
  add_level(metrics_cmd);
  metrics_cmd->add_flag("--json", as_json, "Machine-readable output");

  auto* corpus_cmd = app.add_subcommand("corpus", "Round-trip (and optionally mutate) every .notch file");
  corpus_cmd->add_option("dir", file, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  corpus_cmd->add_flag("--mutate", mutate, "Also run the single-token mutation suite");
  corpus_cmd->add_flag("--json", as_json, "Machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "notch: " << e.what() << "\n";
    err << "run 'notch --help' for usage\n";
    return kExitUsage;
  }

  const bool level_given = !level_name.empty();
  const ChunkLevel level = level_given ? *parse_chunk_level(lower(level_name)) : ChunkLevel::Collapsed;
  const ConnectorShape context = kContexts.at(lower(context_name));

  try {
    const Palette custom = palette_path.empty() ? default_palette() : load_palette(read_file(palette_path));
    const Palette& palette = custom;

    if (parse_cmd->parsed()) {
      const std::string text = read_file(file);
      const ParseResult r = parse(text);
      if (as_json) {
        out << parse_result_json(r) << "\n";
      } else {
        outline(out, r.tree, 0);
        print_diagnostics(err, file, r.diagnostics);
      }
      return r.diagnostics.empty() ? kExitOk : kExitFailure;
    }

    if (blockify_cmd->parsed()) {
      if (as_json) out_format = "json";
      const std::string text = read_file(file);
      try {
        const BlockTree blocks = switch_to_blocks(palette, text, level);
        if (out_format == "json") {
          out << save_workspace(blocks, true) << "\n";
        } else if (out_format == "svg") {
          out << render_svg(palette, blocks);
        } else {
          for (const auto& island : blocks.islands) block_outline(out, palette, island.stack, 0);
        }
        return kExitOk;
      } catch (const ModeSwitchRefused& e) {
        if (out_format == "json") out << diagnostics_json(e.diagnostics()) << "\n";
        err << file << ": cannot switch to blocks\n";
        print_diagnostics(err, file, e.diagnostics());
        return kExitFailure;
      }
    }

    if (textify_cmd->parsed()) {
      const Workspace w = load_workspace(palette, read_file(file));
      out << textify(palette, w);
      return kExitOk;
    }

    if (roundtrip_cmd->parsed()) {
      const std::string text = read_file(file);
      std::vector<ChunkLevel> levels;
      if (level_given) {
        levels.push_back(level);
      } else {
        levels = {ChunkLevel::Collapsed, ChunkLevel::Clauses};
      }
      bool ok = true;
      nlohmann::json results = nlohmann::json::object();
      bool refused = false;
      for (auto l : levels) {
        bool same = false;
        try {
          same = textify(palette, switch_to_blocks(palette, text, l)) == text;
        } catch (const ModeSwitchRefused& e) {
          refused = true;
          if (!as_json) print_diagnostics(err, file, e.diagnostics());
        }
        results[std::string(to_string(l))] = same;
        ok = ok && same;
        if (!as_json) out << to_string(l) << ": " << (same ? "identical" : refused ? "refused" : "DIFFERS") << "\n";
      }
      if (as_json) {
        out << nlohmann::json{{"schema_version", kJsonSchemaVersion}, {"file", file}, {"refused", refused},
                              {"levels", results}, {"pass", ok}}
                   .dump(2)
            << "\n";
      }
      return ok ? kExitOk : kExitFailure;
    }

    if (run_cmd->parsed()) {
      const ParseResult parsed = parse(read_file(file));
      if (!parsed.diagnostics.empty()) {
        print_diagnostics(err, file, parsed.diagnostics);
        return kExitFailure;
      }
      const RunResult r = run(parsed.tree, Limits{max_steps});
      if (!trace_path.empty()) {
        std::ofstream t(trace_path, std::ios::binary);
        if (!t) throw Failure{"cannot write '" + trace_path + "'"};
        t << trace_jsonl(r.trace);
      }
      if (as_json) {
        nlohmann::json output = nlohmann::json::array();
        for (const auto& e : r.state.output) output.push_back(describe(e));
        nlohmann::json env = nlohmann::json::object();
        for (const auto& [k, v] : r.state.env) env[k] = display(v);
        nlohmann::json doc{{"schema_version", kJsonSchemaVersion}, {"steps", r.trace.size()},
                           {"output", output}, {"env", env}};
        doc["error"] = r.error ? nlohmann::json{{"kind", to_string(r.error->code())},
                                                {"step", r.error->step()},
                                                {"span", {r.error->span().begin, r.error->span().end}},
                                                {"message", r.error->what()}}
                               : nlohmann::json(nullptr);
        out << doc.dump(2) << "\n";
      } else {
        for (const auto& e : r.state.output) {
          out << (e.kind == Effect::Kind::Say ? e.text : describe(e)) << "\n";
        }
      }
      if (r.error) {
        err << file << ": " << r.error->what() << "\n";
        return kExitFailure;
      }
      return kExitOk;
    }

    if (complete_cmd->parsed()) {
      const auto hits = complete(palette, CompletionQuery{prefix, context});
      if (as_json) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto* d : hits) {
          list.push_back({{"id", d->id}, {"label", d->label_text()}, {"produces", to_string(d->produces)},
                          {"category", d->category}});
        }
        out << nlohmann::json{{"schema_version", kJsonSchemaVersion}, {"completions", list}}.dump(2) << "\n";
      } else {
        for (const auto* d : hits) out << d->id << "\t" << d->label_text() << "\n";
      }
      return kExitOk;
    }

    if (metrics_cmd->parsed()) {
      const std::string text = read_file(file);
      const auto doc = nlohmann::json::parse(metrics_json(palette, text, level));
      if (as_json) {
        out << doc.dump(2) << "\n";
      } else {
        for (const auto& l : doc["lines"]) {
          if (l["total"].get<std::size_t>() == 0) continue;
          out << "line " << l["line"].get<std::size_t>() << ": " << l["total"].get<std::size_t>() << " units ("
              << l["words"].get<std::size_t>() << " words, " << l["punctuation"].get<std::size_t>()
              << " punctuation, " << l["numbers"].get<std::size_t>() << " numbers)"
              << (l["over_threshold"].get<bool>() ? "  > 7" : "") << "\n";
        }
        if (!doc["chunks"].is_null()) {
          for (const auto& b : doc["chunks"]["blocks"]) {
            out << "block #" << b["instance_id"].get<InstanceId>() << " " << b["definition_id"].get<std::string>()
                << ": " << b["chunks"].get<std::size_t>() << " chunks\n";
          }
        }
      }
      return doc["chunks"].is_null() ? kExitFailure : kExitOk;
    }

    if (corpus_cmd->parsed()) {
      const CorpusReport r = corpus_report(palette, file, CorpusOptions{mutate});
      if (as_json) {
        out << corpus_json(r) << "\n";
      } else {
        for (const auto& f : r.files) {
          out << (f.roundtrip_pass() ? "ok      " : f.refused ? "REFUSED " : "FAIL    ") << f.path;
          if (mutate) out << "  mutations " << f.mutations_ok << "/" << f.mutations;
          out << "\n";
          for (const auto& m : f.failures) {
            out << "    offset " << m.mutation.offset << " '" << m.mutation.original << "': " << m.reason << "\n";
          }
        }
        out << "round trip: " << r.roundtrip_pass << "/" << r.files_total << " files\n";
        if (mutate) out << "mutations: " << r.mutations_ok << "/" << r.mutations << " as expected\n";
      }
      return r.all_pass() ? kExitOk : kExitFailure;
    }
  } catch (const Failure& f) {
    err << "notch: " << f.message << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "notch: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace notchkit
