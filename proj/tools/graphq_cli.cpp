// graphq: parse, check, compile, transpile, evaluate and generate IR queries.
// Input is read line by line; each non-empty line is one query. Lines that
// start with '{' are taken as AST JSON regardless of --from.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "graphq/graphq.h"

namespace {

struct Options {
  std::string input = "-";
  std::string output;
  std::string from = "ir";
  std::string to;
  std::string mapping_path;
  std::string graph_path;
  std::string format = "text";
  std::uint64_t seed = 0;
  int depth = 3;
  int count = 1;
  int entities = 20;
};

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using QueryPtr = std::unique_ptr<gq_query, Deleter<gq_query, gq_query_free>>;
using GraphPtr = std::unique_ptr<gq_graph, Deleter<gq_graph, gq_graph_free>>;
using MappingPtr = std::unique_ptr<gq_mapping, Deleter<gq_mapping, gq_mapping_free>>;
using DiagsPtr = std::unique_ptr<gq_diagnostics, Deleter<gq_diagnostics, gq_diagnostics_free>>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  gq_string_free(s);
  return out;
}

class Runner {
 public:
  Runner(const Options& opt, std::ostream& out) : opt_(opt), out_(out), diags_(gq_diagnostics_new()) {}

  // Writes pending diagnostics to stderr, prefixed with the input line.
  void report(std::size_t line) {
    for (std::size_t i = 0; i < gq_diagnostics_count(diags_.get()); ++i) {
      std::cerr << "error[" << gq_diagnostic_code(diags_.get(), i) << "] ";
      if (line) std::cerr << "line " << line << ", ";
      std::cerr << gq_diagnostic_begin(diags_.get(), i) << ".."
                << gq_diagnostic_end(diags_.get(), i) << ": "
                << gq_diagnostic_message(diags_.get(), i) << "\n";
    }
    gq_diagnostics_clear(diags_.get());
  }

  int io_error(const std::string& message) {
    std::cerr << "error[E_IO] " << message << "\n";
    return GQ_ERR_IO;
  }

  int dialect(const std::string& name, gq_dialect* out) {
    if (gq_dialect_from_name(name.c_str(), out) == GQ_OK) return GQ_OK;
    std::cerr << "error[E_CONFIG] unknown dialect '" << name << "'\n";
    return GQ_ERR_IO;
  }

  int load_mapping() {
    if (opt_.mapping_path.empty()) {
      mapping_.reset(gq_mapping_default());
      return GQ_OK;
    }
    std::string text;
    if (!slurp(opt_.mapping_path, text)) return io_error("cannot read " + opt_.mapping_path);
    gq_mapping* m = nullptr;
    int s = gq_mapping_load(text.data(), text.size(), &m, diags_.get());
    mapping_.reset(m);
    report(0);
    return s;
  }

  int load_graph() {
    std::string text;
    if (!slurp(opt_.graph_path, text)) return io_error("cannot read " + opt_.graph_path);
    gq_graph* g = nullptr;
    int s = gq_graph_load(text.data(), text.size(), &g, diags_.get());
    graph_.reset(g);
    report(0);
    return s;
  }

  // Calls `per_line(text, line)` for every non-empty input line. The exit
  // status is that of the first failing line.
  template <typename F>
  int each_line(F&& per_line) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (opt_.input != "-") {
      file.open(opt_.input);
      if (!file) return io_error("cannot read " + opt_.input);
      in = &file;
    }
    int status = GQ_OK;
    std::string text;
    for (std::size_t line = 1; std::getline(*in, text); ++line) {
      if (!text.empty() && text.back() == '\r') text.pop_back();
      if (text.find_first_not_of(" \t") == std::string::npos) continue;
      int s = per_line(text, line);
      report(line);
      if (status == GQ_OK) status = s;
    }
    return status;
  }

  int parse(const std::string& text, gq_dialect from, QueryPtr& q) {
    if (text.front() == '{') from = GQ_DIALECT_JSON;
    gq_query* raw = nullptr;
    int s = gq_query_parse(from, text.data(), text.size(), mapping_.get(), &raw, diags_.get());
    q.reset(raw);
    return s;
  }

  int emit(const gq_query* q, gq_dialect to) {
    char* raw = nullptr;
    int s = gq_query_emit(q, to, mapping_.get(), &raw, diags_.get());
    if (s == GQ_OK) out_ << take_string(raw) << "\n";
    return s;
  }

  int translate(const std::string& from_name, const std::string& to_name) {
    gq_dialect from, to;
    if (int s = dialect(from_name, &from)) return s;
    if (int s = dialect(to_name, &to)) return s;
    if (int s = load_mapping()) return s;
    return each_line([&](const std::string& text, std::size_t) {
      QueryPtr q;
      if (int s = parse(text, from, q)) return s;
      return emit(q.get(), to);
    });
  }

  int check() {
    gq_dialect from;
    if (int s = dialect(opt_.from, &from)) return s;
    if (int s = load_mapping()) return s;
    return each_line([&](const std::string& text, std::size_t) {
      QueryPtr q;
      int s = parse(text, from, q);
      if (s == GQ_OK) s = gq_query_check(q.get(), diags_.get());
      out_ << (s == GQ_OK ? "ok" : "error") << "\n";
      return s;
    });
  }

  int eval() {
    gq_dialect from;
    if (int s = dialect(opt_.from, &from)) return s;
    if (int s = load_mapping()) return s;
    if (int s = load_graph()) return s;
    gq_format format = opt_.format == "json" ? GQ_FORMAT_JSON : GQ_FORMAT_TEXT;
    return each_line([&](const std::string& text, std::size_t) {
      char* raw = nullptr;
      int s;
      if (from == GQ_DIALECT_KOPL && text.front() != '{') {
        // Programs run on the KoPL executor, not through the AST.
        s = gq_run_kopl(text.data(), text.size(), graph_.get(), mapping_.get(), format, &raw,
                        diags_.get());
      } else {
        QueryPtr q;
        if ((s = parse(text, from, q))) return s;
        s = gq_eval(q.get(), graph_.get(), mapping_.get(), format, &raw, diags_.get());
      }
      if (s == GQ_OK) out_ << take_string(raw) << "\n";
      return s;
    });
  }

  int gen() {
    gq_dialect to;
    if (int s = dialect(opt_.to.empty() ? "ir" : opt_.to, &to)) return s;
    if (int s = load_mapping()) return s;
    int status = GQ_OK;
    for (int i = 0; i < opt_.count; ++i) {
      QueryPtr q(gq_query_generate(opt_.seed + static_cast<std::uint64_t>(i), opt_.depth));
      if (!q) return io_error("generation failed");
      int s = emit(q.get(), to);
      report(0);
      if (status == GQ_OK) status = s;
    }
    return status;
  }

  int gen_graph() {
    GraphPtr g(gq_graph_generate(opt_.seed, opt_.entities));
    if (!g) return io_error("generation failed");
    out_ << take_string(gq_graph_to_json(g.get())) << "\n";
    return GQ_OK;
  }

 private:
  static bool slurp(const std::string& path, std::string& out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    std::ostringstream ss;
    ss << f.rdbuf();
    out = ss.str();
    return true;
  }

  const Options& opt_;
  std::ostream& out_;
  DiagsPtr diags_;
  MappingPtr mapping_;
  GraphPtr graph_;
};

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"GraphQ IR compiler toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gq_version());

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", opt.input, "Input file, '-' for standard input");
    sub->add_option("-o,--output", opt.output, "Write results to this file");
    sub->add_option("--mapping", opt.mapping_path, "Schema mapping JSON");
  };
  const std::vector<std::string> readers{"ir", "json", "sparql", "kopl"};
  const std::vector<std::string> writers{"ir", "json", "tree", "sparql", "cypher", "kopl",
                                         "lambda_dcs"};

  auto* parse = app.add_subcommand("parse", "Parse queries and print their AST");
  common(parse);
  parse->add_option("--from", opt.from, "Input dialect")->check(CLI::IsMember(readers));
  parse->add_option("--format", opt.format, "text (tree) or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* check = app.add_subcommand("check", "Parse and validate queries");
  common(check);
  check->add_option("--from", opt.from, "Input dialect")->check(CLI::IsMember(readers));

  auto* compile = app.add_subcommand("compile", "Compile IR to a target language");
  common(compile);
  compile->add_option("--to", opt.to, "Target dialect")->required()->check(CLI::IsMember(writers));

  auto* transpile = app.add_subcommand("transpile", "Translate between query languages");
  common(transpile);
  transpile->add_option("--from", opt.from, "Input dialect")->required()->check(CLI::IsMember(readers));
  transpile->add_option("--to", opt.to, "Target dialect")->required()->check(CLI::IsMember(writers));

  auto* eval = app.add_subcommand("eval", "Evaluate queries over a graph");
  common(eval);
  eval->add_option("--from", opt.from, "Input dialect; kopl runs the program executor")
      ->check(CLI::IsMember(readers));
  eval->add_option("--graph", opt.graph_path, "Graph JSON")->required();
  eval->add_option("--format", opt.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* gen = app.add_subcommand("gen", "Generate random well-formed queries");
  gen->add_option("-o,--output", opt.output, "Write results to this file");
  gen->add_option("--mapping", opt.mapping_path, "Schema mapping JSON");
  gen->add_option("--seed", opt.seed, "First seed; query i uses seed + i");
  gen->add_option("--depth", opt.depth, "Maximum depth")->check(CLI::PositiveNumber);
  gen->add_option("--count", opt.count, "Number of queries")->check(CLI::NonNegativeNumber);
  gen->add_option("--to", opt.to, "Output dialect (default ir)")->check(CLI::IsMember(writers));
  gen->add_option("--format", opt.format, "json is shorthand for --to json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* gen_graph = app.add_subcommand("gen-graph", "Generate a random graph as JSON");
  gen_graph->add_option("-o,--output", opt.output, "Write results to this file");
  gen_graph->add_option("--seed", opt.seed, "Seed");
  gen_graph->add_option("--entities", opt.entities, "Maximum number of entities")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : GQ_ERR_IO;
  }

  std::ofstream file;
  if (!opt.output.empty()) {
    file.open(opt.output);
    if (!file) {
      std::cerr << "error[E_IO] cannot write " << opt.output << "\n";
      return GQ_ERR_IO;
    }
  }
  std::ostream& out = opt.output.empty() ? std::cout : file;
  Runner run(opt, out);

  if (*parse) return run.translate(opt.from, opt.format == "json" ? "json" : "tree");
  if (*check) return run.check();
  if (*compile) return run.translate("ir", opt.to);
  if (*transpile) return run.translate(opt.from, opt.to);
  if (*eval) return run.eval();
  if (*gen) {
    if (opt.to.empty() && opt.format == "json") opt.to = "json";
    return run.gen();
  }
  if (*gen_graph) return run.gen_graph();
  return GQ_ERR_ARGUMENT;
}
