#include "graphq/graphq.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <string>
#include <string_view>

#include "ast.hpp"
#include "codegen.hpp"
#include "evaluator.hpp"
#include "generator.hpp"
#include "graph.hpp"
#include "ir_syntax.hpp"
#include "reverse.hpp"
#include "schema_mapping.hpp"

struct gq_query {
  graphq::QueryAst ast;
};
struct gq_graph {
  graphq::Graph graph;
};
struct gq_mapping {
  graphq::SchemaMapping mapping;
};
struct gq_diagnostics {
  graphq::Diagnostics items;
};

namespace {

using graphq::Diagnostics;

const std::set<std::string_view> kValidateCodes{
    "E_TYPE_MISMATCH", "E_BAD_AGGREGATE",       "E_BAD_COUNT",           "E_EMPTY_NAME",
    "E_BAD_NAME",      "E_BAD_QUALIFIER_QUERY", "E_PREDICATE_COLLISION", "E_RUNTIME_TYPE"};
const std::set<std::string_view> kUnsupportedCodes{"E_UNSUPPORTED", "E_OUT_OF_DIALECT",
                                                   "E_EVAL_UNSUPPORTED"};
const std::set<std::string_view> kIoCodes{"E_CONFIG", "E_DUP_ID", "E_DANGLING_TARGET", "E_INDEX",
                                          "E_IO", "E_INTERNAL"};

// Codes without a fixed class (E_BAD_JSON, E_BAD_VALUE) take the stage's.
gq_status classify(const Diagnostics& diags, gq_status stage) {
  gq_status worst = GQ_OK;
  for (const auto& d : diags) {
    gq_status s = gq_code_status(d.code.c_str());
    if (s == GQ_OK) s = stage;
    if (worst == GQ_OK || s < worst) worst = s;
  }
  return worst == GQ_OK ? stage : worst;
}

gq_status fail(gq_diagnostics* out, Diagnostics diags, gq_status stage) {
  gq_status s = classify(diags, stage);
  if (out) out->items.insert(out->items.end(), diags.begin(), diags.end());
  return s;
}

gq_status fail(gq_diagnostics* out, const char* code, std::string message, gq_status stage) {
  return fail(out, Diagnostics{graphq::error(code, {}, std::move(message))}, stage);
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

const graphq::SchemaMapping& mapping_or_default(const gq_mapping* m) {
  static const graphq::SchemaMapping fallback = graphq::default_mapping();
  return m ? m->mapping : fallback;
}

std::string_view view(const char* text, std::size_t len) {
  return text ? std::string_view(text, len) : std::string_view();
}

// Keeps exceptions (allocation failure, library bugs) from crossing the C boundary.
template <typename F>
gq_status guarded(gq_diagnostics* diags, F&& body) {
  try {
    return body();
  } catch (const std::bad_alloc&) {
    return fail(diags, "E_INTERNAL", "out of memory", GQ_ERR_IO);
  } catch (const std::exception& e) {
    return fail(diags, "E_INTERNAL", e.what(), GQ_ERR_IO);
  }
}

}  // namespace

extern "C" {

const char* gq_version(void) { return "0.1.0"; }

gq_status gq_dialect_from_name(const char* name, gq_dialect* out) {
  static const std::pair<std::string_view, gq_dialect> kNames[] = {
      {"ir", GQ_DIALECT_IR},         {"json", GQ_DIALECT_JSON},
      {"sparql", GQ_DIALECT_SPARQL}, {"cypher", GQ_DIALECT_CYPHER},
      {"kopl", GQ_DIALECT_KOPL},     {"lambda_dcs", GQ_DIALECT_LAMBDA_DCS},
      {"lambda-dcs", GQ_DIALECT_LAMBDA_DCS}, {"tree", GQ_DIALECT_TREE}};
  if (!name || !out) return GQ_ERR_ARGUMENT;
  for (const auto& [n, d] : kNames)
    if (n == name) {
      *out = d;
      return GQ_OK;
    }
  return GQ_ERR_ARGUMENT;
}

void gq_string_free(char* s) { std::free(s); }

gq_diagnostics* gq_diagnostics_new(void) { return new (std::nothrow) gq_diagnostics(); }
void gq_diagnostics_free(gq_diagnostics* d) { delete d; }
void gq_diagnostics_clear(gq_diagnostics* d) {
  if (d) d->items.clear();
}
size_t gq_diagnostics_count(const gq_diagnostics* d) { return d ? d->items.size() : 0; }

const char* gq_diagnostic_code(const gq_diagnostics* d, size_t i) {
  return d && i < d->items.size() ? d->items[i].code.c_str() : nullptr;
}
const char* gq_diagnostic_message(const gq_diagnostics* d, size_t i) {
  return d && i < d->items.size() ? d->items[i].message.c_str() : nullptr;
}
size_t gq_diagnostic_begin(const gq_diagnostics* d, size_t i) {
  return d && i < d->items.size() ? d->items[i].span.begin : 0;
}
size_t gq_diagnostic_end(const gq_diagnostics* d, size_t i) {
  return d && i < d->items.size() ? d->items[i].span.end : 0;
}

gq_status gq_code_status(const char* code) {
  if (!code) return GQ_OK;
  std::string_view c(code);
  if (kValidateCodes.count(c)) return GQ_ERR_VALIDATE;
  if (kUnsupportedCodes.count(c)) return GQ_ERR_UNSUPPORTED;
  if (kIoCodes.count(c)) return GQ_ERR_IO;
  if (c == "E_BAD_JSON" || c == "E_BAD_VALUE") return GQ_OK;
  return GQ_ERR_PARSE;
}

gq_mapping* gq_mapping_default(void) {
  return new (std::nothrow) gq_mapping{graphq::default_mapping()};
}

gq_status gq_mapping_load(const char* json, size_t len, gq_mapping** out, gq_diagnostics* diags) {
  if (!out) return GQ_ERR_ARGUMENT;
  *out = nullptr;
  return guarded(diags, [&] {
    auto r = graphq::load_mapping(view(json, len));
    if (!r) return fail(diags, r.take_diagnostics(), GQ_ERR_IO);
    *out = new gq_mapping{std::move(r).value()};
    return GQ_OK;
  });
}

void gq_mapping_free(gq_mapping* m) { delete m; }

gq_status gq_query_parse(gq_dialect from, const char* text, size_t len, const gq_mapping* m,
                         gq_query** out, gq_diagnostics* diags) {
  if (!out) return GQ_ERR_ARGUMENT;
  *out = nullptr;
  return guarded(diags, [&] {
    auto src = view(text, len);
    const auto& mapping = mapping_or_default(m);
    auto take = [&](graphq::Result<graphq::QueryAst> r) {
      if (!r) return fail(diags, r.take_diagnostics(), GQ_ERR_PARSE);
      *out = new gq_query{std::move(r).value()};
      return GQ_OK;
    };
    switch (from) {
      case GQ_DIALECT_IR: return take(graphq::parse_ir_text(src));
      case GQ_DIALECT_JSON: return take(graphq::from_json(src));
      case GQ_DIALECT_SPARQL: return take(graphq::parse_sparql(src, mapping));
      case GQ_DIALECT_KOPL: return take(graphq::parse_kopl(src, mapping));
      case GQ_DIALECT_CYPHER:
      case GQ_DIALECT_LAMBDA_DCS:
      case GQ_DIALECT_TREE:
        return fail(diags, "E_UNSUPPORTED", "no reader for this dialect", GQ_ERR_UNSUPPORTED);
    }
    return GQ_ERR_ARGUMENT;
  });
}

void gq_query_free(gq_query* q) { delete q; }

gq_status gq_query_check(const gq_query* q, gq_diagnostics* diags) {
  if (!q) return GQ_ERR_ARGUMENT;
  return guarded(diags, [&] {
    auto found = graphq::validate(q->ast);
    if (found.empty()) return GQ_OK;
    return fail(diags, std::move(found), GQ_ERR_VALIDATE);
  });
}

gq_status gq_query_emit(const gq_query* q, gq_dialect to, const gq_mapping* m, char** out,
                        gq_diagnostics* diags) {
  if (!q || !out) return GQ_ERR_ARGUMENT;
  *out = nullptr;
  return guarded(diags, [&] {
    const auto& mapping = mapping_or_default(m);
    graphq::Result<std::string> r = std::string();
    switch (to) {
      case GQ_DIALECT_IR:
      case GQ_DIALECT_JSON:
      case GQ_DIALECT_TREE: {
        auto found = graphq::validate(q->ast);
        if (!found.empty()) return fail(diags, std::move(found), GQ_ERR_VALIDATE);
        if (to == GQ_DIALECT_IR) r = graphq::print_ir(q->ast);
        else if (to == GQ_DIALECT_JSON) r = graphq::to_json(q->ast);
        else r = graphq::dump_tree(q->ast);
        break;
      }
      case GQ_DIALECT_SPARQL: r = graphq::emit_sparql(q->ast, mapping); break;
      case GQ_DIALECT_CYPHER: r = graphq::emit_cypher(q->ast, mapping); break;
      case GQ_DIALECT_KOPL: r = graphq::emit_kopl(q->ast, mapping); break;
      case GQ_DIALECT_LAMBDA_DCS: r = graphq::emit_lambda_dcs(q->ast, mapping); break;
      default: return GQ_ERR_ARGUMENT;
    }
    if (!r) return fail(diags, r.take_diagnostics(), GQ_ERR_VALIDATE);
    *out = dup(*r);
    return GQ_OK;
  });
}

int gq_query_depth(const gq_query* q) { return q ? graphq::depth(q->ast) : 0; }

gq_query* gq_query_generate(uint64_t seed, int max_depth) {
  try {
    graphq::Rng rng(seed);
    return new gq_query{graphq::gen_ast(rng, max_depth)};
  } catch (...) {
    return nullptr;
  }
}

gq_status gq_graph_load(const char* json, size_t len, gq_graph** out, gq_diagnostics* diags) {
  if (!out) return GQ_ERR_ARGUMENT;
  *out = nullptr;
  return guarded(diags, [&] {
    auto r = graphq::load_graph(view(json, len));
    if (!r) return fail(diags, r.take_diagnostics(), GQ_ERR_IO);
    *out = new gq_graph{std::move(r).value()};
    return GQ_OK;
  });
}

gq_graph* gq_graph_generate(uint64_t seed, int max_entities) {
  try {
    graphq::Rng rng(seed);
    return new gq_graph{graphq::gen_graph(rng, max_entities)};
  } catch (...) {
    return nullptr;
  }
}

void gq_graph_free(gq_graph* g) { delete g; }
size_t gq_graph_size(const gq_graph* g) { return g ? g->graph.size() : 0; }

char* gq_graph_to_json(const gq_graph* g) {
  if (!g) return nullptr;
  try {
    return dup(graphq::graph_to_json(g->graph, 2));
  } catch (...) {
    return nullptr;
  }
}

gq_status gq_eval(const gq_query* q, const gq_graph* g, const gq_mapping* m, gq_format format,
                  char** out, gq_diagnostics* diags) {
  if (!q || !g || !out) return GQ_ERR_ARGUMENT;
  *out = nullptr;
  return guarded(diags, [&] {
    auto r = graphq::interpret(q->ast, g->graph, mapping_or_default(m));
    if (!r) return fail(diags, r.take_diagnostics(), GQ_ERR_VALIDATE);
    *out = dup(format == GQ_FORMAT_JSON ? r->to_json() : r->to_text());
    return GQ_OK;
  });
}

gq_status gq_run_kopl(const char* program, size_t len, const gq_graph* g, const gq_mapping* m,
                      gq_format format, char** out, gq_diagnostics* diags) {
  if (!g || !out) return GQ_ERR_ARGUMENT;
  *out = nullptr;
  return guarded(diags, [&] {
    auto r = graphq::run_kopl(view(program, len), g->graph, mapping_or_default(m));
    if (!r) return fail(diags, r.take_diagnostics(), GQ_ERR_PARSE);
    *out = dup(format == GQ_FORMAT_JSON ? r->to_json() : r->to_text());
    return GQ_OK;
  });
}

}  // extern "C"
