#ifndef GRAPHQ_GRAPHQ_H
#define GRAPHQ_GRAPHQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(GRAPHQ_BUILDING_LIBRARY)
#define GQ_API __attribute__((visibility("default")))
#else
#define GQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum gq_status {
  GQ_OK = 0,
  GQ_ERR_PARSE = 1,
  GQ_ERR_VALIDATE = 2,
  GQ_ERR_UNSUPPORTED = 3,
  GQ_ERR_IO = 4,
  GQ_ERR_ARGUMENT = 5
} gq_status;

typedef enum gq_dialect {
  GQ_DIALECT_IR = 0,
  GQ_DIALECT_JSON = 1, /* AST as JSON */
  GQ_DIALECT_SPARQL = 2,
  GQ_DIALECT_CYPHER = 3,
  GQ_DIALECT_KOPL = 4,
  GQ_DIALECT_LAMBDA_DCS = 5,
  GQ_DIALECT_TREE = 6 /* indented debug dump, output only */
} gq_dialect;

typedef enum gq_format { GQ_FORMAT_TEXT = 0, GQ_FORMAT_JSON = 1 } gq_format;

typedef struct gq_query gq_query;
typedef struct gq_graph gq_graph;
typedef struct gq_mapping gq_mapping;
typedef struct gq_diagnostics gq_diagnostics;

GQ_API const char* gq_version(void);

/* Parses "ir", "json", "sparql", "cypher", "kopl", "lambda_dcs", "tree". */
GQ_API gq_status gq_dialect_from_name(const char* name, gq_dialect* out);

/* Strings returned through char** are owned by the caller. */
GQ_API void gq_string_free(char* s);

/* Diagnostics collector. Every call that takes one appends to it; pass NULL
   to discard. */
GQ_API gq_diagnostics* gq_diagnostics_new(void);
GQ_API void gq_diagnostics_free(gq_diagnostics* d);
GQ_API void gq_diagnostics_clear(gq_diagnostics* d);
GQ_API size_t gq_diagnostics_count(const gq_diagnostics* d);
/* Accessors return NULL / 0 when i is out of range. Pointers stay valid until
   the collector is cleared or freed. */
GQ_API const char* gq_diagnostic_code(const gq_diagnostics* d, size_t i);
GQ_API const char* gq_diagnostic_message(const gq_diagnostics* d, size_t i);
GQ_API size_t gq_diagnostic_begin(const gq_diagnostics* d, size_t i);
GQ_API size_t gq_diagnostic_end(const gq_diagnostics* d, size_t i);
/* Status class of a diagnostic code, e.g. E_UNSUPPORTED -> GQ_ERR_UNSUPPORTED. */
GQ_API gq_status gq_code_status(const char* code);

GQ_API gq_mapping* gq_mapping_default(void);
GQ_API gq_status gq_mapping_load(const char* json, size_t len, gq_mapping** out,
                                 gq_diagnostics* diags);
GQ_API void gq_mapping_free(gq_mapping* m);

/* from: IR, JSON, SPARQL or KOPL. The reverse parsers need a mapping; NULL
   means the default one. */
GQ_API gq_status gq_query_parse(gq_dialect from, const char* text, size_t len,
                                const gq_mapping* m, gq_query** out, gq_diagnostics* diags);
GQ_API void gq_query_free(gq_query* q);
/* Semantic checks only; the query was already well-formed enough to parse. */
GQ_API gq_status gq_query_check(const gq_query* q, gq_diagnostics* diags);
GQ_API gq_status gq_query_emit(const gq_query* q, gq_dialect to, const gq_mapping* m,
                               char** out, gq_diagnostics* diags);
GQ_API int gq_query_depth(const gq_query* q);
/* Deterministic in seed. max_depth below 1 is treated as 1. */
GQ_API gq_query* gq_query_generate(uint64_t seed, int max_depth);

GQ_API gq_status gq_graph_load(const char* json, size_t len, gq_graph** out,
                               gq_diagnostics* diags);
GQ_API gq_graph* gq_graph_generate(uint64_t seed, int max_entities);
GQ_API void gq_graph_free(gq_graph* g);
GQ_API size_t gq_graph_size(const gq_graph* g);
GQ_API char* gq_graph_to_json(const gq_graph* g);

/* Evaluates the query directly over the graph. */
GQ_API gq_status gq_eval(const gq_query* q, const gq_graph* g, const gq_mapping* m,
                         gq_format format, char** out, gq_diagnostics* diags);
/* Executes a KoPL program over the graph. */
GQ_API gq_status gq_run_kopl(const char* program, size_t len, const gq_graph* g,
                             const gq_mapping* m, gq_format format, char** out,
                             gq_diagnostics* diags);

#ifdef __cplusplus
}
#endif

#endif
