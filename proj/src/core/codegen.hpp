#pragma once

#include <string>

#include "ast.hpp"
#include "result.hpp"
#include "schema_mapping.hpp"

namespace graphq {

enum class Dialect { Sparql, Cypher, Kopl, LambdaDcs };

// Every emitter validates and normalizes its input first, so validation
// diagnostics come back unchanged. Constructs a backend cannot express are
// reported as E_UNSUPPORTED.
Result<std::string> emit_sparql(const QueryAst& ast, const SchemaMapping& mapping);
Result<std::string> emit_cypher(const QueryAst& ast, const SchemaMapping& mapping);
Result<std::string> emit_kopl(const QueryAst& ast, const SchemaMapping& mapping);
Result<std::string> emit_lambda_dcs(const QueryAst& ast, const SchemaMapping& mapping);

Result<std::string> emit(Dialect dialect, const QueryAst& ast, const SchemaMapping& mapping);

// Double-quoted string literal with backslash escapes for '"' and '\'.
std::string quote_string(std::string_view text);

}  // namespace graphq
