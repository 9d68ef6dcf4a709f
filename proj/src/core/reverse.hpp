#pragma once

#include <string_view>

#include "ast.hpp"
#include "result.hpp"
#include "schema_mapping.hpp"

namespace graphq {

// Readers for the generated dialects. They accept the shapes the emitters
// produce and return the normalized AST, so for a supported query
// parse_sparql(emit_sparql(q)) == normalize(q). Anything outside that subset
// is E_OUT_OF_DIALECT; predicates no label maps to are E_UNKNOWN_PREDICATE.
// Spans are byte offsets into the input.
Result<QueryAst> parse_sparql(std::string_view text, const SchemaMapping& mapping);
Result<QueryAst> parse_kopl(std::string_view text, const SchemaMapping& mapping);

}  // namespace graphq
