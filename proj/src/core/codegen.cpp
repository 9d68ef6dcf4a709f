#include "codegen.hpp"

namespace graphq {

std::string quote_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

Result<std::string> emit(Dialect dialect, const QueryAst& ast, const SchemaMapping& mapping) {
  switch (dialect) {
    case Dialect::Sparql: return emit_sparql(ast, mapping);
    case Dialect::Cypher: return emit_cypher(ast, mapping);
    case Dialect::Kopl: return emit_kopl(ast, mapping);
    case Dialect::LambdaDcs: return emit_lambda_dcs(ast, mapping);
  }
  return error("E_UNSUPPORTED", Span{0, 0}, "unknown dialect");
}

}  // namespace graphq
