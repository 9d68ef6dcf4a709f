#pragma once

// Internal helpers shared by the emitter implementations.

#include <string>

#include "ast.hpp"
#include "overloaded.hpp"
#include "result.hpp"

namespace graphq {

struct EmitError {
  std::string code;
  std::string message;
};

// Validates, normalizes, then runs `body`; an EmitError becomes a diagnostic.
template <typename F>
Result<std::string> run_emitter(const QueryAst& ast, F body) {
  auto diags = validate(ast);
  if (!diags.empty()) return diags;
  try {
    return body(normalize(ast));
  } catch (const EmitError& e) {
    return error(e.code, Span{0, 0}, e.message);
  }
}

}  // namespace graphq
