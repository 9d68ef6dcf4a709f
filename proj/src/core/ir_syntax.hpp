#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ast.hpp"
#include "result.hpp"

namespace graphq {

enum class TokenKind { MarkerOpen, MarkerClose, Keyword, Word };
enum class MarkerTag { ES, E, C, A, R, Q, V };

struct Token {
  TokenKind kind = TokenKind::Word;
  std::optional<MarkerTag> tag;
  std::string text;
  Span span;  // code-point offsets

  bool operator==(const Token&) const = default;
};

std::string_view tag_name(MarkerTag tag);

// Splits IR text into tokens. Total: never fails. Marker text is split out
// of surrounding characters, so "(<ES>" yields "(" and "<ES>". Between a
// payload marker (everything but ES) and the next marker, every piece is a
// Word, including keywords.
std::vector<Token> tokenize(std::string_view text);

Result<QueryAst> parse_ir(const std::vector<Token>& tokens);
Result<QueryAst> parse_ir_text(std::string_view text);

// Canonical text of normalize(ast): explicit directions, no redundant
// wrappers, appositives spelled as plain constraints.
std::string print_ir(const QueryAst& ast);

// Prints the AST exactly as built; parse_ir_text(print_ir_surface(a)) == a.
std::string print_ir_surface(const QueryAst& ast);

}  // namespace graphq
