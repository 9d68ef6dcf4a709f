#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "result.hpp"

namespace graphq {

// Linear KoPL text: steps joined by " . " form a segment, segments joined by
// " | " are evaluated left to right on a stack. A segment that starts with a
// binary function (And, Or, Not, FilterRelCount, QueryRelation,
// QueryRelationQualifier) consumes the two states below it.
struct KoplStep {
  std::string function;
  std::vector<std::string> args;
  Span span;
};

struct KoplSegment {
  std::vector<KoplStep> steps;
};

struct KoplProgram {
  std::vector<KoplSegment> segments;
};

// Syntax only; function names and arities are checked by the consumers.
Result<KoplProgram> parse_kopl_program(std::string_view text);

std::string format_kopl(const KoplProgram& program);

// Backslash-escapes '\\', ',', '(' and ')'.
std::string escape_kopl_arg(std::string_view arg);

}  // namespace graphq
