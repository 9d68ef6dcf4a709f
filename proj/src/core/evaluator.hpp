#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ast.hpp"
#include "graph.hpp"
#include "result.hpp"
#include "schema_mapping.hpp"

namespace graphq {

struct Answer {
  enum class Kind { Entities, Count, Boolean, Values, Predicates };

  Kind kind = Kind::Entities;
  std::vector<std::string> names;  // Entities (names) or Predicates; sorted, unique
  std::vector<ValueLiteral> values;
  std::int64_t count = 0;
  bool truth = false;

  static Answer entities(std::vector<std::string> names);
  static Answer predicates(std::vector<std::string> names);
  static Answer number(std::int64_t count);
  static Answer boolean(bool truth);
  static Answer of_values(std::vector<ValueLiteral> values);

  // Values compare as multisets up to value_key.
  bool operator==(const Answer& other) const;

  std::string to_json() const;
  std::string to_text() const;
};

std::string_view kind_name(Answer::Kind kind);

// Reference semantics over the AST. Validates and normalizes first;
// relation superlatives are E_EVAL_UNSUPPORTED.
Result<Answer> interpret(const QueryAst& ast, const Graph& graph, const SchemaMapping& mapping);

// Executes KoPL program text directly against the graph, without going
// through the AST.
Result<Answer> run_kopl(std::string_view program, const Graph& graph, const SchemaMapping& mapping);

// Numeric aggregate used by the interpreter: numbers only, all in one unit;
// empty input or mixed units give no value. The KoPL executor keeps its own
// copy so the two engines stay independent.
std::vector<ValueLiteral> aggregate_values(Vop vop, const std::vector<ValueLiteral>& values);

}  // namespace graphq
