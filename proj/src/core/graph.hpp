#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "result.hpp"
#include "value.hpp"

namespace graphq {

struct QualifierFact {
  std::string key;
  ValueLiteral value;
};

struct AttributeFact {
  std::string key;
  ValueLiteral value;
  std::vector<QualifierFact> qualifiers;
};

struct RelationFact {
  std::string predicate;
  std::string target;  // entity id
  std::vector<QualifierFact> qualifiers;
};

struct GraphEntity {
  std::string id;
  std::string name;
  std::vector<std::string> concepts;
  std::vector<AttributeFact> attributes;
  std::vector<RelationFact> relations;
};

// An incoming edge: relations[relation] of entity `source`.
struct EdgeRef {
  std::size_t source;
  std::size_t relation;
};

// In-memory knowledge graph. Entities are addressed by their position; the
// indexes are built once on construction.
class Graph {
 public:
  Graph() = default;

  // Builds the indexes without checking ids or targets; load_graph and
  // validate_graph do the checking.
  static Graph from_parts(std::vector<GraphEntity> entities);

  const std::vector<GraphEntity>& entities() const { return entities_; }
  std::size_t size() const { return entities_.size(); }
  const GraphEntity& at(std::size_t i) const { return entities_[i]; }

  // Positions in ascending order; empty when unknown.
  const std::vector<std::size_t>& named(std::string_view name) const;
  const std::vector<std::size_t>& of_concept(std::string_view concept_name) const;
  const std::vector<EdgeRef>& incoming(std::size_t i) const { return inverse_[i]; }
  std::optional<std::size_t> index_of(std::string_view id) const;
  // Position of a relation's target; npos when dangling.
  std::size_t target_of(const RelationFact& r) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<GraphEntity> entities_;
  std::map<std::string, std::size_t, std::less<>> id_index_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> name_index_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> concept_index_;
  std::vector<std::vector<EdgeRef>> inverse_;
};

// JSON form:
// {"entities":[{"id","name","concepts":[...],
//   "attributes":[{"key","type","value","unit"?,"qualifiers"?:[...]}],
//   "relations":[{"predicate","target","qualifiers"?:[...]}]}]}
// Qualifiers use the attribute shape without nesting.
Result<Graph> load_graph(std::string_view json_text);
std::string graph_to_json(const Graph& g, int indent = -1);

// Duplicate ids (E_DUP_ID), dangling targets (E_DANGLING_TARGET), broken
// literals (E_BAD_VALUE) and index drift.
Diagnostics validate_graph(const Graph& g);

}  // namespace graphq
