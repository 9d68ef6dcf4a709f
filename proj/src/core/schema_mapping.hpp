#pragma once

#include <map>
#include <string>
#include <string_view>

#include "result.hpp"

namespace graphq {

enum class LabelNormalizer { SnakeCase, Identity };

// Naming conventions shared by the code generators.
struct SchemaMapping {
  LabelNormalizer label_normalizer = LabelNormalizer::SnakeCase;
  // Role -> rendered predicate. Roles: name, instance_of, value, unit,
  // fact_h, fact_r, fact_t.
  std::map<std::string, std::string> reserved_predicates;
  std::string numeric_datatype_suffix = "^^xsd:double";
  std::string sparql_predicate_prefix;
  std::string sparql_predicate_suffix;
  bool cypher_concept_as_label = false;
  std::string lambda_dcs_function_prefix = "@";

  const std::string& reserved(const std::string& role) const;

  // Label as it appears in generated code, e.g. "educated at" -> "educated_at".
  std::string normalize_label(std::string_view label) const;
  // Best-effort inverse of normalize_label ("_" -> " " for snake_case).
  std::string denormalize_label(std::string_view rendered) const;

  // User predicate for SPARQL: prefix + normalized label + suffix.
  std::string sparql_predicate(std::string_view label) const;
};

SchemaMapping default_mapping();

// JSON configuration; absent keys keep their defaults.
Result<SchemaMapping> load_mapping(std::string_view json_text);

// Lowercase ASCII letters and turn spaces into underscores.
std::string snake_case(std::string_view label);

}  // namespace graphq
