#include "schema_mapping.hpp"

#include <array>

#include "json.hpp"

namespace graphq {

namespace {

constexpr std::array<std::string_view, 7> kRoles{"name",   "instance_of", "value", "unit",
                                                 "fact_h", "fact_r",      "fact_t"};

Diagnostic config_error(std::string message) {
  return error("E_CONFIG", Span{0, 0}, std::move(message));
}

}  // namespace

std::string snake_case(std::string_view label) {
  std::string out(label);
  for (char& c : out) {
    if (c == ' ')
      c = '_';
    else if (c >= 'A' && c <= 'Z')
      c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

const std::string& SchemaMapping::reserved(const std::string& role) const {
  return reserved_predicates.at(role);
}

std::string SchemaMapping::normalize_label(std::string_view label) const {
  return label_normalizer == LabelNormalizer::SnakeCase ? snake_case(label) : std::string(label);
}

std::string SchemaMapping::denormalize_label(std::string_view rendered) const {
  std::string out(rendered);
  if (label_normalizer == LabelNormalizer::SnakeCase)
    for (char& c : out)
      if (c == '_') c = ' ';
  return out;
}

std::string SchemaMapping::sparql_predicate(std::string_view label) const {
  return sparql_predicate_prefix + normalize_label(label) + sparql_predicate_suffix;
}

SchemaMapping default_mapping() {
  SchemaMapping m;
  for (auto role : kRoles) m.reserved_predicates.emplace(role, role);
  return m;
}

Result<SchemaMapping> load_mapping(std::string_view json_text) {
  using nlohmann::json;
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    return config_error("mapping config must be a JSON object");

  SchemaMapping m = default_mapping();
  auto string_field = [](const json& v, const std::string& key) -> Result<std::string> {
    if (!v.is_string()) return config_error("'" + key + "' must be a string");
    return v.get<std::string>();
  };

  for (const auto& [key, v] : doc.items()) {
    if (key == "label_normalizer") {
      auto s = string_field(v, key);
      if (!s) return s.diagnostics();
      if (*s == "snake_case")
        m.label_normalizer = LabelNormalizer::SnakeCase;
      else if (*s == "identity")
        m.label_normalizer = LabelNormalizer::Identity;
      else
        return config_error("unknown label_normalizer '" + *s + "'");
    } else if (key == "reserved_predicates") {
      if (!v.is_object()) return config_error("'reserved_predicates' must be an object");
      for (const auto& [role, rendered] : v.items()) {
        if (!m.reserved_predicates.count(role))
          return config_error("unknown reserved predicate role '" + role + "'");
        auto s = string_field(rendered, role);
        if (!s) return s.diagnostics();
        if (s->empty()) return config_error("reserved predicate '" + role + "' is empty");
        m.reserved_predicates[role] = *s;
      }
    } else if (key == "numeric_datatype_suffix") {
      auto s = string_field(v, key);
      if (!s) return s.diagnostics();
      m.numeric_datatype_suffix = *s;
    } else if (key == "dialect_options") {
      if (!v.is_object()) return config_error("'dialect_options' must be an object");
      for (const auto& [opt, ov] : v.items()) {
        if (opt == "sparql.predicate_prefix" || opt == "sparql.predicate_suffix" ||
            opt == "lambda_dcs.function_prefix") {
          auto s = string_field(ov, opt);
          if (!s) return s.diagnostics();
          if (opt == "sparql.predicate_prefix")
            m.sparql_predicate_prefix = *s;
          else if (opt == "sparql.predicate_suffix")
            m.sparql_predicate_suffix = *s;
          else
            m.lambda_dcs_function_prefix = *s;
        } else if (opt == "cypher.concept_as_label") {
          if (!ov.is_boolean()) return config_error("'" + opt + "' must be a boolean");
          m.cypher_concept_as_label = ov.get<bool>();
        } else {
          return config_error("unknown dialect option '" + opt + "'");
        }
      }
    } else {
      return config_error("unknown mapping key '" + key + "'");
    }
  }
  return m;
}

}  // namespace graphq
