#include "graph.hpp"

#include <algorithm>

#include <json.hpp>

namespace graphq {

using nlohmann::json;

namespace {

const std::vector<std::size_t> kNone;

struct LoadError {
  std::string code;
  std::string message;
};

[[noreturn]] void fail(std::string code, std::string message) {
  throw LoadError{std::move(code), std::move(message)};
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail("E_BAD_JSON", where + ": missing \"" + key + "\"");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) fail("E_BAD_JSON", where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

const json& array_field(const json& obj, const char* key, const std::string& where) {
  static const json empty = json::array();
  auto it = obj.find(key);
  if (it == obj.end()) return empty;
  if (!it->is_array()) fail("E_BAD_JSON", where + ": \"" + key + "\" must be an array");
  return *it;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) fail("E_BAD_JSON", where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known) fail("E_BAD_JSON", where + ": unknown key \"" + k + "\"");
  }
}

ValueLiteral read_literal(const json& obj, const std::string& where) {
  auto type = parse_vtype(string_field(obj, "type", where));
  if (!type) fail("E_BAD_VALUE", where + ": unknown value type");
  const json& v = field(obj, "value", where);
  std::string raw;
  if (v.is_string())
    raw = v.get<std::string>();
  else if (v.is_number() && *type != VType::String)
    raw = v.dump();
  else
    fail("E_BAD_JSON", where + ": \"value\" must be a string or number");
  if (auto u = obj.find("unit"); u != obj.end()) {
    if (!u->is_string()) fail("E_BAD_JSON", where + ": \"unit\" must be a string");
    if (*type != VType::Number) fail("E_BAD_VALUE", where + ": only numbers carry a unit");
    raw += " " + u->get<std::string>();
  }
  auto parsed = parse_value_literal(*type, raw);
  if (!parsed.value) fail("E_BAD_VALUE", where + ": " + parsed.error);
  if (auto why = check_value_invariants(*parsed.value); !why.empty())
    fail("E_BAD_VALUE", where + ": " + why);
  return *parsed.value;
}

std::vector<QualifierFact> read_qualifiers(const json& obj, const std::string& where) {
  std::vector<QualifierFact> out;
  const json& arr = array_field(obj, "qualifiers", where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string w = where + ".qualifiers[" + std::to_string(i) + "]";
    only_keys(arr[i], {"key", "type", "value", "unit"}, w);
    out.push_back({string_field(arr[i], "key", w), read_literal(arr[i], w)});
  }
  return out;
}

json write_literal(const ValueLiteral& v) {
  json out = json::object();
  out["type"] = std::string(keyword(v.vtype));
  if (v.vtype == VType::Number) {
    out["value"] = v.magnitude_text();
    if (v.unit) out["unit"] = *v.unit;
  } else {
    out["value"] = v.raw;
  }
  return out;
}

json write_qualifiers(const std::vector<QualifierFact>& qs) {
  json arr = json::array();
  for (const auto& q : qs) {
    json o = write_literal(q.value);
    o["key"] = q.key;
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace

Graph Graph::from_parts(std::vector<GraphEntity> entities) {
  Graph g;
  g.entities_ = std::move(entities);
  g.inverse_.resize(g.entities_.size());
  for (std::size_t i = 0; i < g.entities_.size(); ++i) {
    const auto& e = g.entities_[i];
    g.id_index_.emplace(e.id, i);
    g.name_index_[e.name].push_back(i);
    for (const auto& c : e.concepts) {
      auto& members = g.concept_index_[c];
      if (members.empty() || members.back() != i) members.push_back(i);
    }
  }
  for (std::size_t i = 0; i < g.entities_.size(); ++i) {
    const auto& rels = g.entities_[i].relations;
    for (std::size_t r = 0; r < rels.size(); ++r) {
      std::size_t t = g.target_of(rels[r]);
      if (t != npos) g.inverse_[t].push_back({i, r});
    }
  }
  return g;
}

const std::vector<std::size_t>& Graph::named(std::string_view name) const {
  auto it = name_index_.find(name);
  return it == name_index_.end() ? kNone : it->second;
}

const std::vector<std::size_t>& Graph::of_concept(std::string_view concept_name) const {
  auto it = concept_index_.find(concept_name);
  return it == concept_index_.end() ? kNone : it->second;
}

std::optional<std::size_t> Graph::index_of(std::string_view id) const {
  auto it = id_index_.find(id);
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Graph::target_of(const RelationFact& r) const {
  auto it = id_index_.find(r.target);
  return it == id_index_.end() ? npos : it->second;
}

Result<Graph> load_graph(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) return error("E_BAD_JSON", Span{0, 0}, "graph is not valid JSON");
  try {
    only_keys(doc, {"entities"}, "graph");
    const json& arr = field(doc, "entities", "graph");
    if (!arr.is_array()) fail("E_BAD_JSON", "\"entities\" must be an array");
    std::vector<GraphEntity> entities;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string w = "entities[" + std::to_string(i) + "]";
      const json& e = arr[i];
      only_keys(e, {"id", "name", "concepts", "attributes", "relations"}, w);
      GraphEntity ge;
      ge.id = string_field(e, "id", w);
      ge.name = string_field(e, "name", w);
      for (const auto& c : array_field(e, "concepts", w)) {
        if (!c.is_string()) fail("E_BAD_JSON", w + ": concepts must be strings");
        ge.concepts.push_back(c.get<std::string>());
      }
      const json& attrs = array_field(e, "attributes", w);
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        std::string wa = w + ".attributes[" + std::to_string(a) + "]";
        only_keys(attrs[a], {"key", "type", "value", "unit", "qualifiers"}, wa);
        ge.attributes.push_back({string_field(attrs[a], "key", wa), read_literal(attrs[a], wa),
                                 read_qualifiers(attrs[a], wa)});
      }
      const json& rels = array_field(e, "relations", w);
      for (std::size_t r = 0; r < rels.size(); ++r) {
        std::string wr = w + ".relations[" + std::to_string(r) + "]";
        only_keys(rels[r], {"predicate", "target", "qualifiers"}, wr);
        ge.relations.push_back({string_field(rels[r], "predicate", wr),
                                string_field(rels[r], "target", wr), read_qualifiers(rels[r], wr)});
      }
      entities.push_back(std::move(ge));
    }
    Graph g = Graph::from_parts(std::move(entities));
    auto diags = validate_graph(g);
    if (!diags.empty()) return diags;
    return g;
  } catch (const LoadError& e) {
    return error(e.code, Span{0, 0}, e.message);
  }
}

std::string graph_to_json(const Graph& g, int indent) {
  json arr = json::array();
  for (const auto& e : g.entities()) {
    json o = json::object();
    o["id"] = e.id;
    o["name"] = e.name;
    o["concepts"] = e.concepts;
    json attrs = json::array();
    for (const auto& a : e.attributes) {
      json ao = write_literal(a.value);
      ao["key"] = a.key;
      if (!a.qualifiers.empty()) ao["qualifiers"] = write_qualifiers(a.qualifiers);
      attrs.push_back(std::move(ao));
    }
    o["attributes"] = std::move(attrs);
    json rels = json::array();
    for (const auto& r : e.relations) {
      json ro = json::object();
      ro["predicate"] = r.predicate;
      ro["target"] = r.target;
      if (!r.qualifiers.empty()) ro["qualifiers"] = write_qualifiers(r.qualifiers);
      rels.push_back(std::move(ro));
    }
    o["relations"] = std::move(rels);
    arr.push_back(std::move(o));
  }
  json doc = json::object();
  doc["entities"] = std::move(arr);
  return doc.dump(indent);
}

Diagnostics validate_graph(const Graph& g) {
  Diagnostics out;
  auto report = [&](const char* code, std::string msg) {
    out.push_back(error(code, Span{0, 0}, std::move(msg)));
  };
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& e = g.at(i);
    if (!seen.emplace(e.id, i).second) report("E_DUP_ID", "duplicate entity id '" + e.id + "'");
    auto check = [&](const ValueLiteral& v, const std::string& where) {
      if (auto why = check_value_invariants(v); !why.empty())
        report("E_BAD_VALUE", e.id + " " + where + ": " + why);
    };
    for (const auto& a : e.attributes) {
      check(a.value, a.key);
      for (const auto& q : a.qualifiers) check(q.value, a.key + "/" + q.key);
    }
    for (const auto& r : e.relations) {
      if (!g.index_of(r.target))
        report("E_DANGLING_TARGET",
               "'" + e.id + "' " + r.predicate + " points at unknown id '" + r.target + "'");
      for (const auto& q : r.qualifiers) check(q.value, r.predicate + "/" + q.key);
    }
  }
  if (!out.empty()) return out;

  // Index drift: only possible when the entity list was edited after build.
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& e = g.at(i);
    const auto& named = g.named(e.name);
    if (!std::binary_search(named.begin(), named.end(), i))
      report("E_INDEX", "name index misses '" + e.id + "'");
    for (const auto& c : e.concepts) {
      const auto& members = g.of_concept(c);
      if (!std::binary_search(members.begin(), members.end(), i))
        report("E_INDEX", "concept index misses '" + e.id + "' in '" + c + "'");
    }
  }
  std::size_t edges = 0, incoming = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    edges += g.at(i).relations.size();
    incoming += g.incoming(i).size();
  }
  if (edges != incoming) report("E_INDEX", "inverse index does not match the relations");
  return out;
}

}  // namespace graphq
