#include <stdexcept>

#include "ast.hpp"
#include "json.hpp"
#include "overloaded.hpp"

namespace graphq {

using nlohmann::json;

namespace {

// ---- writing ----

json literal_json(const ValueLiteral& v) {
  return {{"vtype", keyword(v.vtype)}, {"raw", v.raw}};
}

json qualifier_json(const QualifierCond& q) {
  return {{"key", q.key}, {"cop", keyword(q.cop)}, {"value", literal_json(q.value)}};
}

json set_json(const EntitySetExpr& e);

json constraint_json(const Constraint& c) {
  json out{{"type", variant_name(c)}};
  std::visit(overloaded{
                 [&](const AttrCmp& x) {
                   out["attribute"] = x.attribute;
                   out["cop"] = keyword(x.cop);
                   out["value"] = literal_json(x.value);
                   if (x.qualifier) out["qualifier"] = qualifier_json(*x.qualifier);
                 },
                 [&](const AttrSup& x) {
                   out["sop"] = keyword(x.sop);
                   out["attribute"] = x.attribute;
                   if (x.qualifier) out["qualifier"] = qualifier_json(*x.qualifier);
                 },
                 [&](const Rel& x) {
                   out["relation"] = x.relation;
                   if (x.dir) out["dir"] = keyword(*x.dir);
                   out["target"] = set_json(*x.target);
                   if (x.count)
                     out["count"] = {{"cop", keyword(x.count->cop)},
                                     {"value", literal_json(x.count->value)}};
                   if (x.qualifier) out["qualifier"] = qualifier_json(*x.qualifier);
                 },
                 [&](const RelSup& x) {
                   out["relation"] = x.relation;
                   if (x.dir) out["dir"] = keyword(*x.dir);
                   out["sop"] = keyword(x.sop);
                   out["target"] = set_json(*x.target);
                 },
             },
             c.node);
  return out;
}

json set_json(const EntitySetExpr& e) {
  json out{{"type", variant_name(e)}};
  std::visit(overloaded{
                 [&](const EntityLeaf& x) { out["name"] = x.name; },
                 [&](const ConceptLeaf& x) { out["name"] = x.name; },
                 [&](const Typed& x) {
                   out["concept"] = x.concept_name;
                   out["inner"] = set_json(*x.inner);
                 },
                 [&](const Combine& x) {
                   out["lop"] = keyword(x.lop);
                   out["left"] = set_json(*x.left);
                   out["right"] = set_json(*x.right);
                 },
                 [&](const Constrained& x) {
                   out["inner"] = set_json(*x.inner);
                   out["constraint"] = constraint_json(x.constraint);
                   if (x.appositive) out["appositive"] = true;
                 },
                 [&](const Group& x) { out["inner"] = set_json(*x.inner); },
             },
             e.node);
  return out;
}

json value_json(const ValueExpr& v) {
  json out{{"type", variant_name(v)}};
  std::visit(overloaded{
                 [&](const Lit& x) { out["value"] = literal_json(x.value); },
                 [&](const AttrOfEntity& x) {
                   out["attribute"] = x.attribute;
                   out["entity"] = x.entity;
                 },
                 [&](const Aggregate& x) {
                   out["vop"] = keyword(x.vop);
                   out["inner"] = value_json(*x.inner);
                 },
                 [&](const ValueCombine& x) {
                   out["lop"] = keyword(x.lop);
                   out["left"] = value_json(*x.left);
                   out["right"] = value_json(*x.right);
                 },
             },
             v.node);
  return out;
}

json query_json(const QueryAst& q) {
  json out{{"type", variant_name(q)}};
  std::visit(overloaded{
                 [&](const EntityQuery& x) { out["entityset"] = set_json(x.entityset); },
                 [&](const AttributeQuery& x) {
                   out["attribute"] = x.attribute;
                   out["entityset"] = set_json(x.entityset);
                 },
                 [&](const RelationQuery& x) {
                   out["source"] = set_json(x.source);
                   out["target"] = set_json(x.target);
                 },
                 [&](const QualifierQuery& x) {
                   out["qualifier"] = x.qualifier;
                   out["entityset"] = set_json(x.entityset);
                   out["constraint"] = constraint_json(x.constraint);
                 },
                 [&](const CountQuery& x) { out["entityset"] = set_json(x.entityset); },
                 [&](const VerifyQuery& x) {
                   out["entityset"] = set_json(x.entityset);
                   out["constraint"] = constraint_json(x.constraint);
                 },
                 [&](const ValueQuery& x) { out["value"] = value_json(x.value); },
                 [&](const SuperlativeQuery& x) {
                   out["sop"] = keyword(x.sop);
                   out["attribute"] = x.attribute;
                   out["entityset"] = set_json(x.entityset);
                 },
             },
             q.node);
  return out;
}

// ---- reading ----

struct JsonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kMaxDepth = 512;

class Reader {
 private:
  struct DepthGuard {
    explicit DepthGuard(int& d) : depth(d) {
      if (++depth > kMaxDepth) throw JsonError("AST nesting too deep");
    }
    ~DepthGuard() { --depth; }
    int& depth;
  };

  static const json& at(const json& j, const char* key) {
    if (!j.is_object()) throw JsonError("expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw JsonError(std::string("missing field '") + key + "'");
    return *it;
  }

  static std::string str(const json& j, const char* key) {
    const json& v = at(j, key);
    if (!v.is_string()) throw JsonError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }

  template <typename F>
  static auto enum_field(const json& j, const char* key, F parse) {
    std::string text = str(j, key);
    auto e = parse(text);
    if (!e) throw JsonError("bad value '" + text + "' for field '" + key + "'");
    return *e;
  }

  static ValueLiteral literal(const json& j) {
    VType vtype = enum_field(j, "vtype", parse_vtype);
    auto parsed = parse_value_literal(vtype, str(j, "raw"));
    if (!parsed.value) throw JsonError(parsed.error);
    return *parsed.value;
  }

  static std::optional<QualifierCond> qualifier(const json& j) {
    if (!j.is_object() || !j.contains("qualifier")) return std::nullopt;
    const json& q = j["qualifier"];
    return QualifierCond{str(q, "key"), enum_field(q, "cop", parse_cop), literal(at(q, "value"))};
  }

  static std::optional<Dir> dir(const json& j) {
    if (!j.contains("dir")) return std::nullopt;
    return enum_field(j, "dir", parse_dir);
  }

  Constraint constraint(const json& j) {
    DepthGuard guard(depth_);
    std::string type = str(j, "type");
    if (type == "AttrCmp")
      return {AttrCmp{str(j, "attribute"), enum_field(j, "cop", parse_cop),
                      literal(at(j, "value")), qualifier(j)}};
    if (type == "AttrSup")
      return {AttrSup{enum_field(j, "sop", parse_sop), str(j, "attribute"), qualifier(j)}};
    if (type == "Rel") {
      std::optional<CountCmp> count;
      if (j.contains("count")) {
        const json& c = j["count"];
        count = CountCmp{enum_field(c, "cop", parse_cop), literal(at(c, "value"))};
      }
      return {Rel{str(j, "relation"), dir(j), set(at(j, "target")), count, qualifier(j)}};
    }
    if (type == "RelSup")
      return {RelSup{str(j, "relation"), dir(j), enum_field(j, "sop", parse_sop),
                     set(at(j, "target"))}};
    throw JsonError("unknown constraint type '" + type + "'");
  }

  EntitySetExpr set(const json& j) {
    DepthGuard guard(depth_);
    std::string type = str(j, "type");
    if (type == "Entity") return {EntityLeaf{str(j, "name")}};
    if (type == "Concept") return {ConceptLeaf{str(j, "name")}};
    if (type == "Typed") return {Typed{str(j, "concept"), set(at(j, "inner"))}};
    if (type == "Combine")
      return {Combine{enum_field(j, "lop", parse_lop), set(at(j, "left")), set(at(j, "right"))}};
    if (type == "Constrained") {
      bool appositive = false;
      if (j.contains("appositive")) {
        if (!j["appositive"].is_boolean()) throw JsonError("'appositive' must be a boolean");
        appositive = j["appositive"].get<bool>();
      }
      return {Constrained{set(at(j, "inner")), constraint(at(j, "constraint")), appositive}};
    }
    if (type == "Group") return {Group{set(at(j, "inner"))}};
    throw JsonError("unknown entity set type '" + type + "'");
  }

  ValueExpr value(const json& j) {
    DepthGuard guard(depth_);
    std::string type = str(j, "type");
    if (type == "Lit") return {Lit{literal(at(j, "value"))}};
    if (type == "AttrOfEntity") return {AttrOfEntity{str(j, "attribute"), str(j, "entity")}};
    if (type == "Aggregate") return {Aggregate{enum_field(j, "vop", parse_vop), value(at(j, "inner"))}};
    if (type == "Combine")
      return {ValueCombine{enum_field(j, "lop", parse_lop), value(at(j, "left")),
                           value(at(j, "right"))}};
    throw JsonError("unknown value type '" + type + "'");
  }

  int depth_ = 0;

 public:
  QueryAst query(const json& j) {
    std::string type = str(j, "type");
    if (type == "EntityQuery") return {EntityQuery{set(at(j, "entityset"))}};
    if (type == "AttributeQuery")
      return {AttributeQuery{str(j, "attribute"), set(at(j, "entityset"))}};
    if (type == "RelationQuery")
      return {RelationQuery{set(at(j, "source")), set(at(j, "target"))}};
    if (type == "QualifierQuery")
      return {QualifierQuery{str(j, "qualifier"), set(at(j, "entityset")),
                             constraint(at(j, "constraint"))}};
    if (type == "CountQuery") return {CountQuery{set(at(j, "entityset"))}};
    if (type == "VerifyQuery")
      return {VerifyQuery{set(at(j, "entityset")), constraint(at(j, "constraint"))}};
    if (type == "ValueQuery") return {ValueQuery{value(at(j, "value"))}};
    if (type == "SuperlativeQuery")
      return {SuperlativeQuery{enum_field(j, "sop", parse_sop), str(j, "attribute"),
                               set(at(j, "entityset"))}};
    throw JsonError("unknown query type '" + type + "'");
  }
};

}  // namespace

std::string to_json(const QueryAst& q, int indent) { return query_json(q).dump(indent); }

Result<QueryAst> from_json(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) return error("E_BAD_JSON", Span{0, 0}, "input is not valid JSON");
  try {
    return Reader().query(doc);
  } catch (const JsonError& e) {
    return error("E_BAD_JSON", Span{0, 0}, e.what());
  } catch (const json::exception& e) {
    return error("E_BAD_JSON", Span{0, 0}, e.what());
  }
}

}  // namespace graphq
