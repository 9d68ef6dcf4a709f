#include "codegen.hpp"
#include "emit_support.hpp"

namespace graphq {

namespace {

class LambdaDcsEmitter {
 public:
  explicit LambdaDcsEmitter(const SchemaMapping& m) : m_(m) {}

  std::string query(const QueryAst& q) {
    auto body = std::visit(
        overloaded{
            [&](const EntityQuery& x) { return set(x.entityset); },
            [&](const CountQuery& x) { return call("size", {set(x.entityset)}); },
            [&](const AttributeQuery& x) {
              return call("getProperty", {set(x.entityset), str(label(x.attribute))});
            },
            [&](const SuperlativeQuery& x) {
              return call("superlative",
                          {set(x.entityset), str(x.sop == Sop::Largest ? "max" : "min"),
                           str(label(x.attribute))});
            },
            [&](const ValueQuery& x) { return value(x.value); },
            [&](const RelationQuery&) -> std::string {
              throw EmitError{"E_UNSUPPORTED", "lambda DCS has no relation queries"};
            },
            [&](const QualifierQuery&) -> std::string {
              throw EmitError{"E_UNSUPPORTED", "lambda DCS has no qualifiers"};
            },
            [&](const VerifyQuery&) -> std::string {
              throw EmitError{"E_UNSUPPORTED", "lambda DCS has no verify queries"};
            },
        },
        q.node);
    return call("listValue", {body});
  }

 private:
  std::string label(const std::string& l) const { return m_.normalize_label(l); }

  std::string call(std::string_view fn, std::initializer_list<std::string> args) const {
    std::string out = "(call " + m_.lambda_dcs_function_prefix + std::string(fn);
    for (const auto& a : args) out += " " + a;
    return out + ")";
  }

  static std::string str(std::string_view s) { return "(string " + std::string(s) + ")"; }
  static std::string entity(std::string_view name) { return "en." + snake_case(name); }

  static std::string literal(const ValueLiteral& v) {
    switch (v.vtype) {
      case VType::String: return "(string " + quote_string(v.raw) + ")";
      case VType::Number:
        return "(number " + v.magnitude_text() + (v.unit ? " en." + snake_case(*v.unit) : "") + ")";
      case VType::Year: return "(date " + std::to_string(*v.year) + " -1 -1)";
      case VType::Date:
        return "(date " + std::to_string(v.date->year) + " " + std::to_string(v.date->month) + " " +
               std::to_string(v.date->day) + ")";
      case VType::Time:
        return "(time " + std::to_string(v.time->hour) + " " + std::to_string(v.time->minute) + ")";
    }
    return {};
  }

  std::string relation(const std::string& r, std::optional<Dir> dir) const {
    // Backward: the constrained entity is the subject.
    if (dir.value_or(Dir::Backward) == Dir::Backward) return str(label(r));
    return call("reverse", {str(label(r))});
  }

  std::string set(const EntitySetExpr& e) {
    return std::visit(
        overloaded{
            [&](const EntityLeaf& x) { return entity(x.name); },
            [&](const ConceptLeaf& x) {
              return call("getProperty", {call("singleton", {entity(x.name)}), str("!type")});
            },
            [&](const Typed& x) {
              return call("filter", {set(*x.inner), str("!type"), str("="), entity(x.concept_name)});
            },
            [&](const Combine& x) -> std::string {
              if (x.lop != Lop::Or)
                throw EmitError{"E_UNSUPPORTED", "lambda DCS supports only union of sets"};
              return call("concat", {set(*x.left), set(*x.right)});
            },
            [&](const Constrained& x) { return constraint(set(*x.inner), x.constraint); },
            [&](const Group& x) { return set(*x.inner); },
        },
        e.node);
  }

  std::string constraint(const std::string& s, const Constraint& c) {
    return std::visit(
        overloaded{
            [&](const AttrCmp& x) -> std::string {
              if (x.qualifier) throw EmitError{"E_UNSUPPORTED", "lambda DCS has no qualifiers"};
              return call("filter", {s, str(label(x.attribute)), str(symbol(x.cop)),
                                     literal(x.value)});
            },
            [&](const AttrSup& x) -> std::string {
              if (x.qualifier) throw EmitError{"E_UNSUPPORTED", "lambda DCS has no qualifiers"};
              return call("superlative",
                          {s, str(x.sop == Sop::Largest ? "max" : "min"), str(label(x.attribute))});
            },
            [&](const Rel& x) -> std::string {
              if (x.qualifier) throw EmitError{"E_UNSUPPORTED", "lambda DCS has no qualifiers"};
              if (x.count)
                return call("countComparative",
                            {s, relation(x.relation, x.dir), str(symbol(x.count->cop)),
                             "(number " + x.count->value.magnitude_text() + ")", set(*x.target)});
              return call("filter", {s, relation(x.relation, x.dir), str("="), set(*x.target)});
            },
            [&](const RelSup&) -> std::string {
              throw EmitError{"E_UNSUPPORTED", "relation superlatives have no defined semantics"};
            },
        },
        c.node);
  }

  std::string value(const ValueExpr& v) {
    static constexpr const char* kOps[] = {"sum", "avg", "max", "min"};
    return std::visit(
        overloaded{
            [&](const Lit& x) { return literal(x.value); },
            [&](const AttrOfEntity& x) {
              return call("getProperty", {entity(x.entity), str(label(x.attribute))});
            },
            [&](const Aggregate& x) {
              return call("aggregate", {str(kOps[static_cast<int>(x.vop)]), value(*x.inner)});
            },
            [&](const ValueCombine&) -> std::string {
              throw EmitError{"E_UNSUPPORTED", "lambda DCS has no value combination"};
            },
        },
        v.node);
  }

  const SchemaMapping& m_;
};

}  // namespace

Result<std::string> emit_lambda_dcs(const QueryAst& ast, const SchemaMapping& mapping) {
  return run_emitter(ast, [&](const QueryAst& q) { return LambdaDcsEmitter(mapping).query(q); });
}

}  // namespace graphq
