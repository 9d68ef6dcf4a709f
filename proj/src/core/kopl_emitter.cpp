#include "codegen.hpp"
#include "emit_support.hpp"
#include "kopl_program.hpp"

namespace graphq {

namespace {

// Builds the program as a list of segments; the last segment is "open" and
// receives the steps that transform the current top state.
class KoplEmitter {
 public:
  explicit KoplEmitter(const SchemaMapping& m) : m_(m) {}

  std::string query(const QueryAst& q) {
    std::visit(overloaded{
                   [&](const EntityQuery& x) {
                     set(x.entityset);
                     step("What");
                   },
                   [&](const CountQuery& x) {
                     set(x.entityset);
                     step("Count");
                   },
                   [&](const AttributeQuery& x) {
                     set(x.entityset);
                     step("QueryAttr", {label(x.attribute)});
                   },
                   [&](const SuperlativeQuery& x) {
                     set(x.entityset);
                     step("SelectAmong", {label(x.attribute), std::string(keyword(x.sop))});
                     step("What");
                   },
                   [&](const RelationQuery& x) {
                     set(x.source);
                     segment();
                     set(x.target);
                     segment();
                     step("QueryRelation");
                   },
                   [&](const QualifierQuery& x) { qualifier_query(x); },
                   [&](const VerifyQuery& x) { verify_query(x); },
                   [&](const ValueQuery& x) { value(x.value); },
               },
               q.node);
    return format_kopl(program_);
  }

 private:
  std::string label(const std::string& l) const { return m_.normalize_label(l); }

  void step(std::string fn, std::vector<std::string> args = {}) {
    if (program_.segments.empty()) program_.segments.emplace_back();
    program_.segments.back().steps.push_back(KoplStep{std::move(fn), std::move(args), {}});
  }

  void segment() { program_.segments.emplace_back(); }

  static std::string op(Cop cop) { return std::string(symbol(cop)); }

  // Comparison arguments after the leading label (if any): value parts + op.
  static std::vector<std::string> comparison_args(const ValueLiteral& v, Cop cop) {
    switch (v.vtype) {
      case VType::String:
        if (cop == Cop::Is) return {v.raw};
        return {v.raw, op(cop)};
      case VType::Number:
        if (v.unit) return {v.magnitude_text(), *v.unit, op(cop)};
        return {v.magnitude_text(), op(cop)};
      default:
        return {v.raw, op(cop)};
    }
  }

  static std::string type_suffix(VType t) {
    switch (t) {
      case VType::String: return "Str";
      case VType::Number: return "Num";
      case VType::Year: return "Year";
      case VType::Date: return "Date";
      case VType::Time: return "Time";
    }
    return {};
  }

  void filter(const std::string& prefix, const std::string& key, Cop cop, const ValueLiteral& v) {
    std::vector<std::string> args{key};
    for (auto& a : comparison_args(v, cop)) args.push_back(std::move(a));
    step(prefix + type_suffix(v.vtype), std::move(args));
  }

  void qualifier(const std::optional<QualifierCond>& q) {
    if (q) filter("QFilter", label(q->key), q->cop, q->value);
  }

  void set(const EntitySetExpr& e) {
    std::visit(overloaded{
                   [&](const EntityLeaf& x) { step("Find", {x.name}); },
                   [&](const ConceptLeaf& x) {
                     step("FindAll");
                     step("FilterConcept", {x.name});
                   },
                   [&](const Typed& x) {
                     set(*x.inner);
                     step("FilterConcept", {x.concept_name});
                   },
                   [&](const Combine& x) {
                     set(*x.left);
                     segment();
                     set(*x.right);
                     segment();
                     step(x.lop == Lop::And ? "And" : x.lop == Lop::Or ? "Or" : "Not");
                   },
                   [&](const Constrained& x) {
                     set(*x.inner);
                     constraint(x.constraint);
                   },
                   [&](const Group& x) { set(*x.inner); },
               },
               e.node);
  }

  void relate(const Rel& r) {
    segment();
    set(*r.target);
    step("Relate", {label(r.relation), std::string(keyword(r.dir.value_or(Dir::Backward)))});
    qualifier(r.qualifier);
    segment();
  }

  void constraint(const Constraint& c) {
    std::visit(overloaded{
                   [&](const AttrCmp& x) {
                     filter("Filter", label(x.attribute), x.cop, x.value);
                     qualifier(x.qualifier);
                   },
                   [&](const AttrSup& x) {
                     if (x.qualifier) {
                       step("FilterAttr", {label(x.attribute)});
                       qualifier(x.qualifier);
                     }
                     step("SelectAmong", {label(x.attribute), std::string(keyword(x.sop))});
                   },
                   [&](const Rel& x) {
                     relate(x);
                     if (x.count)
                       step("FilterRelCount", {op(x.count->cop), x.count->value.magnitude_text()});
                     else
                       step("And");
                   },
                   [&](const RelSup&) {
                     throw EmitError{"E_UNSUPPORTED", "relation superlatives have no defined semantics"};
                   },
               },
               c.node);
  }

  void qualifier_query(const QualifierQuery& x) {
    std::string key = label(x.qualifier);
    if (auto* cmp = std::get_if<AttrCmp>(&x.constraint.node)) {
      set(x.entityset);
      filter("Filter", label(cmp->attribute), cmp->cop, cmp->value);
      qualifier(cmp->qualifier);
      step("QueryAttrQualifier", {label(cmp->attribute), key});
      return;
    }
    const auto& rel = std::get<Rel>(x.constraint.node);
    set(x.entityset);
    segment();
    set(*rel.target);
    segment();
    std::vector<std::string> args{label(rel.relation), key};
    if (rel.dir == Dir::Forward) args.push_back("forward");
    step("QueryRelationQualifier", std::move(args));
    qualifier(rel.qualifier);
  }

  void verify_query(const VerifyQuery& x) {
    if (auto* cmp = std::get_if<AttrCmp>(&x.constraint.node)) {
      set(x.entityset);
      step("QueryAttr", {label(cmp->attribute)});
      qualifier(cmp->qualifier);
      auto args = comparison_args(cmp->value, cmp->cop);
      step("Verify" + type_suffix(cmp->value.vtype), std::move(args));
      return;
    }
    set(x.entityset);
    constraint(x.constraint);
    step("Exist");
  }

  void value(const ValueExpr& v) {
    std::visit(overloaded{
                   [&](const Lit& x) {
                     step("Const", {std::string(keyword(x.value.vtype)), x.value.raw});
                   },
                   [&](const AttrOfEntity& x) {
                     step("Find", {x.entity});
                     step("QueryAttr", {label(x.attribute)});
                   },
                   [&](const Aggregate& x) {
                     value(*x.inner);
                     step("Aggregate", {std::string(keyword(x.vop))});
                   },
                   [&](const ValueCombine& x) {
                     value(*x.left);
                     segment();
                     value(*x.right);
                     segment();
                     step(x.lop == Lop::And ? "And" : x.lop == Lop::Or ? "Or" : "Not");
                   },
               },
               v.node);
  }

  const SchemaMapping& m_;
  KoplProgram program_;
};

}  // namespace

Result<std::string> emit_kopl(const QueryAst& ast, const SchemaMapping& mapping) {
  return run_emitter(ast, [&](const QueryAst& q) { return KoplEmitter(mapping).query(q); });
}

}  // namespace graphq
