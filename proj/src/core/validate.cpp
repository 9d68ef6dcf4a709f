#include <array>

#include "ast.hpp"
#include "overloaded.hpp"

namespace graphq {

namespace {

constexpr std::array<std::string_view, 14> kMarkers{"<ES>", "</ES>", "<E>", "</E>", "<C>",
                                                    "</C>", "<A>",  "</A>", "<R>", "</R>",
                                                    "<Q>",  "</Q>", "<V>", "</V>"};

// A payload survives printing and re-lexing only if its whitespace is already
// canonical and it cannot be mistaken for a marker.
std::string payload_problem(std::string_view text) {
  if (text.empty()) return "empty";
  if (text.front() == ' ' || text.back() == ' ') return "leading or trailing space";
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f')
      return "non-space whitespace";
    if (c == ' ' && i + 1 < text.size() && text[i + 1] == ' ') return "repeated spaces";
  }
  for (auto m : kMarkers)
    if (text.find(m) != std::string_view::npos) return "contains marker " + std::string(m);
  return {};
}

// Static value type; Unknown when only evaluation can tell.
enum class StaticType { Numeric, NonNumeric, Unknown };

class Validator {
 public:
  Diagnostics run(const QueryAst& q) {
    std::visit(overloaded{
                   [&](const EntityQuery& x) { set(x.entityset); },
                   [&](const AttributeQuery& x) {
                     name(x.attribute, "attribute");
                     set(x.entityset);
                   },
                   [&](const RelationQuery& x) {
                     set(x.source);
                     set(x.target);
                   },
                   [&](const QualifierQuery& x) {
                     name(x.qualifier, "qualifier");
                     set(x.entityset);
                     constraint(x.constraint);
                     bool ok = std::visit(overloaded{
                                              [](const AttrCmp&) { return true; },
                                              [](const Rel& r) { return !r.count.has_value(); },
                                              [](const auto&) { return false; },
                                          },
                                          x.constraint.node);
                     if (!ok)
                       report("E_BAD_QUALIFIER_QUERY",
                              "qualifier queries need an attribute comparison or a plain "
                              "relation constraint");
                   },
                   [&](const CountQuery& x) { set(x.entityset); },
                   [&](const VerifyQuery& x) {
                     set(x.entityset);
                     constraint(x.constraint);
                   },
                   [&](const ValueQuery& x) { value(x.value); },
                   [&](const SuperlativeQuery& x) {
                     name(x.attribute, "attribute");
                     set(x.entityset);
                   },
               },
               q.node);
    return std::move(out_);
  }

 private:
  void report(std::string code, std::string message) {
    out_.push_back(error(std::move(code), Span{0, 0}, std::move(message)));
  }

  void name(const std::string& text, std::string_view what) {
    if (text.empty()) {
      report("E_EMPTY_NAME", std::string(what) + " name is empty");
      return;
    }
    auto problem = payload_problem(text);
    if (!problem.empty())
      report("E_BAD_NAME", std::string(what) + " name '" + text + "': " + problem);
  }

  void literal(const ValueLiteral& v) {
    auto problem = check_value_invariants(v);
    if (problem.empty()) problem = payload_problem(v.raw);
    if (!problem.empty()) report("E_BAD_VALUE", std::string(keyword(v.vtype)) + " value: " + problem);
  }

  void comparison(Cop cop, const ValueLiteral& v, std::string_view where) {
    literal(v);
    if (is_ordering(cop) && v.vtype == VType::String)
      report("E_TYPE_MISMATCH", "'" + std::string(keyword(cop)) + "' applied to a string in " +
                                    std::string(where));
  }

  void qualifier(const std::optional<QualifierCond>& q) {
    if (!q) return;
    name(q->key, "qualifier");
    comparison(q->cop, q->value, "qualifier condition");
  }

  void constraint(const Constraint& c) {
    std::visit(overloaded{
                   [&](const AttrCmp& x) {
                     name(x.attribute, "attribute");
                     comparison(x.cop, x.value, "attribute comparison");
                     qualifier(x.qualifier);
                   },
                   [&](const AttrSup& x) {
                     name(x.attribute, "attribute");
                     qualifier(x.qualifier);
                   },
                   [&](const Rel& x) {
                     name(x.relation, "relation");
                     set(*x.target);
                     if (x.count) {
                       literal(x.count->value);
                       const auto& v = x.count->value;
                       if (v.vtype != VType::Number || !v.magnitude || v.unit ||
                           !v.magnitude->is_integer() || v.magnitude->sign() < 0)
                         report("E_BAD_COUNT", "relation count '" + v.raw +
                                                   "' must be a non-negative integer without unit");
                     }
                     qualifier(x.qualifier);
                   },
                   [&](const RelSup& x) {
                     name(x.relation, "relation");
                     set(*x.target);
                   },
               },
               c.node);
  }

  void set(const EntitySetExpr& e) {
    std::visit(overloaded{
                   [&](const EntityLeaf& x) { name(x.name, "entity"); },
                   [&](const ConceptLeaf& x) { name(x.name, "concept"); },
                   [&](const Typed& x) {
                     name(x.concept_name, "concept");
                     set(*x.inner);
                   },
                   [&](const Combine& x) {
                     set(*x.left);
                     set(*x.right);
                   },
                   [&](const Constrained& x) {
                     set(*x.inner);
                     constraint(x.constraint);
                   },
                   [&](const Group& x) { set(*x.inner); },
               },
               e.node);
  }

  StaticType value(const ValueExpr& v) {
    return std::visit(
        overloaded{
            [&](const Lit& x) {
              literal(x.value);
              return x.value.vtype == VType::Number ? StaticType::Numeric
                                                    : StaticType::NonNumeric;
            },
            [&](const AttrOfEntity& x) {
              name(x.attribute, "attribute");
              name(x.entity, "entity");
              return StaticType::Unknown;
            },
            [&](const Aggregate& x) {
              if (value(*x.inner) == StaticType::NonNumeric)
                report("E_BAD_AGGREGATE",
                       std::string(keyword(x.vop)) + " applied to a non-numeric value");
              return StaticType::Numeric;
            },
            [&](const ValueCombine& x) {
              auto l = value(*x.left);
              auto r = value(*x.right);
              if (l == StaticType::NonNumeric || r == StaticType::NonNumeric)
                return StaticType::NonNumeric;
              if (l == StaticType::Unknown || r == StaticType::Unknown) return StaticType::Unknown;
              return StaticType::Numeric;
            },
        },
        v.node);
  }

  Diagnostics out_;
};

}  // namespace

Diagnostics validate(const QueryAst& q) { return Validator().run(q); }

}  // namespace graphq
