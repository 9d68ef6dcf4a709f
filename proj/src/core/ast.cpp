#include "ast.hpp"
#include "overloaded.hpp"

#include <algorithm>
#include <sstream>

namespace graphq {

namespace build {

EntitySetExpr entity(std::string name) { return {EntityLeaf{std::move(name)}}; }
EntitySetExpr concept_set(std::string name) { return {ConceptLeaf{std::move(name)}}; }
EntitySetExpr typed(std::string concept_name, EntitySetExpr inner) {
  return {Typed{std::move(concept_name), std::move(inner)}};
}
EntitySetExpr combine(Lop lop, EntitySetExpr left, EntitySetExpr right) {
  return {Combine{lop, std::move(left), std::move(right)}};
}
EntitySetExpr constrained(EntitySetExpr inner, Constraint c, bool appositive) {
  return {Constrained{std::move(inner), std::move(c), appositive}};
}
EntitySetExpr group(EntitySetExpr inner) { return {Group{std::move(inner)}}; }

Constraint attr_cmp(std::string attribute, Cop cop, ValueLiteral value,
                    std::optional<QualifierCond> qualifier) {
  return {AttrCmp{std::move(attribute), cop, std::move(value), std::move(qualifier)}};
}
Constraint attr_sup(Sop sop, std::string attribute, std::optional<QualifierCond> qualifier) {
  return {AttrSup{sop, std::move(attribute), std::move(qualifier)}};
}
Constraint rel(std::string relation, std::optional<Dir> dir, EntitySetExpr target,
               std::optional<CountCmp> count, std::optional<QualifierCond> qualifier) {
  return {Rel{std::move(relation), dir, std::move(target), std::move(count),
              std::move(qualifier)}};
}
Constraint rel_sup(std::string relation, std::optional<Dir> dir, Sop sop, EntitySetExpr target) {
  return {RelSup{std::move(relation), dir, sop, std::move(target)}};
}

}  // namespace build

std::string_view variant_name(const QueryAst& q) {
  static constexpr std::string_view kNames[] = {
      "EntityQuery", "AttributeQuery", "RelationQuery", "QualifierQuery",
      "CountQuery",  "VerifyQuery",    "ValueQuery",    "SuperlativeQuery"};
  return kNames[q.node.index()];
}

std::string_view variant_name(const EntitySetExpr& e) {
  static constexpr std::string_view kNames[] = {"Entity",   "Concept",     "Typed",
                                                "Combine",  "Constrained", "Group"};
  return kNames[e.node.index()];
}

std::string_view variant_name(const Constraint& c) {
  static constexpr std::string_view kNames[] = {"AttrCmp", "AttrSup", "Rel", "RelSup"};
  return kNames[c.node.index()];
}

std::string_view variant_name(const ValueExpr& v) {
  static constexpr std::string_view kNames[] = {"Lit", "AttrOfEntity", "Aggregate", "Combine"};
  return kNames[v.node.index()];
}

namespace {

int constraint_depth(const Constraint& c) {
  return std::visit(overloaded{
                        [](const Rel& r) { return depth(*r.target); },
                        [](const RelSup& r) { return depth(*r.target); },
                        [](const auto&) { return 0; },
                    },
                    c.node);
}

}  // namespace

int depth(const EntitySetExpr& e) {
  return std::visit(
      overloaded{
          [](const EntityLeaf&) { return 1; },
          [](const ConceptLeaf&) { return 1; },
          [](const Typed& t) { return 1 + depth(*t.inner); },
          [](const Combine& c) { return 1 + std::max(depth(*c.left), depth(*c.right)); },
          [](const Constrained& c) {
            return 1 + std::max(depth(*c.inner), constraint_depth(c.constraint));
          },
          [](const Group& g) { return 1 + depth(*g.inner); },
      },
      e.node);
}

int depth(const ValueExpr& v) {
  return std::visit(overloaded{
                        [](const Lit&) { return 1; },
                        [](const AttrOfEntity&) { return 1; },
                        [](const Aggregate& a) { return 1 + depth(*a.inner); },
                        [](const ValueCombine& c) {
                          return 1 + std::max(depth(*c.left), depth(*c.right));
                        },
                    },
                    v.node);
}

int depth(const QueryAst& q) {
  return std::visit(
      overloaded{
          [](const RelationQuery& r) { return std::max(depth(r.source), depth(r.target)); },
          [](const QualifierQuery& r) {
            int t = constraint_depth(r.constraint);
            return std::max(depth(r.entityset), t ? t + 1 : 1);
          },
          [](const VerifyQuery& r) {
            int t = constraint_depth(r.constraint);
            return std::max(depth(r.entityset), t ? t + 1 : 1);
          },
          [](const ValueQuery& r) { return depth(r.value); },
          [](const auto& r) { return depth(r.entityset); },
      },
      q.node);
}

namespace {

class TreeDumper {
 public:
  std::string str() const { return out_.str(); }

  void query(const QueryAst& q) {
    std::visit(overloaded{
                   [&](const EntityQuery& x) {
                     line(0, "EntityQuery");
                     set(1, x.entityset);
                   },
                   [&](const AttributeQuery& x) {
                     line(0, "AttributeQuery attribute=" + quote(x.attribute));
                     set(1, x.entityset);
                   },
                   [&](const RelationQuery& x) {
                     line(0, "RelationQuery");
                     set(1, x.source);
                     set(1, x.target);
                   },
                   [&](const QualifierQuery& x) {
                     line(0, "QualifierQuery qualifier=" + quote(x.qualifier));
                     set(1, x.entityset);
                     constraint(1, x.constraint);
                   },
                   [&](const CountQuery& x) {
                     line(0, "CountQuery");
                     set(1, x.entityset);
                   },
                   [&](const VerifyQuery& x) {
                     line(0, "VerifyQuery");
                     set(1, x.entityset);
                     constraint(1, x.constraint);
                   },
                   [&](const ValueQuery& x) {
                     line(0, "ValueQuery");
                     value(1, x.value);
                   },
                   [&](const SuperlativeQuery& x) {
                     line(0, "SuperlativeQuery sop=" + std::string(keyword(x.sop)) +
                                 " attribute=" + quote(x.attribute));
                     set(1, x.entityset);
                   },
               },
               q.node);
  }

 private:
  static std::string quote(const std::string& s) { return "\"" + s + "\""; }

  static std::string literal(const ValueLiteral& v) {
    return std::string(keyword(v.vtype)) + "(" + quote(v.raw) + ")";
  }

  void line(int indent, const std::string& text) {
    out_ << std::string(static_cast<std::size_t>(indent) * 2, ' ') << text << '\n';
  }

  void qualifier(int indent, const std::optional<QualifierCond>& q) {
    if (!q) return;
    line(indent, "Qualifier key=" + quote(q->key) + " cop=" + std::string(keyword(q->cop)) +
                     " value=" + literal(q->value));
  }

  static std::string dir_text(const std::optional<Dir>& d) {
    return d ? std::string(keyword(*d)) : std::string("default");
  }

  void constraint(int indent, const Constraint& c) {
    std::visit(overloaded{
                   [&](const AttrCmp& x) {
                     line(indent, "AttrCmp attribute=" + quote(x.attribute) +
                                      " cop=" + std::string(keyword(x.cop)) +
                                      " value=" + literal(x.value));
                     qualifier(indent + 1, x.qualifier);
                   },
                   [&](const AttrSup& x) {
                     line(indent, "AttrSup sop=" + std::string(keyword(x.sop)) +
                                      " attribute=" + quote(x.attribute));
                     qualifier(indent + 1, x.qualifier);
                   },
                   [&](const Rel& x) {
                     std::string head = "Rel relation=" + quote(x.relation) + " dir=" + dir_text(x.dir);
                     if (x.count)
                       head += " count=" + std::string(keyword(x.count->cop)) + " " +
                               literal(x.count->value);
                     line(indent, head);
                     set(indent + 1, *x.target);
                     qualifier(indent + 1, x.qualifier);
                   },
                   [&](const RelSup& x) {
                     line(indent, "RelSup relation=" + quote(x.relation) + " dir=" + dir_text(x.dir) +
                                      " sop=" + std::string(keyword(x.sop)));
                     set(indent + 1, *x.target);
                   },
               },
               c.node);
  }

  void set(int indent, const EntitySetExpr& e) {
    std::visit(overloaded{
                   [&](const EntityLeaf& x) { line(indent, "Entity name=" + quote(x.name)); },
                   [&](const ConceptLeaf& x) { line(indent, "Concept name=" + quote(x.name)); },
                   [&](const Typed& x) {
                     line(indent, "Typed concept=" + quote(x.concept_name));
                     set(indent + 1, *x.inner);
                   },
                   [&](const Combine& x) {
                     line(indent, "Combine lop=" + std::string(keyword(x.lop)));
                     set(indent + 1, *x.left);
                     set(indent + 1, *x.right);
                   },
                   [&](const Constrained& x) {
                     line(indent, x.appositive ? "Constrained appositive" : "Constrained");
                     set(indent + 1, *x.inner);
                     constraint(indent + 1, x.constraint);
                   },
                   [&](const Group& x) {
                     line(indent, "Group");
                     set(indent + 1, *x.inner);
                   },
               },
               e.node);
  }

  void value(int indent, const ValueExpr& v) {
    std::visit(overloaded{
                   [&](const Lit& x) { line(indent, "Lit " + literal(x.value)); },
                   [&](const AttrOfEntity& x) {
                     line(indent, "AttrOfEntity attribute=" + quote(x.attribute) +
                                      " entity=" + quote(x.entity));
                   },
                   [&](const Aggregate& x) {
                     line(indent, "Aggregate vop=" + std::string(keyword(x.vop)));
                     value(indent + 1, *x.inner);
                   },
                   [&](const ValueCombine& x) {
                     line(indent, "Combine lop=" + std::string(keyword(x.lop)));
                     value(indent + 1, *x.left);
                     value(indent + 1, *x.right);
                   },
               },
               v.node);
  }

  std::ostringstream out_;
};

}  // namespace

std::string dump_tree(const QueryAst& q) {
  TreeDumper d;
  d.query(q);
  return d.str();
}

}  // namespace graphq
