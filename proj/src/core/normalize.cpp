#include "ast.hpp"
#include "overloaded.hpp"

namespace graphq {

namespace {

Constraint normalize_constraint(const Constraint& c) {
  return std::visit(overloaded{
                        [](const Rel& r) -> Constraint {
                          return {Rel{r.relation, r.dir.value_or(Dir::Backward),
                                      normalize(*r.target), r.count, r.qualifier}};
                        },
                        [](const RelSup& r) -> Constraint {
                          return {RelSup{r.relation, r.dir.value_or(Dir::Backward), r.sop,
                                         normalize(*r.target)}};
                        },
                        [](const auto& x) -> Constraint { return {x}; },
                    },
                    c.node);
}

}  // namespace

EntitySetExpr normalize(const EntitySetExpr& e) {
  return std::visit(
      overloaded{
          [](const EntityLeaf& x) -> EntitySetExpr { return {x}; },
          [](const ConceptLeaf& x) -> EntitySetExpr { return {x}; },
          [](const Typed& x) -> EntitySetExpr {
            return {Typed{x.concept_name, normalize(*x.inner)}};
          },
          [](const Combine& x) -> EntitySetExpr {
            return {Combine{x.lop, normalize(*x.left), normalize(*x.right)}};
          },
          [](const Constrained& x) -> EntitySetExpr {
            return {Constrained{normalize(*x.inner), normalize_constraint(x.constraint), false}};
          },
          [](const Group& x) -> EntitySetExpr { return normalize(*x.inner); },
      },
      e.node);
}

QueryAst normalize(const QueryAst& q) {
  return std::visit(
      overloaded{
          [](const EntityQuery& x) -> QueryAst {
            auto es = normalize(x.entityset);
            // "what is ES that have SOP <A> a </A>" and the superlative query
            // denote the same selection.
            if (auto* c = std::get_if<Constrained>(&es.node)) {
              if (auto* sup = std::get_if<AttrSup>(&c->constraint.node); sup && !sup->qualifier)
                return {SuperlativeQuery{sup->sop, sup->attribute, *c->inner}};
            }
            return {EntityQuery{std::move(es)}};
          },
          [](const AttributeQuery& x) -> QueryAst {
            return {AttributeQuery{x.attribute, normalize(x.entityset)}};
          },
          [](const RelationQuery& x) -> QueryAst {
            return {RelationQuery{normalize(x.source), normalize(x.target)}};
          },
          [](const QualifierQuery& x) -> QueryAst {
            return {QualifierQuery{x.qualifier, normalize(x.entityset),
                                   normalize_constraint(x.constraint)}};
          },
          [](const CountQuery& x) -> QueryAst { return {CountQuery{normalize(x.entityset)}}; },
          [](const VerifyQuery& x) -> QueryAst {
            return {VerifyQuery{normalize(x.entityset), normalize_constraint(x.constraint)}};
          },
          [](const ValueQuery& x) -> QueryAst {
            if (auto* a = std::get_if<AttrOfEntity>(&x.value.node))
              return {AttributeQuery{a->attribute, build::entity(a->entity)}};
            return {x};
          },
          [](const SuperlativeQuery& x) -> QueryAst {
            return {SuperlativeQuery{x.sop, x.attribute, normalize(x.entityset)}};
          },
      },
      q.node);
}

}  // namespace graphq
