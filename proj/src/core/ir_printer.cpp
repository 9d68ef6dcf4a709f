#include "ir_syntax.hpp"
#include "overloaded.hpp"

namespace graphq {

namespace {

class Printer {
 public:
  std::string take() { return std::move(out_); }

  void query(const QueryAst& q) {
    std::visit(overloaded{
                   [&](const EntityQuery& x) {
                     word("what is");
                     set(x.entityset);
                   },
                   [&](const AttributeQuery& x) {
                     word("what is the attribute");
                     marker("A", x.attribute);
                     word("of");
                     set(x.entityset);
                   },
                   [&](const RelationQuery& x) {
                     word("what is the relation from");
                     set(x.source);
                     word("to");
                     set(x.target);
                   },
                   [&](const QualifierQuery& x) {
                     word("what is the qualifier");
                     marker("Q", x.qualifier);
                     word("of");
                     set(x.entityset);
                     constraint(x.constraint);
                   },
                   [&](const CountQuery& x) {
                     word("how many");
                     set(x.entityset);
                   },
                   [&](const VerifyQuery& x) {
                     word("whether");
                     set(x.entityset);
                     constraint(x.constraint);
                   },
                   [&](const ValueQuery& x) {
                     word("what is");
                     value(x.value);
                   },
                   [&](const SuperlativeQuery& x) {
                     word("which one has the");
                     word(keyword(x.sop));
                     marker("A", x.attribute);
                     word("among");
                     set(x.entityset);
                   },
               },
               q.node);
  }

 private:
  // Appends with a separating space unless `glue` joins it to the previous text.
  void word(std::string_view text, bool glue = false) {
    if (!out_.empty() && !glue) out_ += ' ';
    out_ += text;
  }

  void marker(std::string_view tag, const std::string& payload) {
    word("<" + std::string(tag) + ">");
    word(payload);
    word("</" + std::string(tag) + ">");
  }

  void literal(const ValueLiteral& v) {
    word(keyword(v.vtype));
    marker("V", v.raw);
  }

  void qualifier(const std::optional<QualifierCond>& q) {
    if (!q) return;
    marker("Q", q->key);
    word(keyword(q->cop));
    literal(q->value);
  }

  void constraint(const Constraint& c) {
    std::visit(overloaded{
                   [&](const AttrCmp& x) {
                     word("whose");
                     marker("A", x.attribute);
                     word(keyword(x.cop));
                     literal(x.value);
                     qualifier(x.qualifier);
                   },
                   [&](const AttrSup& x) {
                     word("that have");
                     word(keyword(x.sop));
                     marker("A", x.attribute);
                     qualifier(x.qualifier);
                   },
                   [&](const Rel& x) {
                     word("that");
                     marker("R", x.relation);
                     if (x.dir) word(keyword(*x.dir));
                     word("to");
                     if (x.count) {
                       word(keyword(x.count->cop));
                       literal(x.count->value);
                     }
                     set(*x.target);
                     qualifier(x.qualifier);
                   },
                   [&](const RelSup& x) {
                     word("that");
                     marker("R", x.relation);
                     if (x.dir) word(keyword(*x.dir));
                     word("to");
                     word(keyword(x.sop));
                     set(*x.target);
                   },
               },
               c.node);
  }

  void set(const EntitySetExpr& e) {
    std::visit(overloaded{
                   [&](const EntityLeaf& x) { marker("E", x.name); },
                   [&](const ConceptLeaf& x) { marker("C", x.name); },
                   [&](const Typed& x) {
                     word("<ES>");
                     marker("C", x.concept_name);
                     set(*x.inner);
                     word("</ES>");
                   },
                   [&](const Combine& x) {
                     word("<ES>");
                     set(*x.left);
                     word(keyword(x.lop));
                     set(*x.right);
                     word("</ES>");
                   },
                   [&](const Constrained& x) {
                     word("<ES>");
                     set(*x.inner);
                     if (x.appositive) {
                       word("(<ES>");
                       word("ones");
                       constraint(x.constraint);
                       word("</ES>");
                       word(")", true);
                     } else {
                       constraint(x.constraint);
                     }
                     word("</ES>");
                   },
                   [&](const Group& x) {
                     word("<ES>");
                     set(*x.inner);
                     word("</ES>");
                   },
               },
               e.node);
  }

  void value(const ValueExpr& v) {
    std::visit(overloaded{
                   [&](const Lit& x) { literal(x.value); },
                   [&](const AttrOfEntity& x) {
                     marker("A", x.attribute);
                     word("of");
                     marker("E", x.entity);
                   },
                   [&](const Aggregate& x) {
                     word(keyword(x.vop));
                     word("of");
                     operand(*x.inner);
                   },
                   [&](const ValueCombine& x) {
                     value(*x.left);
                     word(keyword(x.lop));
                     operand(*x.right);
                   },
               },
               v.node);
  }

  // Combines are left-associative, so a combine in operand position needs
  // explicit parentheses.
  void operand(const ValueExpr& v) {
    if (std::holds_alternative<ValueCombine>(v.node)) {
      word("(");
      value(v);
      word(")");
    } else {
      value(v);
    }
  }

  std::string out_;
};

}  // namespace

std::string print_ir_surface(const QueryAst& ast) {
  Printer p;
  p.query(ast);
  return p.take();
}

std::string print_ir(const QueryAst& ast) { return print_ir_surface(normalize(ast)); }

}  // namespace graphq
