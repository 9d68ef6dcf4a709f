#include <map>

#include "kopl_program.hpp"
#include "reverse.hpp"

namespace graphq {

namespace {

struct ReadError {
  std::string code;
  std::string message;
  Span span;
};

[[noreturn]] void fail(std::string code, Span span, std::string message) {
  throw ReadError{std::move(code), std::move(message), span};
}

// Partial program state while simulating the stack.
struct Item {
  enum Kind {
    All,        // FindAll() before its FilterConcept
    Set,        // entity set
    Related,    // Relate(...) output awaiting And / FilterRelCount
    AttrFocus,  // FilterAttr(a) awaiting QFilter / SelectAmong
    Values,     // QueryAttr(a) output
    Value,      // value expression
    QualRel,    // QueryRelationQualifier output
    Final,      // finished query
  } kind = Set;
  std::optional<EntitySetExpr> es;
  // Related: relation, dir, target. AttrFocus/Values: attribute.
  std::string label;
  Dir dir = Dir::Backward;
  std::optional<EntitySetExpr> target;
  std::optional<QualifierCond> qualifier;
  std::optional<ValueExpr> value;
  std::optional<QueryAst> query;
  // A QFilter may still attach to the AttrCmp just added to `es`.
  bool qfilter_open = false;
};

Item make_item(Item::Kind kind) {
  Item it;
  it.kind = kind;
  return it;
}

enum class Arity { Unary, Binary, Source };

const std::map<std::string, Arity>& functions() {
  static const std::map<std::string, Arity> table{
      {"Find", Arity::Source},
      {"FindAll", Arity::Source},
      {"Const", Arity::Source},
      {"FilterConcept", Arity::Unary},
      {"FilterStr", Arity::Unary},
      {"FilterNum", Arity::Unary},
      {"FilterYear", Arity::Unary},
      {"FilterDate", Arity::Unary},
      {"FilterTime", Arity::Unary},
      {"QFilterStr", Arity::Unary},
      {"QFilterNum", Arity::Unary},
      {"QFilterYear", Arity::Unary},
      {"QFilterDate", Arity::Unary},
      {"QFilterTime", Arity::Unary},
      {"FilterAttr", Arity::Unary},
      {"SelectAmong", Arity::Unary},
      {"Relate", Arity::Unary},
      {"What", Arity::Unary},
      {"Count", Arity::Unary},
      {"Exist", Arity::Unary},
      {"QueryAttr", Arity::Unary},
      {"QueryAttrQualifier", Arity::Unary},
      {"VerifyStr", Arity::Unary},
      {"VerifyNum", Arity::Unary},
      {"VerifyYear", Arity::Unary},
      {"VerifyDate", Arity::Unary},
      {"VerifyTime", Arity::Unary},
      {"Aggregate", Arity::Unary},
      {"And", Arity::Binary},
      {"Or", Arity::Binary},
      {"Not", Arity::Binary},
      {"FilterRelCount", Arity::Binary},
      {"QueryRelation", Arity::Binary},
      {"QueryRelationQualifier", Arity::Binary},
  };
  return table;
}

std::optional<VType> type_of_suffix(std::string_view s) {
  if (s == "Str") return VType::String;
  if (s == "Num") return VType::Number;
  if (s == "Year") return VType::Year;
  if (s == "Date") return VType::Date;
  if (s == "Time") return VType::Time;
  return std::nullopt;
}

class Reader {
 public:
  explicit Reader(const SchemaMapping& m) : m_(m) {}

  QueryAst read(const KoplProgram& program) {
    for (const auto& seg : program.segments) {
      if (seg.steps.empty()) fail("E_KOPL_SYNTAX", {0, 0}, "empty segment");
      for (std::size_t i = 0; i < seg.steps.size(); ++i) {
        const auto& st = seg.steps[i];
        auto it = functions().find(st.function);
        if (it == functions().end())
          fail("E_UNKNOWN_FUNCTION", st.span, "unknown function '" + st.function + "'");
        if ((i == 0) != (it->second != Arity::Unary))
          fail("E_BAD_BRANCH", st.span,
               st.function + (i == 0 ? " needs an input state" : " must start a segment"));
        switch (it->second) {
          case Arity::Source: stack_.push_back(source(st)); break;
          case Arity::Binary: {
            if (stack_.size() < 2) fail("E_BAD_BRANCH", st.span, st.function + " needs two inputs");
            Item right = std::move(stack_.back());
            stack_.pop_back();
            Item left = std::move(stack_.back());
            stack_.pop_back();
            stack_.push_back(binary(st, std::move(left), std::move(right)));
            break;
          }
          case Arity::Unary: unary(st, stack_.back()); break;
        }
      }
    }
    if (stack_.size() != 1)
      fail("E_BAD_BRANCH", {0, 0}, "program leaves " + std::to_string(stack_.size()) + " states");
    Item& top = stack_.back();
    switch (top.kind) {
      case Item::Final: return *top.query;
      case Item::Values:
        if (top.qualifier) break;
        return QueryAst{AttributeQuery{top.label, std::move(*top.es)}};
      case Item::Value: return QueryAst{ValueQuery{std::move(*top.value)}};
      case Item::QualRel: return *top.query;
      default: break;
    }
    fail("E_BAD_BRANCH", {0, 0}, "program does not end in a query function");
  }

 private:
  void arity(const KoplStep& st, std::size_t lo, std::size_t hi) const {
    if (st.args.size() < lo || st.args.size() > hi)
      fail("E_ARITY", st.span,
           st.function + " takes " +
               (lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi)) +
               " arguments, got " + std::to_string(st.args.size()));
  }

  std::string label(const KoplStep& st, const std::string& arg) const {
    std::string l = m_.denormalize_label(arg);
    if (l.empty() || m_.normalize_label(l) != arg)
      fail("E_UNKNOWN_PREDICATE", st.span, "no label renders as '" + arg + "'");
    return l;
  }

  static Cop cop(const KoplStep& st, const std::string& s) {
    auto c = parse_cop_symbol(s);
    if (!c) fail("E_BAD_VALUE", st.span, "'" + s + "' is not a comparison operator");
    return *c;
  }

  static ValueLiteral literal(const KoplStep& st, VType t, const std::string& raw) {
    auto v = parse_value_literal(t, raw);
    if (!v.value) fail("E_BAD_VALUE", st.span, v.error);
    return *v.value;
  }

  // Comparison tail starting at args[from]: value parts then the operator.
  std::pair<Cop, ValueLiteral> comparison(const KoplStep& st, VType t, std::size_t from) const {
    if (st.args.size() <= from) arity(st, from + 1, from + 3);
    std::size_t n = st.args.size() - from;
    switch (t) {
      case VType::String:
        arity(st, from + 1, from + 2);
        return {n == 2 ? cop(st, st.args[from + 1]) : Cop::Is, literal(st, t, st.args[from])};
      case VType::Number: {
        arity(st, from + 2, from + 3);
        const auto& mag = st.args[from];
        if (mag.find(' ') != std::string::npos)
          fail("E_BAD_VALUE", st.span, "'" + mag + "' is not a number");
        std::string raw = n == 3 ? mag + " " + st.args[from + 1] : mag;
        return {cop(st, st.args.back()), literal(st, t, raw)};
      }
      default:
        arity(st, from + 2, from + 2);
        return {cop(st, st.args[from + 1]), literal(st, t, st.args[from])};
    }
  }

  [[noreturn]] static void bad_input(const KoplStep& st, std::string_view wanted) {
    fail("E_BAD_BRANCH", st.span, st.function + " expects " + std::string(wanted));
  }

  static void need(const KoplStep& st, const Item& it, Item::Kind kind, std::string_view wanted) {
    if (it.kind != kind) bad_input(st, wanted);
  }

  Item source(const KoplStep& st) {
    Item it = make_item(Item::Set);
    if (st.function == "Find") {
      arity(st, 1, 1);
      it.es = build::entity(st.args[0]);
    } else if (st.function == "FindAll") {
      arity(st, 0, 0);
      it.kind = Item::All;
    } else {
      arity(st, 2, 2);
      auto t = parse_vtype(st.args[0]);
      if (!t) fail("E_BAD_VALUE", st.span, "'" + st.args[0] + "' is not a value type");
      it.kind = Item::Value;
      it.value = ValueExpr{Lit{literal(st, *t, st.args[1])}};
    }
    return it;
  }

  // Values that are a plain attribute of one entity read as AttrOfEntity.
  static ValueExpr as_value(const KoplStep& st, Item& it) {
    if (it.kind == Item::Value) return std::move(*it.value);
    if (it.kind == Item::Values && !it.qualifier) {
      if (auto* leaf = std::get_if<EntityLeaf>(&it.es->node))
        return ValueExpr{AttrOfEntity{it.label, leaf->name}};
    }
    bad_input(st, "values");
  }

  void unary(const KoplStep& st, Item& it) {
    const std::string& fn = st.function;
    bool keep_open = false;

    if (fn == "FilterConcept") {
      arity(st, 1, 1);
      if (it.kind == Item::All) {
        it.kind = Item::Set;
        it.es = build::concept_set(st.args[0]);
      } else {
        need(st, it, Item::Set, "an entity set");
        it.es = build::typed(st.args[0], std::move(*it.es));
      }
    } else if (fn.rfind("QFilter", 0) == 0) {
      auto t = type_of_suffix(std::string_view(fn).substr(7));
      auto [c, v] = comparison(st, *t, 1);
      QualifierCond q{label(st, st.args[0]), c, std::move(v)};
      if (it.kind == Item::Set && it.qfilter_open) {
        auto& con = std::get<Constrained>(it.es->node);
        std::get<AttrCmp>(con.constraint.node).qualifier = std::move(q);
      } else if ((it.kind == Item::Related || it.kind == Item::AttrFocus ||
                  it.kind == Item::Values) &&
                 !it.qualifier) {
        it.qualifier = std::move(q);
      } else if (it.kind == Item::QualRel) {
        auto& qq = std::get<QualifierQuery>(it.query->node);
        auto& rel = std::get<Rel>(qq.constraint.node);
        if (rel.qualifier) bad_input(st, "facts without a condition");
        rel.qualifier = std::move(q);
      } else {
        bad_input(st, "the facts of a preceding filter or relation");
      }
    } else if (fn.rfind("Filter", 0) == 0 && type_of_suffix(std::string_view(fn).substr(6))) {
      need(st, it, Item::Set, "an entity set");
      auto t = type_of_suffix(std::string_view(fn).substr(6));
      auto [c, v] = comparison(st, *t, 1);
      it.es = build::constrained(std::move(*it.es),
                                 build::attr_cmp(label(st, st.args[0]), c, std::move(v)));
      keep_open = true;
    } else if (fn == "FilterAttr") {
      arity(st, 1, 1);
      need(st, it, Item::Set, "an entity set");
      it.kind = Item::AttrFocus;
      it.label = label(st, st.args[0]);
    } else if (fn == "SelectAmong") {
      arity(st, 2, 2);
      auto sop = parse_sop(st.args[1]);
      if (!sop) fail("E_BAD_VALUE", st.span, "'" + st.args[1] + "' is not largest or smallest");
      std::string a = label(st, st.args[0]);
      std::optional<QualifierCond> q;
      if (it.kind == Item::AttrFocus) {
        if (it.label != a) fail("E_BAD_BRANCH", st.span, "SelectAmong attribute differs from FilterAttr");
        q = std::move(it.qualifier);
        it.qualifier.reset();
        it.kind = Item::Set;
      }
      need(st, it, Item::Set, "an entity set");
      it.es = build::constrained(std::move(*it.es), build::attr_sup(*sop, a, std::move(q)));
    } else if (fn == "Relate") {
      arity(st, 2, 2);
      need(st, it, Item::Set, "an entity set");
      auto dir = parse_dir(st.args[1]);
      if (!dir) fail("E_BAD_VALUE", st.span, "'" + st.args[1] + "' is not forward or backward");
      it.kind = Item::Related;
      it.label = label(st, st.args[0]);
      it.dir = *dir;
      it.target = std::move(it.es);
      it.es.reset();
    } else if (fn == "What" || fn == "Count") {
      arity(st, 0, 0);
      need(st, it, Item::Set, "an entity set");
      it.kind = Item::Final;
      it.query = fn == "What" ? QueryAst{EntityQuery{std::move(*it.es)}}
                              : QueryAst{CountQuery{std::move(*it.es)}};
    } else if (fn == "Exist") {
      arity(st, 0, 0);
      need(st, it, Item::Set, "an entity set");
      auto* c = std::get_if<Constrained>(&it.es->node);
      if (!c) bad_input(st, "a constrained entity set");
      EntitySetExpr inner = *c->inner;
      Constraint con = c->constraint;
      it.kind = Item::Final;
      it.query = QueryAst{VerifyQuery{std::move(inner), std::move(con)}};
    } else if (fn == "QueryAttr") {
      arity(st, 1, 1);
      need(st, it, Item::Set, "an entity set");
      it.kind = Item::Values;
      it.label = label(st, st.args[0]);
    } else if (fn == "QueryAttrQualifier") {
      arity(st, 2, 2);
      need(st, it, Item::Set, "an entity set");
      auto* c = std::get_if<Constrained>(&it.es->node);
      auto* cmp = c ? std::get_if<AttrCmp>(&c->constraint.node) : nullptr;
      std::string a = label(st, st.args[0]);
      if (!cmp || cmp->attribute != a)
        bad_input(st, "a set filtered on attribute '" + a + "'");
      EntitySetExpr inner = *c->inner;
      Constraint con = c->constraint;
      it.kind = Item::Final;
      it.query = QueryAst{QualifierQuery{label(st, st.args[1]), std::move(inner), std::move(con)}};
    } else if (fn.rfind("Verify", 0) == 0) {
      need(st, it, Item::Values, "attribute values");
      auto t = type_of_suffix(std::string_view(fn).substr(6));
      auto [c, v] = comparison(st, *t, 0);
      AttrCmp cmp{it.label, c, std::move(v), std::move(it.qualifier)};
      it.kind = Item::Final;
      it.query = QueryAst{VerifyQuery{std::move(*it.es), Constraint{std::move(cmp)}}};
    } else if (fn == "Aggregate") {
      arity(st, 1, 1);
      auto vop = parse_vop(st.args[0]);
      if (!vop) fail("E_BAD_VALUE", st.span, "'" + st.args[0] + "' is not an aggregate");
      ValueExpr inner = as_value(st, it);
      it = make_item(Item::Value);
      it.value = ValueExpr{Aggregate{*vop, std::move(inner)}};
    } else {
      bad_input(st, "a different position");
    }
    it.qfilter_open = keep_open;
  }

  Item binary(const KoplStep& st, Item left, Item right) {
    const std::string& fn = st.function;
    Item out = make_item(Item::Set);
    if (fn == "And" && left.kind == Item::Set && right.kind == Item::Related) {
      arity(st, 0, 0);
      out.es = build::constrained(std::move(*left.es),
                                  build::rel(right.label, right.dir, std::move(*right.target),
                                             std::nullopt, std::move(right.qualifier)));
    } else if (fn == "And" || fn == "Or" || fn == "Not") {
      arity(st, 0, 0);
      Lop lop = fn == "And" ? Lop::And : fn == "Or" ? Lop::Or : Lop::Not;
      if (left.kind == Item::Set && right.kind == Item::Set) {
        out.es = build::combine(lop, std::move(*left.es), std::move(*right.es));
      } else {
        ValueExpr l = as_value(st, left);
        ValueExpr r = as_value(st, right);
        out.kind = Item::Value;
        out.value = ValueExpr{ValueCombine{lop, std::move(l), std::move(r)}};
      }
    } else if (fn == "FilterRelCount") {
      arity(st, 2, 2);
      if (left.kind != Item::Set || right.kind != Item::Related)
        bad_input(st, "an entity set and related facts");
      auto n = parse_value_literal(VType::Number, st.args[1]);
      if (!n.value || n.value->unit) fail("E_BAD_VALUE", st.span, "count must be a plain number");
      out.es = build::constrained(
          std::move(*left.es),
          build::rel(right.label, right.dir, std::move(*right.target),
                     CountCmp{cop(st, st.args[0]), *n.value}, std::move(right.qualifier)));
    } else if (fn == "QueryRelation") {
      arity(st, 0, 0);
      if (left.kind != Item::Set || right.kind != Item::Set) bad_input(st, "two entity sets");
      out.kind = Item::Final;
      out.query = QueryAst{RelationQuery{std::move(*left.es), std::move(*right.es)}};
    } else {
      arity(st, 2, 3);
      if (left.kind != Item::Set || right.kind != Item::Set) bad_input(st, "two entity sets");
      Dir dir = Dir::Backward;
      if (st.args.size() == 3) {
        if (st.args[2] != "forward") fail("E_BAD_VALUE", st.span, "third argument must be 'forward'");
        dir = Dir::Forward;
      }
      out.kind = Item::QualRel;
      out.query = QueryAst{QualifierQuery{
          label(st, st.args[1]), std::move(*left.es),
          build::rel(label(st, st.args[0]), dir, std::move(*right.es))}};
    }
    return out;
  }

  const SchemaMapping& m_;
  std::vector<Item> stack_;
};

}  // namespace

Result<QueryAst> parse_kopl(std::string_view text, const SchemaMapping& mapping) {
  auto program = parse_kopl_program(text);
  if (!program) return program.diagnostics();
  try {
    QueryAst q = normalize(Reader(mapping).read(*program));
    auto diags = validate(q);
    if (!diags.empty()) return diags;
    return q;
  } catch (const ReadError& e) {
    return error(e.code, e.span, e.message);
  }
}

}  // namespace graphq
