#include <algorithm>
#include <set>

#include "evaluator.hpp"
#include "overloaded.hpp"

namespace graphq {

namespace {

using Ids = std::vector<std::size_t>;

struct EvalError {
  std::string code;
  std::string message;
};

Ids intersect(const Ids& a, const Ids& b) {
  Ids out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Ids unite(const Ids& a, const Ids& b) {
  Ids out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Ids subtract(const Ids& a, const Ids& b) {
  Ids out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<ValueLiteral> distinct(std::vector<ValueLiteral> values) {
  std::set<std::string> seen;
  std::vector<ValueLiteral> out;
  for (auto& v : values)
    if (seen.insert(value_key(v)).second) out.push_back(std::move(v));
  return out;
}

class Interpreter {
 public:
  Interpreter(const Graph& g, const SchemaMapping& m) : g_(g), m_(m) {}

  Answer query(const QueryAst& q) {
    return std::visit(
        overloaded{
            [&](const EntityQuery& x) { return Answer::entities(names(set(x.entityset))); },
            [&](const CountQuery& x) {
              return Answer::number(static_cast<std::int64_t>(set(x.entityset).size()));
            },
            [&](const AttributeQuery& x) {
              std::vector<ValueLiteral> out;
              for (auto i : set(x.entityset))
                for (const auto& f : g_.at(i).attributes)
                  if (same(f.key, x.attribute)) out.push_back(f.value);
              return Answer::of_values(std::move(out));
            },
            [&](const SuperlativeQuery& x) {
              return Answer::entities(
                  names(superlative(set(x.entityset), x.attribute, x.sop, std::nullopt)));
            },
            [&](const RelationQuery& x) {
              Ids targets = set(x.target);
              std::vector<std::string> out;
              for (auto s : set(x.source))
                for (const auto& r : g_.at(s).relations)
                  if (std::binary_search(targets.begin(), targets.end(), g_.target_of(r)))
                    out.push_back(r.predicate);
              return Answer::predicates(std::move(out));
            },
            [&](const QualifierQuery& x) { return qualifier_query(x); },
            [&](const VerifyQuery& x) {
              return Answer::boolean(!filter(set(x.entityset), x.constraint).empty());
            },
            [&](const ValueQuery& x) { return Answer::of_values(values(x.value)); },
        },
        q.node);
  }

 private:
  bool same(const std::string& stored, const std::string& label) const {
    return m_.normalize_label(stored) == m_.normalize_label(label);
  }

  std::vector<std::string> names(const Ids& ids) const {
    std::vector<std::string> out;
    for (auto i : ids) out.push_back(g_.at(i).name);
    return out;
  }

  bool qualifier_ok(const std::vector<QualifierFact>& facts,
                    const std::optional<QualifierCond>& q) const {
    if (!q) return true;
    for (const auto& f : facts)
      if (same(f.key, q->key) && compare_values(f.value, q->cop, q->value)) return true;
    return false;
  }

  Ids set(const EntitySetExpr& e) {
    return std::visit(
        overloaded{
            [&](const EntityLeaf& x) { return g_.named(x.name); },
            [&](const ConceptLeaf& x) { return g_.of_concept(x.name); },
            [&](const Typed& x) { return intersect(set(*x.inner), g_.of_concept(x.concept_name)); },
            [&](const Combine& x) {
              Ids a = set(*x.left);
              Ids b = set(*x.right);
              switch (x.lop) {
                case Lop::And: return intersect(a, b);
                case Lop::Or: return unite(a, b);
                case Lop::Not: return subtract(a, b);
              }
              return a;
            },
            [&](const Constrained& x) { return filter(set(*x.inner), x.constraint); },
            [&](const Group& x) { return set(*x.inner); },
        },
        e.node);
  }

  // Maximal (or minimal) elements among the orderable values of `attribute`.
  Ids superlative(const Ids& s, const std::string& attribute, Sop sop,
                  const std::optional<QualifierCond>& q) const {
    std::vector<std::pair<std::size_t, const ValueLiteral*>> cands;
    for (auto i : s)
      for (const auto& f : g_.at(i).attributes)
        if (same(f.key, attribute) && f.value.vtype != VType::String && qualifier_ok(f.qualifiers, q))
          cands.emplace_back(i, &f.value);
    auto beaten = std::partial_ordering::greater;
    if (sop == Sop::Smallest) beaten = std::partial_ordering::less;
    Ids out;
    for (const auto& [i, v] : cands) {
      bool best = true;
      for (const auto& [j, w] : cands) {
        auto o = order_values(*w, *v);
        if (o && *o == beaten) {
          best = false;
          break;
        }
      }
      if (best) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Distinct related entities of x through `r` that lie in `targets`.
  std::set<std::size_t> related(std::size_t x, const Rel& r, const Ids& targets) const {
    std::set<std::size_t> out;
    auto in_targets = [&](std::size_t t) {
      return std::binary_search(targets.begin(), targets.end(), t);
    };
    if (r.dir.value_or(Dir::Backward) == Dir::Backward) {
      for (const auto& f : g_.at(x).relations) {
        std::size_t t = g_.target_of(f);
        if (same(f.predicate, r.relation) && in_targets(t) && qualifier_ok(f.qualifiers, r.qualifier))
          out.insert(t);
      }
    } else {
      for (const auto& e : g_.incoming(x)) {
        const auto& f = g_.at(e.source).relations[e.relation];
        if (same(f.predicate, r.relation) && in_targets(e.source) &&
            qualifier_ok(f.qualifiers, r.qualifier))
          out.insert(e.source);
      }
    }
    return out;
  }

  Ids filter(const Ids& s, const Constraint& c) {
    return std::visit(
        overloaded{
            [&](const AttrCmp& x) {
              Ids out;
              for (auto i : s)
                for (const auto& f : g_.at(i).attributes)
                  if (same(f.key, x.attribute) && compare_values(f.value, x.cop, x.value) &&
                      qualifier_ok(f.qualifiers, x.qualifier)) {
                    out.push_back(i);
                    break;
                  }
              return out;
            },
            [&](const AttrSup& x) { return superlative(s, x.attribute, x.sop, x.qualifier); },
            [&](const Rel& x) {
              Ids targets = set(*x.target);
              Ids out;
              for (auto i : s) {
                auto found = related(i, x, targets);
                bool keep = !found.empty();
                if (x.count) {
                  auto n = make_number(Decimal::from_int(static_cast<std::int64_t>(found.size())),
                                       std::nullopt);
                  keep = compare_values(n, x.count->cop, x.count->value);
                }
                if (keep) out.push_back(i);
              }
              return out;
            },
            [&](const RelSup&) -> Ids {
              throw EvalError{"E_EVAL_UNSUPPORTED", "relation superlatives have no defined semantics"};
            },
        },
        c.node);
  }

  Answer qualifier_query(const QualifierQuery& x) {
    std::vector<ValueLiteral> out;
    auto collect = [&](const std::vector<QualifierFact>& qs) {
      for (const auto& q : qs)
        if (same(q.key, x.qualifier)) out.push_back(q.value);
    };
    Ids s = set(x.entityset);
    if (auto* cmp = std::get_if<AttrCmp>(&x.constraint.node)) {
      for (auto i : s)
        for (const auto& f : g_.at(i).attributes)
          if (same(f.key, cmp->attribute) && compare_values(f.value, cmp->cop, cmp->value) &&
              qualifier_ok(f.qualifiers, cmp->qualifier))
            collect(f.qualifiers);
    } else {
      const auto& r = std::get<Rel>(x.constraint.node);
      Ids targets = set(*r.target);
      for (auto i : s) {
        if (r.dir.value_or(Dir::Backward) == Dir::Backward) {
          for (const auto& f : g_.at(i).relations)
            if (same(f.predicate, r.relation) &&
                std::binary_search(targets.begin(), targets.end(), g_.target_of(f)) &&
                qualifier_ok(f.qualifiers, r.qualifier))
              collect(f.qualifiers);
        } else {
          for (const auto& e : g_.incoming(i)) {
            const auto& f = g_.at(e.source).relations[e.relation];
            if (same(f.predicate, r.relation) &&
                std::binary_search(targets.begin(), targets.end(), e.source) &&
                qualifier_ok(f.qualifiers, r.qualifier))
              collect(f.qualifiers);
          }
        }
      }
    }
    return Answer::of_values(distinct(std::move(out)));
  }

  std::vector<ValueLiteral> values(const ValueExpr& v) {
    return std::visit(
        overloaded{
            [&](const Lit& x) { return std::vector<ValueLiteral>{x.value}; },
            [&](const AttrOfEntity& x) {
              std::vector<ValueLiteral> out;
              for (auto i : g_.named(x.entity))
                for (const auto& f : g_.at(i).attributes)
                  if (same(f.key, x.attribute)) out.push_back(f.value);
              return out;
            },
            [&](const Aggregate& x) { return aggregate_values(x.vop, values(*x.inner)); },
            [&](const ValueCombine& x) {
              auto left = distinct(values(*x.left));
              auto right = distinct(values(*x.right));
              std::set<std::string> rkeys;
              for (const auto& r : right) rkeys.insert(value_key(r));
              std::vector<ValueLiteral> out;
              for (auto& l : left) {
                bool in_right = rkeys.count(value_key(l)) > 0;
                if ((x.lop == Lop::Not) != in_right || x.lop == Lop::Or) out.push_back(l);
              }
              if (x.lop == Lop::Or) {
                for (auto& r : right) out.push_back(r);
                out = distinct(std::move(out));
              }
              return out;
            },
        },
        v.node);
  }

  const Graph& g_;
  const SchemaMapping& m_;
};

}  // namespace

Result<Answer> interpret(const QueryAst& ast, const Graph& graph, const SchemaMapping& mapping) {
  auto diags = validate(ast);
  if (!diags.empty()) return diags;
  try {
    return Interpreter(graph, mapping).query(normalize(ast));
  } catch (const EvalError& e) {
    return error(e.code, Span{0, 0}, e.message);
  }
}

}  // namespace graphq
