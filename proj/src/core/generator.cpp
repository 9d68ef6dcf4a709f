#include "generator.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace graphq {

namespace {

// Names deliberately include IR keywords, punctuation and non-ASCII text.
const std::vector<std::string> kEntityNames{
    "Uzbekistan",   "Tashkent",     "The Spiderwick Chronicles", "John Sayles",
    "Joseph L. Mankiewicz", "Columbia University", "what is", "and", "Zürich",
    "O'Brien \"Junior\"", "A, B (c)", "back\\slash", "kid film", "ones", "42", "a | b . c",
    "x < y"};
const std::vector<std::string> kConcepts{"film", "newscast", "city", "country",
                                         "university", "kid film", "person"};
const std::vector<std::string> kAttributes{"duration", "population", "height",
                                           "start time", "end time", "date of birth",
                                           "opening time", "motto", "area"};
const std::vector<std::string> kRelations{"capital", "educated at", "genre", "director",
                                          "member of", "located in", "spouse"};
const std::vector<std::string> kQualifierKeys{"start time", "end time", "point in time", "rank"};

const std::vector<std::string> kStrings{"red", "New York", "what is", "110"};
const std::vector<std::string> kMagnitudes{"0", "7", "42", "110", "2.5", "-3", "1e3"};
const std::vector<std::string> kYears{"1990", "2001", "1850"};
const std::vector<std::string> kDates{"2001-05-17", "1999-12-31", "1990-01-01"};
const std::vector<std::string> kTimes{"12:30", "08:15:30", "23:59"};

struct Preferred {
  VType type;
  std::optional<std::string> unit;
};

const std::map<std::string, Preferred>& preferred() {
  static const std::map<std::string, Preferred> table{
      {"duration", {VType::Number, "minute"}},
      {"population", {VType::Number, std::nullopt}},
      {"height", {VType::Number, "metre"}},
      {"start time", {VType::Date, std::nullopt}},
      {"end time", {VType::Year, std::nullopt}},
      {"date of birth", {VType::Date, std::nullopt}},
      {"opening time", {VType::Time, std::nullopt}},
      {"motto", {VType::String, std::nullopt}},
      {"area", {VType::Number, "square kilometre"}},
      {"point in time", {VType::Date, std::nullopt}},
      {"rank", {VType::Number, std::nullopt}},
  };
  return table;
}

std::vector<Cop> valid_cops(VType t) {
  if (t == VType::String) return {Cop::Is, Cop::IsNot};
  return {kAllCops.begin(), kAllCops.end()};
}

class Gen {
 public:
  explicit Gen(Rng& rng) : r_(rng) {}

  ValueLiteral literal(VType t, std::optional<std::string> unit) {
    switch (t) {
      case VType::String: return make_value(t, r_.pick(kStrings));
      case VType::Number: {
        std::string raw = r_.pick(kMagnitudes);
        if (unit) raw += " " + *unit;
        return make_value(t, raw);
      }
      case VType::Year: return make_value(t, r_.pick(kYears));
      case VType::Date: return make_value(t, r_.pick(kDates));
      case VType::Time: return make_value(t, r_.pick(kTimes));
    }
    return {};
  }

  // Usually the label's customary type; sometimes anything.
  ValueLiteral literal_for(const std::string& label) {
    auto it = preferred().find(label);
    if (it != preferred().end() && r_.chance(80)) return literal(it->second.type, it->second.unit);
    VType t = r_.pick(kAllVTypes);
    static const std::vector<std::optional<std::string>> kUnits{std::nullopt, "minute", "metre"};
    return literal(t, t == VType::Number ? r_.pick(kUnits) : std::nullopt);
  }

  Cop cop_for(const ValueLiteral& v) { return r_.pick(valid_cops(v.vtype)); }

  QualifierCond qualifier() {
    const auto& key = r_.pick(kQualifierKeys);
    auto v = literal_for(key);
    Cop c = cop_for(v);
    return QualifierCond{key, c, std::move(v)};
  }

  std::optional<QualifierCond> maybe_qualifier(unsigned percent) {
    if (!r_.chance(percent)) return std::nullopt;
    return qualifier();
  }

  std::optional<Dir> maybe_dir() {
    switch (r_.below(3)) {
      case 0: return std::nullopt;
      case 1: return Dir::Forward;
      default: return Dir::Backward;
    }
  }

  EntitySetExpr leaf() {
    if (r_.chance(60)) return build::entity(r_.pick(kEntityNames));
    return build::concept_set(r_.pick(kConcepts));
  }

  EntitySetExpr es(int d) {
    if (d <= 1 || r_.chance(25)) return leaf();
    switch (r_.below(10)) {
      case 0:
      case 1: return build::typed(r_.pick(kConcepts), es(d - 1));
      case 2:
      case 3: return build::combine(r_.pick(kAllLops), es(d - 1), es(d - 1));
      case 4: return build::group(es(d - 1));
      default: return build::constrained(es(d - 1), constraint(d - 1), r_.chance(20));
    }
  }

  Constraint attr_cmp() {
    const auto& a = r_.pick(kAttributes);
    auto v = literal_for(a);
    Cop c = cop_for(v);
    return build::attr_cmp(a, c, std::move(v), maybe_qualifier(20));
  }

  Constraint rel(int target_depth, bool allow_count) {
    std::optional<CountCmp> count;
    if (allow_count && r_.chance(25))
      count = CountCmp{r_.pick(kAllCops), make_value(VType::Number, std::to_string(r_.below(4)))};
    return build::rel(r_.pick(kRelations), maybe_dir(), es(target_depth), std::move(count),
                      maybe_qualifier(25));
  }

  // `target_depth` bounds the depth of any target entity set.
  Constraint constraint(int target_depth) {
    unsigned roll = static_cast<unsigned>(r_.below(100));
    if (roll < 35 || target_depth < 1) {
      if (target_depth < 1 && roll >= 70)
        return build::attr_sup(r_.pick(kAllSops), r_.pick(kAttributes), maybe_qualifier(20));
      return attr_cmp();
    }
    if (roll < 50) return build::attr_sup(r_.pick(kAllSops), r_.pick(kAttributes), maybe_qualifier(20));
    if (roll < 92) return rel(target_depth, true);
    return build::rel_sup(r_.pick(kRelations), maybe_dir(), r_.pick(kAllSops), es(target_depth));
  }

  ValueExpr value(int d, bool numeric) {
    if (d <= 1 || r_.chance(30)) {
      if (r_.chance(40))
        return ValueExpr{AttrOfEntity{r_.pick(kAttributes), r_.pick(kEntityNames)}};
      VType t = numeric ? VType::Number : r_.pick(kAllVTypes);
      return ValueExpr{Lit{literal(t, r_.chance(50) ? std::optional<std::string>("minute")
                                                     : std::nullopt)}};
    }
    if (r_.chance(50)) return ValueExpr{Aggregate{r_.pick(kAllVops), value(d - 1, true)}};
    return ValueExpr{ValueCombine{r_.pick(kAllLops), value(d - 1, numeric), value(d - 1, numeric)}};
  }

  QueryAst query(int d) {
    switch (r_.below(8)) {
      case 0: return QueryAst{EntityQuery{es(d)}};
      case 1: return QueryAst{AttributeQuery{r_.pick(kAttributes), es(d)}};
      case 2: return QueryAst{RelationQuery{es(d), es(d)}};
      case 3: {
        Constraint c = d >= 2 && r_.chance(60) ? rel(d - 1, false) : attr_cmp();
        return QueryAst{QualifierQuery{r_.pick(kQualifierKeys), es(d), std::move(c)}};
      }
      case 4: return QueryAst{CountQuery{es(d)}};
      case 5: return QueryAst{VerifyQuery{es(d), constraint(d - 1)}};
      case 6: return QueryAst{ValueQuery{value(d, false)}};
      default: return QueryAst{SuperlativeQuery{r_.pick(kAllSops), r_.pick(kAttributes), es(d)}};
    }
  }

 private:
  Rng& r_;
};

}  // namespace

QueryAst gen_ast(Rng& rng, int max_depth) {
  Gen g(rng);
  return g.query(std::max(1, max_depth));
}

Graph gen_graph(Rng& rng, int max_entities) {
  Gen g(rng);
  std::size_t n = 1 + rng.below(static_cast<std::size_t>(std::max(1, max_entities)));
  auto quals = [&]() {
    std::vector<QualifierFact> out;
    if (!rng.chance(35)) return out;
    std::size_t k = 1 + rng.below(2);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& key = rng.pick(kQualifierKeys);
      out.push_back({key, g.literal_for(key)});
    }
    return out;
  };
  std::vector<GraphEntity> entities(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& e = entities[i];
    e.id = "Q" + std::to_string(i + 1);
    e.name = rng.pick(kEntityNames);
    for (std::size_t c = rng.below(3); c > 0; --c) {
      const auto& concept_name = rng.pick(kConcepts);
      if (std::find(e.concepts.begin(), e.concepts.end(), concept_name) == e.concepts.end())
        e.concepts.push_back(concept_name);
    }
    for (std::size_t a = rng.below(5); a > 0; --a) {
      const auto& key = rng.pick(kAttributes);
      e.attributes.push_back({key, g.literal_for(key), quals()});
    }
    for (std::size_t r = rng.below(4); r > 0; --r)
      e.relations.push_back(
          {rng.pick(kRelations), "Q" + std::to_string(1 + rng.below(n)), quals()});
  }
  return Graph::from_parts(std::move(entities));
}

void enumerate_depth2(const std::function<void(const QueryAst&)>& visit) {
  const std::string entity = "Uzbekistan";
  const std::string concept_name = "city";
  const std::string attribute = "duration";
  const std::string relation = "capital";
  const std::string key = "start time";
  const std::array<ValueLiteral, 5> literals{
      make_value(VType::String, "red"), make_value(VType::Number, "110 minute"),
      make_value(VType::Year, "1990"), make_value(VType::Date, "2001-05-17"),
      make_value(VType::Time, "12:30")};
  const std::vector<std::optional<QualifierCond>> quals{
      std::nullopt, QualifierCond{key, Cop::AtLeast, make_value(VType::Year, "1990")}};
  const std::vector<std::optional<Dir>> dirs{std::nullopt, Dir::Forward, Dir::Backward};
  const std::vector<std::optional<CountCmp>> counts{
      std::nullopt, CountCmp{Cop::AtLeast, make_value(VType::Number, "2")}};

  std::vector<EntitySetExpr> leaves{build::entity(entity), build::concept_set(concept_name)};

  std::vector<Constraint> cmp;  // attribute comparisons
  for (const auto& v : literals)
    for (Cop c : valid_cops(v.vtype))
      for (const auto& q : quals) cmp.push_back(build::attr_cmp(attribute, c, v, q));

  std::vector<Constraint> plain_rels;  // relations a qualifier query accepts
  std::vector<Constraint> constraints = cmp;
  for (Sop s : kAllSops)
    for (const auto& q : quals) constraints.push_back(build::attr_sup(s, attribute, q));
  for (const auto& d : dirs)
    for (const auto& t : leaves)
      for (const auto& n : counts)
        for (const auto& q : quals) {
          constraints.push_back(build::rel(relation, d, t, n, q));
          if (!n) plain_rels.push_back(build::rel(relation, d, t, n, q));
        }
  for (const auto& d : dirs)
    for (Sop s : kAllSops)
      for (const auto& t : leaves) constraints.push_back(build::rel_sup(relation, d, s, t));

  std::vector<EntitySetExpr> sets = leaves;
  for (const auto& l : leaves) {
    sets.push_back(build::typed(concept_name, l));
    sets.push_back(build::group(l));
    for (Lop op : kAllLops)
      for (const auto& r : leaves) sets.push_back(build::combine(op, l, r));
    for (const auto& c : constraints)
      for (bool appositive : {false, true}) sets.push_back(build::constrained(l, c, appositive));
  }

  for (const auto& s : sets) {
    visit(QueryAst{EntityQuery{s}});
    visit(QueryAst{AttributeQuery{attribute, s}});
    visit(QueryAst{CountQuery{s}});
    for (Sop sop : kAllSops) visit(QueryAst{SuperlativeQuery{sop, attribute, s}});
    for (const auto& t : sets) visit(QueryAst{RelationQuery{s, t}});
    for (const auto& c : cmp) visit(QueryAst{QualifierQuery{key, s, c}});
    for (const auto& c : plain_rels) visit(QueryAst{QualifierQuery{key, s, c}});
    for (const auto& c : constraints) visit(QueryAst{VerifyQuery{s, c}});
  }

  std::vector<ValueExpr> v1;
  for (const auto& v : literals) v1.push_back(ValueExpr{Lit{v}});
  v1.push_back(ValueExpr{AttrOfEntity{attribute, entity}});
  std::vector<ValueExpr> v2 = v1;
  for (const auto& v : v1) {
    bool numeric_ok = !std::holds_alternative<Lit>(v.node) ||
                      std::get<Lit>(v.node).value.vtype == VType::Number;
    if (numeric_ok)
      for (Vop op : kAllVops) v2.push_back(ValueExpr{Aggregate{op, v}});
    for (Lop op : kAllLops)
      for (const auto& w : v1) v2.push_back(ValueExpr{ValueCombine{op, v, w}});
  }
  for (const auto& v : v2) visit(QueryAst{ValueQuery{v}});
}

}  // namespace graphq
