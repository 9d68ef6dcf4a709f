#include <algorithm>
#include <set>

#include "evaluator.hpp"
#include "kopl_program.hpp"

namespace graphq {

namespace {

struct RunError {
  std::string code;
  std::string message;
  Span span;
};

[[noreturn]] void fail(std::string code, Span span, std::string message) {
  throw RunError{std::move(code), std::move(message), span};
}

using Quals = std::vector<QualifierFact>;

// A fact that put `produced` into an entity state; `origin` is the entity the
// step started from (itself for attribute filters).
struct FactRef {
  std::size_t produced;
  std::size_t origin;
  const ValueLiteral* value;  // attribute facts only
  const Quals* quals;
};

struct ValueItem {
  ValueLiteral value;
  const Quals* quals = nullptr;
};

struct State {
  enum Kind { Entities, Values, Done } kind = Entities;
  enum Source { NoFacts, AttrFilter, AttrFocus, Relate } source = NoFacts;

  std::vector<std::size_t> ids;
  std::vector<FactRef> facts;
  std::string attribute;  // key of AttrFilter / AttrFocus facts
  std::vector<ValueItem> values;
  bool distinct = false;
  Answer answer;
};

std::vector<std::size_t> ids_of(const std::vector<FactRef>& facts) {
  std::vector<std::size_t> out;
  for (const auto& f : facts) out.push_back(f.produced);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool contains(const std::vector<std::size_t>& sorted, std::size_t x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

class Runner {
 public:
  Runner(const Graph& g, const SchemaMapping& m) : g_(g), m_(m) {}

  Answer run(const KoplProgram& program) {
    for (const auto& seg : program.segments) {
      for (std::size_t i = 0; i < seg.steps.size(); ++i) {
        const auto& st = seg.steps[i];
        if (i == 0 && is_binary(st.function)) {
          if (stack_.size() < 2) fail("E_BAD_BRANCH", st.span, st.function + " needs two inputs");
          State right = std::move(stack_.back());
          stack_.pop_back();
          State left = std::move(stack_.back());
          stack_.pop_back();
          stack_.push_back(binary(st, std::move(left), std::move(right)));
        } else if (i == 0) {
          stack_.push_back(source(st));
        } else {
          if (is_binary(st.function) || is_source(st.function))
            fail("E_BAD_BRANCH", st.span, st.function + " must start a segment");
          step(st, stack_.back());
        }
      }
    }
    if (stack_.size() != 1)
      fail("E_BAD_BRANCH", {0, 0}, "program leaves " + std::to_string(stack_.size()) + " states");
    State& top = stack_.back();
    if (top.kind == State::Done) return top.answer;
    if (top.kind == State::Values) {
      std::vector<ValueLiteral> out;
      std::set<std::string> seen;
      for (auto& v : top.values)
        if (!top.distinct || seen.insert(value_key(v.value)).second) out.push_back(std::move(v.value));
      return Answer::of_values(std::move(out));
    }
    fail("E_BAD_BRANCH", {0, 0}, "program ends with an entity set");
  }

 private:
  static bool is_binary(const std::string& fn) {
    return fn == "And" || fn == "Or" || fn == "Not" || fn == "FilterRelCount" ||
           fn == "QueryRelation" || fn == "QueryRelationQualifier";
  }
  static bool is_source(const std::string& fn) {
    return fn == "Find" || fn == "FindAll" || fn == "Const";
  }

  bool same(const std::string& stored, const std::string& rendered) const {
    return m_.normalize_label(stored) == rendered;
  }

  static void arity(const KoplStep& st, std::size_t lo, std::size_t hi) {
    if (st.args.size() < lo || st.args.size() > hi)
      fail("E_ARITY", st.span, st.function + ": wrong number of arguments");
  }

  static Cop op(const KoplStep& st, const std::string& s) {
    auto c = parse_cop_symbol(s);
    if (!c) fail("E_BAD_VALUE", st.span, "'" + s + "' is not a comparison operator");
    return *c;
  }

  static VType suffix_type(const KoplStep& st, std::string_view suffix) {
    if (suffix == "Str") return VType::String;
    if (suffix == "Num") return VType::Number;
    if (suffix == "Year") return VType::Year;
    if (suffix == "Date") return VType::Date;
    if (suffix == "Time") return VType::Time;
    fail("E_UNKNOWN_FUNCTION", st.span, "unknown function '" + st.function + "'");
  }

  static ValueLiteral lit(const KoplStep& st, VType t, const std::string& raw) {
    auto v = parse_value_literal(t, raw);
    if (!v.value) fail("E_BAD_VALUE", st.span, v.error);
    return *v.value;
  }

  // Value-and-operator tail beginning at args[at].
  static std::pair<Cop, ValueLiteral> condition(const KoplStep& st, VType t, std::size_t at) {
    std::size_t n = st.args.size() > at ? st.args.size() - at : 0;
    if (t == VType::String) {
      if (n != 1 && n != 2) fail("E_ARITY", st.span, st.function + ": wrong number of arguments");
      return {n == 2 ? op(st, st.args[at + 1]) : Cop::Is, lit(st, t, st.args[at])};
    }
    if (t == VType::Number) {
      if (n != 2 && n != 3) fail("E_ARITY", st.span, st.function + ": wrong number of arguments");
      if (st.args[at].find(' ') != std::string::npos)
        fail("E_BAD_VALUE", st.span, "'" + st.args[at] + "' is not a number");
      std::string raw = st.args[at] + (n == 3 ? " " + st.args[at + 1] : "");
      return {op(st, st.args.back()), lit(st, t, raw)};
    }
    if (n != 2) fail("E_ARITY", st.span, st.function + ": wrong number of arguments");
    return {op(st, st.args[at + 1]), lit(st, t, st.args[at])};
  }

  static bool quals_match(const Quals* quals, const std::string& key, Cop cop,
                          const ValueLiteral& v, const Runner& r) {
    if (!quals) return false;
    for (const auto& q : *quals)
      if (r.same(q.key, key) && compare_values(q.value, cop, v)) return true;
    return false;
  }

  static void need_entities(const KoplStep& st, const State& s) {
    if (s.kind != State::Entities) fail("E_RUNTIME_TYPE", st.span, st.function + " expects entities");
  }

  State source(const KoplStep& st) {
    State s;
    if (st.function == "Find") {
      arity(st, 1, 1);
      s.ids = g_.named(st.args[0]);
    } else if (st.function == "FindAll") {
      arity(st, 0, 0);
      for (std::size_t i = 0; i < g_.size(); ++i) s.ids.push_back(i);
    } else if (st.function == "Const") {
      arity(st, 2, 2);
      auto t = parse_vtype(st.args[0]);
      if (!t) fail("E_BAD_VALUE", st.span, "'" + st.args[0] + "' is not a value type");
      s.kind = State::Values;
      s.values.push_back({lit(st, *t, st.args[1]), nullptr});
    } else if (is_binary(st.function)) {
      fail("E_BAD_BRANCH", st.span, st.function + " needs two inputs");
    } else {
      fail(known(st.function) ? "E_BAD_BRANCH" : "E_UNKNOWN_FUNCTION", st.span,
           st.function + " cannot start a segment");
    }
    return s;
  }

  static bool known(const std::string& fn) {
    static const std::set<std::string> kUnary{
        "FilterConcept", "FilterStr",  "FilterNum",  "FilterYear",  "FilterDate", "FilterTime",
        "QFilterStr",    "QFilterNum", "QFilterYear", "QFilterDate", "QFilterTime", "FilterAttr",
        "SelectAmong",   "Relate",     "What",       "Count",       "Exist",      "QueryAttr",
        "QueryAttrQualifier", "VerifyStr", "VerifyNum", "VerifyYear", "VerifyDate", "VerifyTime",
        "Aggregate"};
    return kUnary.count(fn) > 0;
  }

  void done(State& s, Answer a) {
    s = State{};
    s.kind = State::Done;
    s.answer = std::move(a);
  }

  std::vector<std::string> names(const std::vector<std::size_t>& ids) const {
    std::vector<std::string> out;
    for (auto i : ids) out.push_back(g_.at(i).name);
    return out;
  }

  void step(const KoplStep& st, State& s) {
    const std::string& fn = st.function;
    if (s.kind == State::Done) fail("E_RUNTIME_TYPE", st.span, fn + " after the query finished");
    if (!known(fn)) fail("E_UNKNOWN_FUNCTION", st.span, "unknown function '" + fn + "'");

    if (fn == "FilterConcept") {
      arity(st, 1, 1);
      need_entities(st, s);
      const auto& members = g_.of_concept(st.args[0]);
      std::vector<std::size_t> kept;
      for (auto i : s.ids)
        if (contains(members, i)) kept.push_back(i);
      s.ids = std::move(kept);
      s.facts.clear();
      s.source = State::NoFacts;
    } else if (fn.rfind("QFilter", 0) == 0) {
      VType t = suffix_type(st, std::string_view(fn).substr(7));
      if (st.args.empty()) fail("E_ARITY", st.span, fn + ": wrong number of arguments");
      auto [cop, v] = condition(st, t, 1);
      const std::string& key = st.args[0];
      if (s.kind == State::Values) {
        std::vector<ValueItem> kept;
        for (auto& item : s.values)
          if (quals_match(item.quals, key, cop, v, *this)) kept.push_back(std::move(item));
        s.values = std::move(kept);
      } else {
        if (s.source == State::NoFacts)
          fail("E_RUNTIME_TYPE", st.span, fn + " needs facts from a preceding step");
        std::vector<FactRef> kept;
        for (const auto& f : s.facts)
          if (quals_match(f.quals, key, cop, v, *this)) kept.push_back(f);
        s.facts = std::move(kept);
        s.ids = ids_of(s.facts);
      }
    } else if (fn == "FilterAttr") {
      arity(st, 1, 1);
      need_entities(st, s);
      s.facts.clear();
      for (auto i : s.ids)
        for (const auto& a : g_.at(i).attributes)
          if (same(a.key, st.args[0])) s.facts.push_back({i, i, &a.value, &a.qualifiers});
      s.source = State::AttrFocus;
      s.attribute = st.args[0];
    } else if (fn.rfind("Filter", 0) == 0) {
      need_entities(st, s);
      VType t = suffix_type(st, std::string_view(fn).substr(6));
      if (st.args.empty()) fail("E_ARITY", st.span, fn + ": wrong number of arguments");
      auto [cop, v] = condition(st, t, 1);
      s.facts.clear();
      for (auto i : s.ids)
        for (const auto& a : g_.at(i).attributes)
          if (same(a.key, st.args[0]) && compare_values(a.value, cop, v))
            s.facts.push_back({i, i, &a.value, &a.qualifiers});
      s.ids = ids_of(s.facts);
      s.source = State::AttrFilter;
      s.attribute = st.args[0];
    } else if (fn == "SelectAmong") {
      arity(st, 2, 2);
      need_entities(st, s);
      auto sop = parse_sop(st.args[1]);
      if (!sop) fail("E_BAD_VALUE", st.span, "'" + st.args[1] + "' is not largest or smallest");
      select_among(s, st.args[0], *sop);
    } else if (fn == "Relate") {
      arity(st, 2, 2);
      need_entities(st, s);
      auto dir = parse_dir(st.args[1]);
      if (!dir) fail("E_BAD_VALUE", st.span, "'" + st.args[1] + "' is not forward or backward");
      std::vector<FactRef> facts;
      for (auto t : s.ids) {
        if (*dir == Dir::Backward) {
          for (const auto& e : g_.incoming(t)) {
            const auto& r = g_.at(e.source).relations[e.relation];
            if (same(r.predicate, st.args[0])) facts.push_back({e.source, t, nullptr, &r.qualifiers});
          }
        } else {
          for (const auto& r : g_.at(t).relations) {
            auto target = g_.target_of(r);
            if (target != Graph::npos && same(r.predicate, st.args[0]))
              facts.push_back({target, t, nullptr, &r.qualifiers});
          }
        }
      }
      s.facts = std::move(facts);
      s.ids = ids_of(s.facts);
      s.source = State::Relate;
    } else if (fn == "What") {
      arity(st, 0, 0);
      need_entities(st, s);
      done(s, Answer::entities(names(s.ids)));
    } else if (fn == "Count") {
      arity(st, 0, 0);
      need_entities(st, s);
      done(s, Answer::number(static_cast<std::int64_t>(s.ids.size())));
    } else if (fn == "Exist") {
      arity(st, 0, 0);
      need_entities(st, s);
      done(s, Answer::boolean(!s.ids.empty()));
    } else if (fn == "QueryAttr") {
      arity(st, 1, 1);
      need_entities(st, s);
      std::vector<ValueItem> values;
      for (auto i : s.ids)
        for (const auto& a : g_.at(i).attributes)
          if (same(a.key, st.args[0])) values.push_back({a.value, &a.qualifiers});
      State next;
      next.kind = State::Values;
      next.values = std::move(values);
      s = std::move(next);
    } else if (fn == "QueryAttrQualifier") {
      arity(st, 2, 2);
      need_entities(st, s);
      if (s.source != State::AttrFilter || s.attribute != st.args[0])
        fail("E_RUNTIME_TYPE", st.span, fn + " needs facts filtered on '" + st.args[0] + "'");
      State next;
      next.kind = State::Values;
      next.distinct = true;
      for (const auto& f : s.facts)
        for (const auto& q : *f.quals)
          if (same(q.key, st.args[1])) next.values.push_back({q.value, f.quals});
      s = std::move(next);
    } else if (fn.rfind("Verify", 0) == 0) {
      if (s.kind != State::Values) fail("E_RUNTIME_TYPE", st.span, fn + " expects values");
      VType t = suffix_type(st, std::string_view(fn).substr(6));
      auto [cop, v] = condition(st, t, 0);
      bool any = false;
      for (const auto& item : s.values) any = any || compare_values(item.value, cop, v);
      done(s, Answer::boolean(any));
    } else if (fn == "Aggregate") {
      arity(st, 1, 1);
      if (s.kind != State::Values) fail("E_RUNTIME_TYPE", st.span, fn + " expects values");
      auto vop = parse_vop(st.args[0]);
      if (!vop) fail("E_BAD_VALUE", st.span, "'" + st.args[0] + "' is not an aggregate");
      aggregate(s, *vop);
    }
  }

  void select_among(State& s, const std::string& attribute, Sop sop) {
    std::vector<std::pair<std::size_t, const ValueLiteral*>> cands;
    if (s.source == State::AttrFocus && s.attribute == attribute) {
      for (const auto& f : s.facts)
        if (f.value->vtype != VType::String) cands.emplace_back(f.produced, f.value);
    } else {
      for (auto i : s.ids)
        for (const auto& a : g_.at(i).attributes)
          if (same(a.key, attribute) && a.value.vtype != VType::String)
            cands.emplace_back(i, &a.value);
    }
    std::set<std::size_t> winners;
    for (const auto& [i, v] : cands) {
      bool dominated = std::any_of(cands.begin(), cands.end(), [&](const auto& other) {
        auto o = order_values(*other.second, *v);
        return o && (sop == Sop::Largest ? *o > 0 : *o < 0);
      });
      if (!dominated) winners.insert(i);
    }
    s.ids.assign(winners.begin(), winners.end());
    s.facts.clear();
    s.source = State::NoFacts;
  }

  static void aggregate(State& s, Vop vop) {
    std::optional<Decimal> acc;
    std::optional<std::string> unit;
    std::int64_t n = 0;
    bool mixed = false;
    for (const auto& item : s.values) {
      const auto& v = item.value;
      if (v.vtype != VType::Number || !v.magnitude) continue;
      if (n == 0)
        unit = v.unit;
      else if (v.unit != unit)
        mixed = true;
      const Decimal& m = *v.magnitude;
      if (!acc)
        acc = m;
      else if (vop == Vop::Sum || vop == Vop::Average)
        acc = *acc + m;
      else if (vop == Vop::Maximum ? m > *acc : m < *acc)
        acc = m;
      ++n;
    }
    State next;
    next.kind = State::Values;
    if (acc && !mixed) {
      if (vop == Vop::Average) acc = acc->divided_by(n);
      next.values.push_back({make_number(*acc, unit), nullptr});
    }
    s = std::move(next);
  }

  State binary(const KoplStep& st, State left, State right) {
    const std::string& fn = st.function;
    State out;
    if (fn == "And" || fn == "Or" || fn == "Not") {
      arity(st, 0, 0);
      if (left.kind == State::Entities && right.kind == State::Entities) {
        auto& a = left.ids;
        auto& b = right.ids;
        if (fn == "And")
          std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.ids));
        else if (fn == "Or")
          std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.ids));
        else
          std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.ids));
        return out;
      }
      if (left.kind != State::Values || right.kind != State::Values)
        fail("E_RUNTIME_TYPE", st.span, fn + " combines two entity sets or two value lists");
      std::set<std::string> rkeys, seen;
      for (const auto& v : right.values) rkeys.insert(value_key(v.value));
      out.kind = State::Values;
      out.distinct = true;
      for (auto& v : left.values) {
        bool in_right = rkeys.count(value_key(v.value)) > 0;
        bool keep = fn == "Or" || (fn == "And" ? in_right : !in_right);
        if (keep && seen.insert(value_key(v.value)).second) out.values.push_back(std::move(v));
      }
      if (fn == "Or")
        for (auto& v : right.values)
          if (seen.insert(value_key(v.value)).second) out.values.push_back(std::move(v));
      return out;
    }
    if (left.kind != State::Entities || right.kind != State::Entities)
      fail("E_RUNTIME_TYPE", st.span, fn + " expects two entity sets");
    if (fn == "FilterRelCount") {
      arity(st, 2, 2);
      if (right.source != State::Relate)
        fail("E_RUNTIME_TYPE", st.span, fn + " needs the output of Relate");
      Cop cop = op(st, st.args[0]);
      auto n = parse_value_literal(VType::Number, st.args[1]);
      if (!n.value) fail("E_BAD_VALUE", st.span, n.error);
      for (auto x : left.ids) {
        std::set<std::size_t> origins;
        for (const auto& f : right.facts)
          if (f.produced == x) origins.insert(f.origin);
        auto count = make_number(Decimal::from_int(static_cast<std::int64_t>(origins.size())),
                                 std::nullopt);
        if (compare_values(count, cop, *n.value)) out.ids.push_back(x);
      }
      return out;
    }
    if (fn == "QueryRelation") {
      arity(st, 0, 0);
      std::vector<std::string> preds;
      for (auto s : left.ids)
        for (const auto& r : g_.at(s).relations)
          if (contains(right.ids, g_.target_of(r))) preds.push_back(r.predicate);
      done(out, Answer::predicates(std::move(preds)));
      return out;
    }
    // QueryRelationQualifier(r, k[, forward])
    arity(st, 2, 3);
    bool forward = st.args.size() == 3;
    if (forward && st.args[2] != "forward")
      fail("E_BAD_VALUE", st.span, "third argument must be 'forward'");
    out.kind = State::Values;
    out.distinct = true;
    auto collect = [&](const RelationFact& r) {
      if (!same(r.predicate, st.args[0])) return;
      for (const auto& q : r.qualifiers)
        if (same(q.key, st.args[1])) out.values.push_back({q.value, &r.qualifiers});
    };
    for (auto s : left.ids) {
      if (!forward) {
        for (const auto& r : g_.at(s).relations)
          if (contains(right.ids, g_.target_of(r))) collect(r);
      } else {
        for (const auto& e : g_.incoming(s))
          if (contains(right.ids, e.source)) collect(g_.at(e.source).relations[e.relation]);
      }
    }
    return out;
  }

  const Graph& g_;
  const SchemaMapping& m_;
  std::vector<State> stack_;
};

}  // namespace

Result<Answer> run_kopl(std::string_view program, const Graph& graph, const SchemaMapping& mapping) {
  auto parsed = parse_kopl_program(program);
  if (!parsed) return parsed.diagnostics();
  try {
    return Runner(graph, mapping).run(*parsed);
  } catch (const RunError& e) {
    return error(e.code, e.span, e.message);
  }
}

}  // namespace graphq
