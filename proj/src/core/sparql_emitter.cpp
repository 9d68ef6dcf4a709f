#include <set>

#include "codegen.hpp"
#include "emit_support.hpp"

namespace graphq {

namespace {

// Variables: query roots are ?e (or ?e_1/?e_2 for two-root queries); every
// variable a constraint introduces takes the next index from one shared
// counter, so sorting a subject's patterns by index recovers their nesting.
// Concept variables (?c, ?c_1, ...) are numbered separately.
class SparqlEmitter {
 public:
  explicit SparqlEmitter(const SchemaMapping& m) : m_(m) {
    for (const auto& [role, rendered] : m.reserved_predicates) reserved_.insert(rendered);
  }

  std::string query(const QueryAst& q) {
    return std::visit(
        overloaded{
            [&](const EntityQuery& x) {
              next_ = 1;
              set(x.entityset, "?e", true);
              std::string out = "SELECT ?e WHERE { " + body() + " }";
              if (having_) out += " GROUP BY ?e HAVING ( " + *having_ + " )";
              return out;
            },
            [&](const CountQuery& x) {
              next_ = 1;
              set(x.entityset, "?e", false);
              return "SELECT (COUNT(DISTINCT ?e) AS ?count) WHERE { " + body() + " }";
            },
            [&](const VerifyQuery& x) {
              next_ = 1;
              set(x.entityset, "?e", false);
              constraint(x.constraint, "?e", false);
              return "ASK { " + body() + " }";
            },
            [&](const AttributeQuery& x) {
              next_ = 1;
              set(x.entityset, "?e", false);
              emit("?e " + predicate(x.attribute) + " ?pv");
              emit("?pv " + reserved("value") + " ?v");
              return "SELECT ?v WHERE { " + body() + " }";
            },
            [&](const SuperlativeQuery& x) {
              next_ = 1;
              set(x.entityset, "?e", false);
              emit("?e " + predicate(x.attribute) + " ?pv");
              emit("?pv " + reserved("value") + " ?v");
              std::string order = x.sop == Sop::Smallest ? "?v" : "DESC(?v)";
              return "SELECT ?e WHERE { " + body() + " } ORDER BY " + order + " LIMIT 1";
            },
            [&](const RelationQuery& x) {
              next_ = 3;
              set(x.source, "?e_1", false);
              set(x.target, "?e_2", false);
              emit("?e_1 ?p ?e_2");
              return "SELECT DISTINCT ?p WHERE { " + body() + " }";
            },
            [&](const QualifierQuery& x) { return qualifier_query(x); },
            [&](const ValueQuery& x) { return value_query(x); },
        },
        q.node);
  }

 private:
  static std::string var(std::string_view base, int k) {
    return k == 0 ? "?" + std::string(base) : "?" + std::string(base) + "_" + std::to_string(k);
  }

  void emit(std::string pattern) { patterns_.push_back(std::move(pattern)); }

  std::string body() const {
    std::string out;
    for (const auto& p : patterns_) {
      if (!out.empty()) out += " . ";
      out += p;
    }
    return out;
  }

  const std::string& reserved(const std::string& role) const { return m_.reserved(role); }

  std::string predicate(const std::string& label) const {
    std::string p = m_.sparql_predicate(label);
    if (reserved_.count(p))
      throw EmitError{"E_PREDICATE_COLLISION",
                      "label '" + label + "' renders as reserved predicate '" + p + "'"};
    for (char c : p)
      if (c == ' ' || c == '"' || c == '{' || c == '}' || c == '(' || c == ')' || c == '[' ||
          c == ']' || c == ';' || c == ',')
        throw EmitError{"E_UNSUPPORTED", "label '" + label + "' is not a bare SPARQL predicate"};
    if (p.empty() || p.front() == '?' || p.back() == '.')
      throw EmitError{"E_UNSUPPORTED", "label '" + label + "' is not a bare SPARQL predicate"};
    return p;
  }

  std::string literal(const ValueLiteral& v) const {
    switch (v.vtype) {
      case VType::String: return quote_string(v.raw);
      case VType::Number: return quote_string(v.magnitude_text()) + m_.numeric_datatype_suffix;
      case VType::Year: return quote_string(v.raw) + "^^xsd:gYear";
      case VType::Date: return quote_string(v.raw) + "^^xsd:date";
      case VType::Time: return quote_string(v.raw) + "^^xsd:time";
    }
    return {};
  }

  // Value node facts: unit, then either the exact value or a FILTER.
  void value_node(const std::string& node, std::string_view filter_base, int k, Cop cop,
                  const ValueLiteral& v) {
    if (v.vtype == VType::Number && v.unit) emit(node + " " + reserved("unit") + " " + quote_string(*v.unit));
    if (cop == Cop::Is) {
      emit(node + " " + reserved("value") + " " + literal(v));
    } else {
      std::string fv = var(filter_base, k);
      emit(node + " " + reserved("value") + " " + fv);
      emit("FILTER ( " + fv + " " + std::string(symbol(cop)) + " " + literal(v) + " )");
    }
  }

  struct Fact {
    std::string text;
    std::string cond_node;
    int cond_k = 0;
  };

  // "[ fact_h H ; fact_r r ; fact_t T ; key ?qpv_k ]"; the condition's value
  // facts follow separately via condition_facts.
  Fact fact(const std::string& head, const std::string& rel, const std::string& tail,
            const std::optional<QualifierCond>& cond) {
    Fact f;
    f.text = "[ " + reserved("fact_h") + " " + head + " ; " + reserved("fact_r") + " " + rel +
             " ; " + reserved("fact_t") + " " + tail;
    if (cond) {
      f.cond_k = next_++;
      f.cond_node = var("qpv", f.cond_k);
      f.text += " ; " + predicate(cond->key) + " " + f.cond_node;
    }
    f.text += " ]";
    return f;
  }

  void condition_facts(const std::optional<QualifierCond>& cond, const Fact& f) {
    if (cond) value_node(f.cond_node, "qv", f.cond_k, cond->cop, cond->value);
  }

  static bool is_base(const EntitySetExpr& e) {
    if (std::holds_alternative<EntityLeaf>(e.node) || std::holds_alternative<ConceptLeaf>(e.node))
      return true;
    if (auto* t = std::get_if<Typed>(&e.node)) return is_base(*t->inner);
    return false;
  }

  void concept_member(const std::string& v, const std::string& concept_name) {
    std::string c = var("c", concepts_++);
    emit(v + " " + reserved("instance_of") + " " + c);
    emit(c + " " + reserved("name") + " " + quote_string(concept_name));
  }

  // `root_chain` is true while walking the Constrained spine of an
  // EntityQuery root, the only place a grouped count can live.
  void set(const EntitySetExpr& e, const std::string& v, bool root_chain) {
    std::visit(
        overloaded{
            [&](const EntityLeaf& x) { emit(v + " " + reserved("name") + " " + quote_string(x.name)); },
            [&](const ConceptLeaf& x) { concept_member(v, x.name); },
            [&](const Typed& x) {
              if (!is_base(*x.inner))
                throw EmitError{"E_UNSUPPORTED",
                                "concept typing applies only to entity or concept leaves in SPARQL"};
              set(*x.inner, v, false);
              concept_member(v, x.concept_name);
            },
            [&](const Combine& x) {
              if (x.lop != Lop::And)
                throw EmitError{"E_UNSUPPORTED",
                                "'" + std::string(keyword(x.lop)) + "' has no SPARQL rendering"};
              set(*x.left, v, false);
              std::string w = var("e", next_++);
              set(*x.right, w, false);
              emit("FILTER ( " + v + " = " + w + " )");
            },
            [&](const Constrained& x) {
              set(*x.inner, v, root_chain);
              constraint(x.constraint, v, root_chain);
            },
            [&](const Group& x) { set(*x.inner, v, root_chain); },
        },
        e.node);
  }

  void constraint(const Constraint& c, const std::string& v, bool root_chain) {
    std::visit(
        overloaded{
            [&](const AttrCmp& x) {
              int k = next_++;
              std::string node = var("pv", k);
              std::string pred = predicate(x.attribute);
              emit(v + " " + pred + " " + node);
              value_node(node, "v", k, x.cop, x.value);
              if (x.qualifier) {
                auto f = fact(v, pred, node, x.qualifier);
                emit(f.text);
                condition_facts(x.qualifier, f);
              }
            },
            [&](const AttrSup&) {
              throw EmitError{"E_UNSUPPORTED",
                              "attribute superlatives are only expressible as the whole query"};
            },
            [&](const Rel& x) {
              int k = next_++;
              std::string t = var("e", k);
              std::string pred = predicate(x.relation);
              bool backward = x.dir.value_or(Dir::Backward) == Dir::Backward;
              const std::string& head = backward ? v : t;
              const std::string& tail = backward ? t : v;
              emit(head + " " + pred + " " + tail);
              set(*x.target, t, false);
              if (x.qualifier) {
                auto f = fact(head, pred, tail, x.qualifier);
                emit(f.text);
                condition_facts(x.qualifier, f);
              }
              if (x.count) {
                if (!root_chain || v != "?e" || having_)
                  throw EmitError{"E_UNSUPPORTED",
                                  "SPARQL counts relations only once, on the queried entities"};
                having_ = "COUNT ( DISTINCT " + t + " ) " + std::string(symbol(x.count->cop)) +
                          " " + x.count->value.magnitude_text();
              }
            },
            [&](const RelSup&) {
              throw EmitError{"E_UNSUPPORTED", "relation superlatives have no defined semantics"};
            },
        },
        c.node);
  }

  std::string qualifier_query(const QualifierQuery& x) {
    std::string key = predicate(x.qualifier);
    if (auto* cmp = std::get_if<AttrCmp>(&x.constraint.node)) {
      next_ = 2;
      set(x.entityset, "?e_1", false);
      int k = next_++;
      std::string node = var("pv", k);
      std::string pred = predicate(cmp->attribute);
      emit("?e_1 " + pred + " " + node);
      value_node(node, "v", k, cmp->cop, cmp->value);
      auto f = fact("?e_1", pred, node, cmp->qualifier);
      emit(f.text + " " + key + " ?qpv");
      condition_facts(cmp->qualifier, f);
      return "SELECT DISTINCT ?qpv WHERE { " + body() + " }";
    }
    const auto& rel = std::get<Rel>(x.constraint.node);
    next_ = 3;
    set(x.entityset, "?e_1", false);
    set(*rel.target, "?e_2", false);
    std::string pred = predicate(rel.relation);
    bool backward = rel.dir.value_or(Dir::Backward) == Dir::Backward;
    std::string head = backward ? "?e_1" : "?e_2";
    std::string tail = backward ? "?e_2" : "?e_1";
    emit(head + " " + pred + " " + tail);
    auto f = fact(head, pred, tail, rel.qualifier);
    emit(f.text + " " + key + " ?qpv");
    condition_facts(rel.qualifier, f);
    return "SELECT DISTINCT ?qpv WHERE { " + body() + " }";
  }

  std::string value_query(const ValueQuery& x) {
    static constexpr const char* kFns[] = {"SUM", "AVG", "MAX", "MIN"};
    auto* agg = std::get_if<Aggregate>(&x.value.node);
    const AttrOfEntity* of = agg ? std::get_if<AttrOfEntity>(&agg->inner->node) : nullptr;
    if (!of)
      throw EmitError{"E_UNSUPPORTED",
                      "SPARQL value queries support only an aggregate over one attribute"};
    next_ = 1;
    emit("?e " + reserved("name") + " " + quote_string(of->entity));
    emit("?e " + predicate(of->attribute) + " ?pv");
    emit("?pv " + reserved("value") + " ?v");
    return "SELECT (" + std::string(kFns[static_cast<int>(agg->vop)]) +
           "(?v) AS ?value) WHERE { " + body() + " }";
  }

  const SchemaMapping& m_;
  std::set<std::string> reserved_;
  std::vector<std::string> patterns_;
  int next_ = 1;
  int concepts_ = 0;
  std::optional<std::string> having_;
};

}  // namespace

Result<std::string> emit_sparql(const QueryAst& ast, const SchemaMapping& mapping) {
  return run_emitter(ast, [&](const QueryAst& q) { return SparqlEmitter(mapping).query(q); });
}

}  // namespace graphq
