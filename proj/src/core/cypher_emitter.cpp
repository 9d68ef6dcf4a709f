#include <map>

#include "codegen.hpp"
#include "emit_support.hpp"

namespace graphq {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string ident(std::string_view s) {
  if (is_identifier(s)) return std::string(s);
  std::string out = "`";
  for (char c : s) {
    if (c == '`') out += '`';
    out += c;
  }
  return out + "`";
}

std::string cypher_op(Cop cop) { return cop == Cop::IsNot ? "<>" : std::string(symbol(cop)); }

std::string cypher_literal(const ValueLiteral& v) {
  switch (v.vtype) {
    case VType::String: return quote_string(v.raw);
    case VType::Number: return v.magnitude_text();
    case VType::Year: return v.raw;
    case VType::Date: return "date(" + quote_string(v.raw) + ")";
    case VType::Time: return "time(" + quote_string(v.raw) + ")";
  }
  return {};
}

// One MATCH ... WHERE ... block. Nodes are printed with their inline
// properties at their first appearance.
struct Scope {
  struct Item {
    enum Kind { Node, Path, Concept } kind;
    std::string a;  // node, or path head
    std::string rel_var;
    std::string rel_type;
    std::string b;  // path tail, or concept name
  };
  struct NodeInfo {
    std::optional<std::string> name;
    std::vector<std::string> labels;
  };

  std::vector<Item> items;
  std::vector<std::string> where;
  std::map<std::string, NodeInfo> nodes;

  void touch(const std::string& v) {
    for (const auto& it : items)
      if (it.kind == Item::Node && it.a == v) return;
    items.push_back({Item::Node, v, {}, {}, {}});
  }

  std::string render() const {
    std::map<std::string, bool> printed;
    auto node = [&](const std::string& v) {
      if (printed[v]) return "(" + v + ")";
      printed[v] = true;
      std::string out = "(" + v;
      auto it = nodes.find(v);
      if (it != nodes.end()) {
        for (const auto& l : it->second.labels) out += ":" + ident(l);
        if (it->second.name) out += " {name: " + quote_string(*it->second.name) + "}";
      }
      return out + ")";
    };
    auto in_path = [&](const std::string& v) {
      for (const auto& it : items)
        if ((it.kind == Item::Path && (it.a == v || it.b == v)) ||
            (it.kind == Item::Concept && it.a == v))
          return true;
      return false;
    };

    std::vector<std::string> parts;
    for (const auto& it : items) {
      switch (it.kind) {
        case Item::Node:
          if (!in_path(it.a)) parts.push_back(node(it.a));
          break;
        case Item::Path: {
          std::string head = node(it.a);
          std::string rel = "[" + it.rel_var;
          if (!it.rel_type.empty()) rel += ":" + ident(it.rel_type);
          rel += "]";
          parts.push_back(head + "-" + rel + "->" + node(it.b));
          break;
        }
        case Item::Concept:
          parts.push_back(node(it.a) + "-[:instance_of]->(:Concept {name: " +
                          quote_string(it.b) + "})");
          break;
      }
    }
    std::string out = "MATCH ";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
    if (!where.empty()) {
      out += " WHERE ";
      for (std::size_t i = 0; i < where.size(); ++i) out += (i ? " AND " : "") + where[i];
    }
    return out;
  }
};

class CypherEmitter {
 public:
  explicit CypherEmitter(const SchemaMapping& m) : m_(m) {}

  std::string query(const QueryAst& q) {
    Scope s;
    return std::visit(
        overloaded{
            [&](const EntityQuery& x) {
              auto v = node_var();
              set(s, x.entityset, v);
              return s.render() + " RETURN " + v + ".name";
            },
            [&](const CountQuery& x) {
              auto v = node_var();
              set(s, x.entityset, v);
              return s.render() + " RETURN count(DISTINCT " + v + ")";
            },
            [&](const VerifyQuery& x) {
              auto v = node_var();
              set(s, x.entityset, v);
              constraint(s, x.constraint, v);
              return s.render() + " RETURN count(" + v + ") > 0 AS answer";
            },
            [&](const AttributeQuery& x) {
              auto v = node_var();
              set(s, x.entityset, v);
              return s.render() + " RETURN " + v + "." + prop(x.attribute);
            },
            [&](const SuperlativeQuery& x) {
              auto v = node_var();
              set(s, x.entityset, v);
              return s.render() + " RETURN " + v + ".name ORDER BY " + v + "." + prop(x.attribute) +
                     (x.sop == Sop::Smallest ? " ASC" : " DESC") + " LIMIT 1";
            },
            [&](const RelationQuery& x) {
              auto a = node_var();
              auto b = node_var();
              s.items.push_back({Scope::Item::Path, a, "r", "", b});
              set(s, x.source, a);
              set(s, x.target, b);
              // The relationship type is left open.
              return s.render() + " RETURN type(r)";
            },
            [&](const QualifierQuery& x) {
              auto* rel = std::get_if<Rel>(&x.constraint.node);
              if (!rel)
                throw EmitError{"E_UNSUPPORTED",
                                "Cypher has no attribute qualifiers; only relationship properties"};
              auto a = node_var();
              auto b = node_var();
              auto r = rel_var();
              bool backward = rel->dir.value_or(Dir::Backward) == Dir::Backward;
              s.items.push_back({Scope::Item::Path, backward ? a : b, r, label(rel->relation),
                                 backward ? b : a});
              set(s, x.entityset, a);
              set(s, *rel->target, b);
              rel_qualifier(s, *rel, r);
              return s.render() + " RETURN DISTINCT " + r + "." + prop(x.qualifier);
            },
            [&](const ValueQuery& x) {
              static constexpr const char* kFns[] = {"sum", "avg", "max", "min"};
              auto* agg = std::get_if<Aggregate>(&x.value.node);
              const AttrOfEntity* of = agg ? std::get_if<AttrOfEntity>(&agg->inner->node) : nullptr;
              if (!of)
                throw EmitError{"E_UNSUPPORTED",
                                "Cypher value queries support only an aggregate over one attribute"};
              auto v = node_var();
              set(s, build::entity(of->entity), v);
              return s.render() + " RETURN " + kFns[static_cast<int>(agg->vop)] + "(" + v + "." +
                     prop(of->attribute) + ")";
            },
        },
        q.node);
  }

 private:
  std::string node_var() { return "e" + std::to_string(++nodes_); }
  std::string rel_var() { return "r" + std::to_string(++rels_); }
  std::string label(const std::string& l) const { return m_.normalize_label(l); }
  std::string prop(const std::string& l) const { return ident(label(l)); }

  void concept_on(Scope& s, const std::string& v, const std::string& concept_name) {
    s.touch(v);
    if (m_.cypher_concept_as_label)
      s.nodes[v].labels.push_back(concept_name);
    else
      s.items.push_back({Scope::Item::Concept, v, {}, {}, concept_name});
  }

  std::string exists(const EntitySetExpr& e, const std::string& v) {
    Scope sub;
    set(sub, e, v);
    return "EXISTS { " + sub.render() + " }";
  }

  void set(Scope& s, const EntitySetExpr& e, const std::string& v) {
    std::visit(overloaded{
                   [&](const EntityLeaf& x) {
                     s.touch(v);
                     auto& info = s.nodes[v];
                     if (!info.name)
                       info.name = x.name;
                     else
                       s.where.push_back(v + ".name = " + quote_string(x.name));
                   },
                   [&](const ConceptLeaf& x) { concept_on(s, v, x.name); },
                   [&](const Typed& x) {
                     set(s, *x.inner, v);
                     concept_on(s, v, x.concept_name);
                   },
                   [&](const Combine& x) {
                     switch (x.lop) {
                       case Lop::And:
                         set(s, *x.left, v);
                         set(s, *x.right, v);
                         break;
                       case Lop::Or:
                         s.touch(v);
                         s.where.push_back("(" + exists(*x.left, v) + " OR " +
                                           exists(*x.right, v) + ")");
                         break;
                       case Lop::Not:
                         set(s, *x.left, v);
                         s.where.push_back("NOT " + exists(*x.right, v));
                         break;
                     }
                   },
                   [&](const Constrained& x) {
                     set(s, *x.inner, v);
                     constraint(s, x.constraint, v);
                   },
                   [&](const Group& x) { set(s, *x.inner, v); },
               },
               e.node);
  }

  void rel_qualifier(Scope& s, const Rel& r, const std::string& rv) {
    if (!r.qualifier) return;
    const auto& q = *r.qualifier;
    std::string key = rv + "." + prop(q.key);
    s.where.push_back(key + " " + cypher_op(q.cop) + " " + cypher_literal(q.value));
    if (q.value.vtype == VType::Number && q.value.unit)
      s.where.push_back(rv + "." + ident(label(q.key) + "__unit") + " = " +
                        quote_string(*q.value.unit));
  }

  void constraint(Scope& s, const Constraint& c, const std::string& v) {
    std::visit(
        overloaded{
            [&](const AttrCmp& x) {
              if (x.qualifier)
                throw EmitError{"E_UNSUPPORTED", "Cypher has no attribute qualifiers"};
              s.touch(v);
              s.where.push_back(v + "." + prop(x.attribute) + " " + cypher_op(x.cop) + " " +
                                cypher_literal(x.value));
              if (x.value.vtype == VType::Number && x.value.unit)
                s.where.push_back(v + "." + ident(label(x.attribute) + "__unit") + " = " +
                                  quote_string(*x.value.unit));
            },
            [&](const AttrSup&) {
              throw EmitError{"E_UNSUPPORTED",
                              "Cypher superlatives are only expressible as the whole query"};
            },
            [&](const Rel& x) {
              bool backward = x.dir.value_or(Dir::Backward) == Dir::Backward;
              auto t = node_var();
              std::string rv = x.qualifier ? rel_var() : "";
              Scope::Item path{Scope::Item::Path, backward ? v : t, rv, label(x.relation),
                               backward ? t : v};
              if (x.count) {
                Scope sub;
                sub.items.push_back(path);
                set(sub, *x.target, t);
                rel_qualifier(sub, x, rv);
                s.touch(v);
                s.where.push_back("COUNT { " + sub.render() + " RETURN DISTINCT " + t + " } " +
                                  cypher_op(x.count->cop) + " " + x.count->value.magnitude_text());
                return;
              }
              s.items.push_back(path);
              set(s, *x.target, t);
              rel_qualifier(s, x, rv);
            },
            [&](const RelSup&) {
              throw EmitError{"E_UNSUPPORTED", "relation superlatives have no defined semantics"};
            },
        },
        c.node);
  }

  const SchemaMapping& m_;
  int nodes_ = 0;
  int rels_ = 0;
};

}  // namespace

Result<std::string> emit_cypher(const QueryAst& ast, const SchemaMapping& mapping) {
  return run_emitter(ast, [&](const QueryAst& q) { return CypherEmitter(mapping).query(q); });
}

}  // namespace graphq
