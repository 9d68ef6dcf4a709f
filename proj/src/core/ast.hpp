#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "operators.hpp"
#include "result.hpp"
#include "value.hpp"

namespace graphq {

// Owning pointer with value semantics: deep copy, deep equality.
template <typename T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  const T& operator*() const { return *ptr_; }
  T& operator*() { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  T* operator->() { return ptr_.get(); }

  bool operator==(const Box& other) const { return *ptr_ == *other.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct EntitySetExpr;

struct QualifierCond {
  std::string key;
  Cop cop = Cop::Is;
  ValueLiteral value;

  bool operator==(const QualifierCond&) const = default;
};

struct CountCmp {
  Cop cop = Cop::Is;
  ValueLiteral value;

  bool operator==(const CountCmp&) const = default;
};

// whose <A> attr </A> COP Value [qualifier]
struct AttrCmp {
  std::string attribute;
  Cop cop = Cop::Is;
  ValueLiteral value;
  std::optional<QualifierCond> qualifier;

  bool operator==(const AttrCmp&) const = default;
};

// that have SOP <A> attr </A> [qualifier]
struct AttrSup {
  Sop sop = Sop::Largest;
  std::string attribute;
  std::optional<QualifierCond> qualifier;

  bool operator==(const AttrSup&) const = default;
};

// that <R> rel </R> [DIR] to [COP Value] EntitySet [qualifier]
// An absent direction means the default (backward) until normalized.
struct Rel {
  std::string relation;
  std::optional<Dir> dir;
  Box<EntitySetExpr> target;
  std::optional<CountCmp> count;
  std::optional<QualifierCond> qualifier;

  bool operator==(const Rel&) const = default;
};

// that <R> rel </R> [DIR] to SOP EntitySet
struct RelSup {
  std::string relation;
  std::optional<Dir> dir;
  Sop sop = Sop::Largest;
  Box<EntitySetExpr> target;

  bool operator==(const RelSup&) const = default;
};

struct Constraint {
  std::variant<AttrCmp, AttrSup, Rel, RelSup> node;

  bool operator==(const Constraint&) const = default;
};

struct EntityLeaf {
  std::string name;
  bool operator==(const EntityLeaf&) const = default;
};

struct ConceptLeaf {
  std::string name;
  bool operator==(const ConceptLeaf&) const = default;
};

// <ES> <C> concept </C> EntitySet </ES>
struct Typed {
  std::string concept_name;
  Box<EntitySetExpr> inner;
  bool operator==(const Typed&) const = default;
};

// <ES> EntitySet LOP EntitySet </ES>; `not` is set difference left \ right.
struct Combine {
  Lop lop = Lop::And;
  Box<EntitySetExpr> left;
  Box<EntitySetExpr> right;
  bool operator==(const Combine&) const = default;
};

// <ES> EntitySet Constraint </ES>, or the appositive spelling
// <ES> EntitySet ( <ES> ones Constraint </ES> ) </ES> when `appositive`.
struct Constrained {
  Box<EntitySetExpr> inner;
  Constraint constraint;
  bool appositive = false;
  bool operator==(const Constrained&) const = default;
};

// Redundant <ES> EntitySet </ES> wrapper; removed by normalize.
struct Group {
  Box<EntitySetExpr> inner;
  bool operator==(const Group&) const = default;
};

struct EntitySetExpr {
  std::variant<EntityLeaf, ConceptLeaf, Typed, Combine, Constrained, Group> node;
  bool operator==(const EntitySetExpr&) const = default;
};

struct ValueExpr;

struct Lit {
  ValueLiteral value;
  bool operator==(const Lit&) const = default;
};

struct AttrOfEntity {
  std::string attribute;
  std::string entity;
  bool operator==(const AttrOfEntity&) const = default;
};

struct Aggregate {
  Vop vop = Vop::Sum;
  Box<ValueExpr> inner;
  bool operator==(const Aggregate&) const = default;
};

struct ValueCombine {
  Lop lop = Lop::And;
  Box<ValueExpr> left;
  Box<ValueExpr> right;
  bool operator==(const ValueCombine&) const = default;
};

struct ValueExpr {
  std::variant<Lit, AttrOfEntity, Aggregate, ValueCombine> node;
  bool operator==(const ValueExpr&) const = default;
};

struct EntityQuery {
  EntitySetExpr entityset;
  bool operator==(const EntityQuery&) const = default;
};

struct AttributeQuery {
  std::string attribute;
  EntitySetExpr entityset;
  bool operator==(const AttributeQuery&) const = default;
};

struct RelationQuery {
  EntitySetExpr source;
  EntitySetExpr target;
  bool operator==(const RelationQuery&) const = default;
};

struct QualifierQuery {
  std::string qualifier;
  EntitySetExpr entityset;
  Constraint constraint;
  bool operator==(const QualifierQuery&) const = default;
};

struct CountQuery {
  EntitySetExpr entityset;
  bool operator==(const CountQuery&) const = default;
};

struct VerifyQuery {
  EntitySetExpr entityset;
  Constraint constraint;
  bool operator==(const VerifyQuery&) const = default;
};

struct ValueQuery {
  ValueExpr value;
  bool operator==(const ValueQuery&) const = default;
};

// which one has the SOP <A> attr </A> among EntitySet
struct SuperlativeQuery {
  Sop sop = Sop::Largest;
  std::string attribute;
  EntitySetExpr entityset;
  bool operator==(const SuperlativeQuery&) const = default;
};

struct QueryAst {
  std::variant<EntityQuery, AttributeQuery, RelationQuery, QualifierQuery, CountQuery,
               VerifyQuery, ValueQuery, SuperlativeQuery>
      node;
  bool operator==(const QueryAst&) const = default;
};

// Small constructors; they keep test fixtures and generators readable.
namespace build {
EntitySetExpr entity(std::string name);
EntitySetExpr concept_set(std::string name);
EntitySetExpr typed(std::string concept_name, EntitySetExpr inner);
EntitySetExpr combine(Lop lop, EntitySetExpr left, EntitySetExpr right);
EntitySetExpr constrained(EntitySetExpr inner, Constraint c, bool appositive = false);
EntitySetExpr group(EntitySetExpr inner);
Constraint attr_cmp(std::string attribute, Cop cop, ValueLiteral value,
                    std::optional<QualifierCond> qualifier = std::nullopt);
Constraint attr_sup(Sop sop, std::string attribute,
                    std::optional<QualifierCond> qualifier = std::nullopt);
Constraint rel(std::string relation, std::optional<Dir> dir, EntitySetExpr target,
               std::optional<CountCmp> count = std::nullopt,
               std::optional<QualifierCond> qualifier = std::nullopt);
Constraint rel_sup(std::string relation, std::optional<Dir> dir, Sop sop, EntitySetExpr target);
}  // namespace build

// Variant names, e.g. "EntityQuery", "Constrained", "AttrCmp".
std::string_view variant_name(const QueryAst& q);
std::string_view variant_name(const EntitySetExpr& e);
std::string_view variant_name(const Constraint& c);
std::string_view variant_name(const ValueExpr& v);

// Nesting depth: leaves are 1; constraint targets count as children of the
// constrained node. A query's depth is the maximum over its parts.
int depth(const EntitySetExpr& e);
int depth(const ValueExpr& v);
int depth(const QueryAst& q);

// Indented one-node-per-line debugging dump.
std::string dump_tree(const QueryAst& q);

// Machine-readable JSON form (see ast_json.cpp for the schema).
std::string to_json(const QueryAst& q, int indent = -1);
Result<QueryAst> from_json(std::string_view text);

// Semantic checks; empty result means the AST is well-formed.
Diagnostics validate(const QueryAst& q);

// Canonical form. Idempotent and meaning-preserving.
QueryAst normalize(const QueryAst& q);
EntitySetExpr normalize(const EntitySetExpr& e);

}  // namespace graphq
