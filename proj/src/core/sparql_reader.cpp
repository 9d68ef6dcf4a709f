#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "overloaded.hpp"
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

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// ---- Lexer ----------------------------------------------------------------

enum class TokKind { Punct, String, Var, Word, Op, End };

struct Tok {
  TokKind kind = TokKind::End;
  std::string text;                     // unescaped for strings
  std::optional<std::string> datatype;  // after ^^
  Span span;
};

bool is_punct(char c) {
  return c == '{' || c == '}' || c == '(' || c == ')' || c == '[' || c == ']' || c == ';' ||
         c == ',';
}

bool is_op(std::string_view s) {
  return s == "=" || s == "!=" || s == ">" || s == "<" || s == ">=" || s == "<=";
}

std::vector<Tok> lex(std::string_view text) {
  std::vector<Tok> out;
  std::size_t i = 0;
  auto at_word_end = [&](std::size_t j) {
    return j >= text.size() || std::isspace(static_cast<unsigned char>(text[j])) ||
           is_punct(text[j]);
  };
  while (true) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    char c = text[i];
    if (is_punct(c)) {
      out.push_back({TokKind::Punct, std::string(1, c), {}, {start, start + 1}});
      ++i;
      continue;
    }
    if (c == '"') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        char d = text[i++];
        if (d == '\\') {
          if (i >= text.size()) break;
          char e = text[i++];
          if (e != '"' && e != '\\')
            fail("E_SPARQL_SYNTAX", {i - 2, i}, "unsupported escape sequence");
          value += e;
        } else if (d == '"') {
          closed = true;
          break;
        } else {
          value += d;
        }
      }
      if (!closed) fail("E_SPARQL_SYNTAX", {start, text.size()}, "unterminated string literal");
      Tok t{TokKind::String, std::move(value), {}, {start, i}};
      if (i < text.size() && text[i] == '@')
        fail("E_OUT_OF_DIALECT", {i, i + 1}, "language-tagged literals are not supported");
      if (text.substr(i, 2) == "^^") {
        i += 2;
        std::size_t dt = i;
        while (!at_word_end(i)) ++i;
        if (i == dt) fail("E_SPARQL_SYNTAX", {dt - 2, dt}, "missing datatype after '^^'");
        t.datatype = std::string(text.substr(dt, i - dt));
        if (t.datatype->back() == '.') {
          t.datatype->pop_back();
          --i;
        }
        t.span.end = i;
      }
      out.push_back(std::move(t));
      continue;
    }
    while (!at_word_end(i)) ++i;
    std::string word(text.substr(start, i - start));
    // A statement-ending '.' glued to the previous term.
    if (word.size() > 1 && word.back() == '.') {
      word.pop_back();
      --i;
    }
    Span span{start, start + word.size()};
    if (word == ".")
      out.push_back({TokKind::Punct, word, {}, span});
    else if (is_op(word))
      out.push_back({TokKind::Op, word, {}, span});
    else if (word[0] == '?' || word[0] == '$')
      out.push_back({TokKind::Var, "?" + word.substr(1), {}, span});
    else
      out.push_back({TokKind::Word, word, {}, span});
  }
  out.push_back({TokKind::End, "", {}, {text.size(), text.size()}});
  return out;
}

// ---- Patterns ---------------------------------------------------------------

struct Term {
  TokKind kind = TokKind::Word;
  std::string text;
  std::optional<std::string> datatype;
  Span span;
};

struct Triple {
  Term s, p, o;
  bool used = false;
};

struct FactPat {
  Term h, r, t;
  std::optional<Term> cond_key, cond_node;
  std::optional<Term> outer_key, outer_node;
  Span span;
  bool used = false;
};

struct FilterPat {
  Term lhs;
  Cop cop = Cop::Is;
  Term rhs;
  bool used = false;
};

struct Having {
  std::string var;
  Cop cop = Cop::Is;
  std::string number;
  Span span;
};

enum class Select { Entity, Count, Attribute, Relation, Qualifier, Value, Ask };

struct Parsed {
  Select select = Select::Entity;
  std::optional<Vop> vop;
  std::vector<Triple> triples;
  std::vector<FactPat> facts;
  std::vector<FilterPat> filters;
  std::optional<Having> having;
  std::optional<Sop> order;
};

const std::set<std::string> kForeignKeywords{"OPTIONAL", "UNION",   "MINUS", "VALUES", "BIND",
                                             "SERVICE",  "GRAPH",   "SELECT",
                                             "EXISTS",   "CONSTRUCT", "DESCRIBE", "PREFIX",
                                             "BASE",     "OFFSET",  "FROM"};

class Parser {
 public:
  Parser(std::vector<Tok> toks, const SchemaMapping& m) : toks_(std::move(toks)), m_(m) {}

  Parsed parse() {
    Parsed p;
    if (is_kw("ASK")) {
      next();
      p.select = Select::Ask;
      body(p);
    } else if (is_kw("SELECT")) {
      next();
      selection(p);
      expect_kw("WHERE");
      body(p);
      modifiers(p);
    } else if (is_foreign()) {
      fail("E_OUT_OF_DIALECT", peek().span, "only SELECT and ASK queries are supported");
    } else {
      fail("E_SPARQL_SYNTAX", peek().span, "expected SELECT or ASK");
    }
    if (peek().kind != TokKind::End)
      fail("E_SPARQL_SYNTAX", peek().span, "unexpected '" + peek().text + "' after the query");
    return p;
  }

 private:
  const Tok& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Tok& next() {
    const Tok& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_kw(std::string_view kw, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokKind::Word && upper(peek(ahead).text) == kw;
  }
  bool is_punct(std::string_view p) const {
    return peek().kind == TokKind::Punct && peek().text == p;
  }
  bool is_foreign() const {
    return peek().kind == TokKind::Word && kForeignKeywords.count(upper(peek().text));
  }

  [[noreturn]] void unexpected(std::string_view wanted) const {
    const Tok& t = peek();
    std::string got = t.kind == TokKind::End ? "end of input" : "'" + t.text + "'";
    fail("E_SPARQL_SYNTAX", t.span, "expected " + std::string(wanted) + ", found " + got);
  }

  void expect_kw(std::string_view kw) {
    if (!is_kw(kw)) unexpected(kw);
    next();
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) unexpected("'" + std::string(p) + "'");
    next();
  }
  std::string expect_var() {
    if (peek().kind != TokKind::Var) unexpected("a variable");
    return next().text;
  }
  void expect_var(std::string_view name) {
    if (peek().kind != TokKind::Var || peek().text != name) unexpected(name);
    next();
  }

  void selection(Parsed& p) {
    if (peek().kind == TokKind::Op || (peek().kind == TokKind::Word && peek().text == "*"))
      fail("E_OUT_OF_DIALECT", peek().span, "SELECT * is not supported");
    if (is_kw("DISTINCT")) {
      next();
      auto v = expect_var();
      if (v == "?p")
        p.select = Select::Relation;
      else if (v == "?qpv")
        p.select = Select::Qualifier;
      else
        fail("E_OUT_OF_DIALECT", peek(0).span, "unsupported projection " + v);
      return;
    }
    if (peek().kind == TokKind::Var) {
      auto span = peek().span;
      auto v = next().text;
      if (v == "?e")
        p.select = Select::Entity;
      else if (v == "?v")
        p.select = Select::Attribute;
      else
        fail("E_OUT_OF_DIALECT", span, "unsupported projection " + v);
      return;
    }
    expect_punct("(");
    if (is_kw("COUNT")) {
      next();
      expect_punct("(");
      expect_kw("DISTINCT");
      expect_var("?e");
      expect_punct(")");
      expect_kw("AS");
      expect_var("?count");
      p.select = Select::Count;
    } else {
      static const std::map<std::string, Vop> kAggs{
          {"SUM", Vop::Sum}, {"AVG", Vop::Average}, {"MAX", Vop::Maximum}, {"MIN", Vop::Minimum}};
      auto it = peek().kind == TokKind::Word ? kAggs.find(upper(peek().text)) : kAggs.end();
      if (it == kAggs.end()) unexpected("COUNT or an aggregate");
      next();
      expect_punct("(");
      expect_var("?v");
      expect_punct(")");
      expect_kw("AS");
      expect_var("?value");
      p.select = Select::Value;
      p.vop = it->second;
    }
    expect_punct(")");
  }

  void modifiers(Parsed& p) {
    if (is_kw("GROUP")) {
      next();
      expect_kw("BY");
      expect_var("?e");
      expect_kw("HAVING");
      expect_punct("(");
      Having h;
      h.span = peek().span;
      expect_kw("COUNT");
      expect_punct("(");
      expect_kw("DISTINCT");
      h.var = expect_var();
      expect_punct(")");
      if (peek().kind != TokKind::Op) unexpected("a comparison operator");
      h.cop = *parse_cop_symbol(next().text);
      if (peek().kind != TokKind::Word) unexpected("a number");
      h.number = next().text;
      expect_punct(")");
      p.having = h;
    }
    if (is_kw("ORDER")) {
      next();
      expect_kw("BY");
      if (is_kw("DESC")) {
        next();
        expect_punct("(");
        expect_var("?v");
        expect_punct(")");
        p.order = Sop::Largest;
      } else {
        expect_var("?v");
        p.order = Sop::Smallest;
      }
      expect_kw("LIMIT");
      if (peek().kind != TokKind::Word || peek().text != "1") unexpected("LIMIT 1");
      next();
    }
    if (is_foreign() || is_kw("ORDER") || is_kw("GROUP") || is_kw("LIMIT"))
      fail("E_OUT_OF_DIALECT", peek().span, "unsupported solution modifier");
  }

  Term term() {
    const Tok& t = peek();
    switch (t.kind) {
      case TokKind::Var:
      case TokKind::String:
      case TokKind::Word: {
        next();
        return Term{t.kind, t.text, t.datatype, t.span};
      }
      default: unexpected("a term");
    }
  }

  Term predicate() {
    if (peek().kind == TokKind::Word) {
      const auto& w = peek().text;
      if (w == "a" || w.front() == '^' || w.find('/') != std::string::npos ||
          w.find('|') != std::string::npos || w.back() == '*' || w.back() == '+' ||
          (w.front() == '<' && w.back() == '>'))
        fail("E_OUT_OF_DIALECT", peek().span, "property paths and IRIs are not supported");
    }
    if (peek().kind != TokKind::Word && peek().kind != TokKind::Var) unexpected("a predicate");
    return term();
  }

  void body(Parsed& p) {
    expect_punct("{");
    while (!is_punct("}")) {
      if (peek().kind == TokKind::End) unexpected("'}'");
      pattern(p);
      if (is_punct("."))
        next();
      else if (!is_punct("}"))
        unexpected("'.' or '}'");
    }
    next();
  }

  void pattern(Parsed& p) {
    if (is_kw("FILTER")) {
      next();
      if (is_kw("NOT") || is_kw("EXISTS"))
        fail("E_OUT_OF_DIALECT", peek().span, "FILTER EXISTS is not supported");
      expect_punct("(");
      FilterPat f;
      f.lhs = term();
      if (peek().kind != TokKind::Op) unexpected("a comparison operator");
      f.cop = *parse_cop_symbol(next().text);
      f.rhs = term();
      expect_punct(")");
      p.filters.push_back(std::move(f));
      return;
    }
    if (is_punct("[")) {
      fact(p);
      return;
    }
    if (is_punct("{"))
      fail("E_OUT_OF_DIALECT", peek().span, "nested groups and subqueries are not supported");
    if (is_foreign())
      fail("E_OUT_OF_DIALECT", peek().span, "'" + peek().text + "' is not supported");
    if (peek().kind != TokKind::Var) unexpected("a variable, '[' or FILTER");
    Triple t;
    t.s = term();
    t.p = predicate();
    t.o = term();
    if (is_punct(";") || is_punct(","))
      fail("E_OUT_OF_DIALECT", peek().span, "predicate-object lists are only used inside '[ ]'");
    p.triples.push_back(std::move(t));
  }

  void fact(Parsed& p) {
    FactPat f;
    f.span = peek().span;
    next();
    const auto& rh = m_.reserved("fact_h");
    const auto& rr = m_.reserved("fact_r");
    const auto& rt = m_.reserved("fact_t");
    bool h = false, r = false, t = false;
    while (true) {
      Term key = predicate();
      Term value = term();
      if (key.kind == TokKind::Word && key.text == rh && !h) {
        f.h = value;
        h = true;
      } else if (key.kind == TokKind::Word && key.text == rr && !r) {
        f.r = value;
        r = true;
      } else if (key.kind == TokKind::Word && key.text == rt && !t) {
        f.t = value;
        t = true;
      } else if (!f.cond_key) {
        f.cond_key = key;
        f.cond_node = value;
      } else {
        fail("E_OUT_OF_DIALECT", key.span, "a fact carries at most one qualifier condition");
      }
      if (is_punct(";")) {
        next();
        continue;
      }
      break;
    }
    expect_punct("]");
    if (!h || !r || !t) fail("E_OUT_OF_DIALECT", f.span, "incomplete fact pattern");
    f.span.end = peek().span.begin;
    if (!is_punct(".") && !is_punct("}")) {
      f.outer_key = predicate();
      f.outer_node = term();
    }
    p.facts.push_back(std::move(f));
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  const SchemaMapping& m_;
};

// ---- Reconstruction -------------------------------------------------------

// Index of a variable in its counter: ?e_3 -> 3, ?e -> 0.
int var_key(const std::string& v) {
  auto us = v.rfind('_');
  if (us == std::string::npos || us + 1 == v.size()) return 0;
  int k = 0;
  for (std::size_t i = us + 1; i < v.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(v[i]))) return 0;
    k = k * 10 + (v[i] - '0');
    if (k > 1'000'000) return 1'000'000;
  }
  return k;
}

class Rebuilder {
 public:
  Rebuilder(Parsed& p, const SchemaMapping& m) : p_(p), m_(m) {
    const auto& name = m.reserved("name");
    const auto& inst = m.reserved("instance_of");
    const auto& value = m.reserved("value");
    const auto& unit = m.reserved("unit");
    for (const auto& [role, rendered] : m.reserved_predicates) reserved_.insert(rendered);

    for (auto& t : p_.triples) {
      if (t.s.kind != TokKind::Var) fail("E_OUT_OF_DIALECT", t.s.span, "subjects must be variables");
      if (t.p.kind != TokKind::Word) continue;
      if (t.p.text == inst) {
        if (t.o.kind != TokKind::Var)
          fail("E_OUT_OF_DIALECT", t.o.span, "concept membership needs a concept variable");
        concept_vars_.insert(t.o.text);
      } else if (t.p.text == value) {
        if (value_of_.count(t.s.text))
          fail("E_OUT_OF_DIALECT", t.s.span, "value node with two values");
        value_of_[t.s.text] = &t;
      } else if (t.p.text == unit) {
        if (t.o.kind != TokKind::String || t.o.datatype)
          fail("E_OUT_OF_DIALECT", t.o.span, "units must be plain string literals");
        unit_of_[t.s.text] = &t;
      }
    }
    for (auto& t : p_.triples) {
      if (t.p.kind != TokKind::Word) continue;
      if (t.p.text == name) {
        if (t.o.kind != TokKind::String || t.o.datatype)
          fail("E_OUT_OF_DIALECT", t.o.span, "names must be plain string literals");
        auto& target = concept_vars_.count(t.s.text) ? concept_name_ : entity_name_;
        if (target.count(t.s.text))
          fail("E_OUT_OF_DIALECT", t.s.span, t.s.text + " has two names");
        target[t.s.text] = &t;
      } else if (t.p.text == inst) {
        memberships_[t.s.text].push_back(&t);
      } else if (reserved_.count(t.p.text) && t.p.text != value && t.p.text != unit) {
        fail("E_OUT_OF_DIALECT", t.p.span, "'" + t.p.text + "' is only valid inside a fact");
      }
    }
  }

  QueryAst query() {
    QueryAst q = build_query();
    for (const auto& t : p_.triples)
      if (!t.used) fail("E_OUT_OF_DIALECT", t.s.span, "pattern does not fit the query shape");
    for (const auto& f : p_.facts)
      if (!f.used) fail("E_OUT_OF_DIALECT", f.span, "fact pattern does not fit the query shape");
    for (const auto& f : p_.filters)
      if (!f.used) fail("E_OUT_OF_DIALECT", f.lhs.span, "FILTER does not fit the query shape");
    if (p_.having && !having_used_)
      fail("E_OUT_OF_DIALECT", p_.having->span, "HAVING does not count a relation of ?e");
    return q;
  }

 private:
  QueryAst build_query() {
    switch (p_.select) {
      case Select::Entity: {
        if (p_.order) {
          if (p_.having) fail("E_OUT_OF_DIALECT", p_.having->span, "HAVING with ORDER BY");
          auto attr = take_output_attribute("?e", "?pv");
          return QueryAst{SuperlativeQuery{*p_.order, attr, build("?e")}};
        }
        return QueryAst{EntityQuery{build("?e")}};
      }
      case Select::Count: return QueryAst{CountQuery{build("?e")}};
      case Select::Attribute: {
        auto attr = take_output_attribute("?e", "?pv");
        return QueryAst{AttributeQuery{attr, build("?e")}};
      }
      case Select::Relation: {
        Triple* main = nullptr;
        for (auto& t : p_.triples)
          if (t.p.kind == TokKind::Var && t.p.text == "?p" && t.s.text == "?e_1" &&
              t.o.text == "?e_2")
            main = &t;
        if (!main) fail("E_OUT_OF_DIALECT", {0, 0}, "missing '?e_1 ?p ?e_2'");
        main->used = true;
        return QueryAst{RelationQuery{build("?e_1"), build("?e_2")}};
      }
      case Select::Qualifier: return qualifier_query();
      case Select::Value: {
        auto attr = take_output_attribute("?e", "?pv");
        auto es = build("?e");
        auto* leaf = std::get_if<EntityLeaf>(&es.node);
        if (!leaf) fail("E_OUT_OF_DIALECT", {0, 0}, "aggregates apply to one named entity");
        return QueryAst{ValueQuery{ValueExpr{Aggregate{*p_.vop, ValueExpr{AttrOfEntity{attr, leaf->name}}}}}};
      }
      case Select::Ask: {
        auto es = build("?e");
        auto* c = std::get_if<Constrained>(&es.node);
        if (!c) fail("E_OUT_OF_DIALECT", {0, 0}, "ASK needs a constraint on ?e");
        if (std::holds_alternative<AttrSup>(c->constraint.node) ||
            std::holds_alternative<RelSup>(c->constraint.node))
          fail("E_OUT_OF_DIALECT", {0, 0}, "ASK constraint must compare or relate");
        EntitySetExpr inner = *c->inner;
        Constraint con = c->constraint;
        return QueryAst{VerifyQuery{std::move(inner), std::move(con)}};
      }
    }
    fail("E_OUT_OF_DIALECT", {0, 0}, "unsupported query form");
  }

  // `subject P node . node value ?v` that carries the projected value.
  std::string take_output_attribute(const std::string& subject, const std::string& node) {
    Triple* attr = nullptr;
    for (auto& t : p_.triples)
      if (!t.used && t.s.text == subject && t.o.kind == TokKind::Var && t.o.text == node &&
          t.p.kind == TokKind::Word)
        attr = &t;
    auto vit = value_of_.find(node);
    if (!attr || vit == value_of_.end() || vit->second->o.kind != TokKind::Var ||
        vit->second->o.text != "?v")
      fail("E_OUT_OF_DIALECT", {0, 0}, "missing '" + subject + " P " + node + " . " + node +
                                           " value ?v'");
    if (unit_of_.count(node)) fail("E_OUT_OF_DIALECT", unit_of_[node]->s.span, "unexpected unit");
    attr->used = true;
    vit->second->used = true;
    return label(attr->p);
  }

  QueryAst qualifier_query() {
    FactPat* f = nullptr;
    for (auto& x : p_.facts)
      if (x.outer_key) {
        if (f) fail("E_OUT_OF_DIALECT", x.span, "two qualifier projections");
        f = &x;
      }
    if (!f || f->outer_node->text != "?qpv")
      fail("E_OUT_OF_DIALECT", {0, 0}, "missing '[ ... ] key ?qpv'");
    f->used = true;
    std::string key = label(*f->outer_key);
    if (f->h.text != "?e_1" && f->h.text != "?e_2")
      fail("E_OUT_OF_DIALECT", f->h.span, "unexpected fact head");
    Triple* main = find_triple(f->h.text, f->r, f->t.text);
    if (!main) fail("E_OUT_OF_DIALECT", f->span, "fact without a matching triple");
    main->used = true;

    if (value_of_.count(f->t.text)) {
      if (f->h.text != "?e_1") fail("E_OUT_OF_DIALECT", f->h.span, "unexpected fact head");
      auto [cop, value] = value_node(f->t.text);
      AttrCmp cmp{label(f->r), cop, std::move(value), condition(*f)};
      auto es = build("?e_1");
      return QueryAst{QualifierQuery{key, std::move(es), Constraint{std::move(cmp)}}};
    }
    bool backward = f->h.text == "?e_1";
    if (f->t.text != (backward ? "?e_2" : "?e_1"))
      fail("E_OUT_OF_DIALECT", f->t.span, "unexpected fact tail");
    Rel rel{label(f->r), backward ? Dir::Backward : Dir::Forward, build("?e_2"), std::nullopt,
            condition(*f)};
    auto es = build("?e_1");
    return QueryAst{QualifierQuery{key, std::move(es), Constraint{std::move(rel)}}};
  }

  Triple* find_triple(const std::string& s, const Term& p, const std::string& o) {
    for (auto& t : p_.triples)
      if (!t.used && t.s.text == s && t.p.kind == p.kind && t.p.text == p.text && t.o.text == o)
        return &t;
    return nullptr;
  }

  FactPat* find_fact(const std::string& h, const std::string& r, const std::string& t) {
    for (auto& f : p_.facts)
      if (!f.used && !f.outer_key && f.h.text == h && f.r.text == r && f.t.text == t) return &f;
    return nullptr;
  }

  std::string label(const Term& t) const {
    if (t.kind != TokKind::Word) fail("E_OUT_OF_DIALECT", t.span, "expected a predicate");
    const auto& pre = m_.sparql_predicate_prefix;
    const auto& suf = m_.sparql_predicate_suffix;
    std::string_view text = t.text;
    if (reserved_.count(t.text) || text.size() < pre.size() + suf.size() ||
        text.substr(0, pre.size()) != pre || text.substr(text.size() - suf.size()) != suf)
      fail("E_UNKNOWN_PREDICATE", t.span, "'" + t.text + "' is not a mapped predicate");
    auto core = text.substr(pre.size(), text.size() - pre.size() - suf.size());
    std::string l = m_.denormalize_label(core);
    if (l.empty() || m_.normalize_label(l) != core)
      fail("E_UNKNOWN_PREDICATE", t.span, "no label renders as '" + t.text + "'");
    return l;
  }

  ValueLiteral literal(const Term& t, const std::optional<std::string>& unit) const {
    if (t.kind != TokKind::String) fail("E_OUT_OF_DIALECT", t.span, "expected a literal");
    VType vtype;
    std::string numeric = m_.numeric_datatype_suffix;
    if (numeric.rfind("^^", 0) == 0) numeric = numeric.substr(2);
    if (!t.datatype) {
      vtype = numeric.empty() && (unit || Decimal::parse(t.text)) ? VType::Number : VType::String;
    } else if (*t.datatype == numeric) {
      vtype = VType::Number;
    } else if (*t.datatype == "xsd:gYear") {
      vtype = VType::Year;
    } else if (*t.datatype == "xsd:date") {
      vtype = VType::Date;
    } else if (*t.datatype == "xsd:time") {
      vtype = VType::Time;
    } else {
      fail("E_OUT_OF_DIALECT", t.span, "unsupported datatype '" + *t.datatype + "'");
    }
    if (unit && vtype != VType::Number)
      fail("E_OUT_OF_DIALECT", t.span, "only numbers carry units");
    std::string raw = unit ? t.text + " " + *unit : t.text;
    auto parsed = parse_value_literal(vtype, raw);
    if (!parsed.value) fail("E_BAD_VALUE", t.span, parsed.error);
    return *parsed.value;
  }

  // Value node facts: optional unit, then a literal or a filtered variable.
  std::pair<Cop, ValueLiteral> value_node(const std::string& node) {
    auto vit = value_of_.find(node);
    if (vit == value_of_.end() || vit->second->used)
      fail("E_OUT_OF_DIALECT", {0, 0}, node + " has no value");
    Triple& vt = *vit->second;
    vt.used = true;
    std::optional<std::string> unit;
    if (auto uit = unit_of_.find(node); uit != unit_of_.end()) {
      uit->second->used = true;
      unit = uit->second->o.text;
    }
    if (vt.o.kind != TokKind::Var) return {Cop::Is, literal(vt.o, unit)};
    for (auto& f : p_.filters)
      if (!f.used && f.lhs.kind == TokKind::Var && f.lhs.text == vt.o.text &&
          f.rhs.kind == TokKind::String) {
        f.used = true;
        return {f.cop, literal(f.rhs, unit)};
      }
    fail("E_OUT_OF_DIALECT", vt.o.span, vt.o.text + " is not compared by a FILTER");
  }

  std::optional<QualifierCond> condition(FactPat& f) {
    if (!f.cond_key) return std::nullopt;
    if (f.cond_node->kind != TokKind::Var)
      fail("E_OUT_OF_DIALECT", f.cond_node->span, "qualifier conditions need a value node");
    auto [cop, value] = value_node(f.cond_node->text);
    return QualifierCond{label(*f.cond_key), cop, std::move(value)};
  }

  struct Op {
    int key;
    int order;
    enum Kind { Attr, Relation, Join } kind;
    Triple* triple = nullptr;
    FilterPat* filter = nullptr;
    std::string child;
  };

  EntitySetExpr build(const std::string& v) {
    if (++depth_ > 512) fail("E_OUT_OF_DIALECT", {0, 0}, "pattern nesting too deep");
    if (!building_.insert(v).second)
      fail("E_OUT_OF_DIALECT", {0, 0}, "cyclic variable structure at " + v);

    // Base: the name, otherwise the first concept; further concepts type it.
    std::optional<EntitySetExpr> es;
    if (auto it = entity_name_.find(v); it != entity_name_.end()) {
      it->second->used = true;
      es = build::entity(it->second->o.text);
    }
    auto concepts = memberships_[v];
    std::stable_sort(concepts.begin(), concepts.end(), [](const Triple* a, const Triple* b) {
      return var_key(a->o.text) < var_key(b->o.text);
    });
    for (Triple* t : concepts) {
      t->used = true;
      auto cn = concept_name_.find(t->o.text);
      if (cn == concept_name_.end())
        fail("E_OUT_OF_DIALECT", t->o.span, t->o.text + " has no name");
      cn->second->used = true;
      const std::string& c = cn->second->o.text;
      es = es ? build::typed(c, std::move(*es)) : build::concept_set(c);
    }
    if (!es) fail("E_OUT_OF_DIALECT", {0, 0}, v + " has neither a name nor a concept");

    std::vector<Op> ops;
    int vk = var_key(v);
    int order = 0;
    for (auto& t : p_.triples) {
      if (t.used || t.p.kind != TokKind::Word || reserved_.count(t.p.text)) continue;
      if (t.o.kind != TokKind::Var)
        fail("E_OUT_OF_DIALECT", t.o.span, "objects of user predicates must be variables");
      if (t.s.text == v && value_of_.count(t.o.text)) {
        ops.push_back({var_key(t.o.text), order++, Op::Attr, &t, nullptr, t.o.text});
      } else if (t.s.text == v && var_key(t.o.text) > vk && !concept_vars_.count(t.o.text)) {
        ops.push_back({var_key(t.o.text), order++, Op::Relation, &t, nullptr, t.o.text});
      } else if (t.o.text == v && var_key(t.s.text) > vk) {
        ops.push_back({var_key(t.s.text), order++, Op::Relation, &t, nullptr, t.s.text});
      }
    }
    for (auto& f : p_.filters) {
      if (f.used || f.lhs.kind != TokKind::Var || f.rhs.kind != TokKind::Var || f.cop != Cop::Is)
        continue;
      if (f.lhs.text == v && var_key(f.rhs.text) > vk)
        ops.push_back({var_key(f.rhs.text), order++, Op::Join, nullptr, &f, f.rhs.text});
    }
    std::stable_sort(ops.begin(), ops.end(),
                     [](const Op& a, const Op& b) { return a.key < b.key; });

    for (auto& op : ops) {
      switch (op.kind) {
        case Op::Join:
          op.filter->used = true;
          es = build::combine(Lop::And, std::move(*es), build(op.child));
          break;
        case Op::Attr: {
          Triple& t = *op.triple;
          t.used = true;
          auto [cop, value] = value_node(op.child);
          std::optional<QualifierCond> q;
          if (FactPat* f = find_fact(v, t.p.text, op.child)) {
            f->used = true;
            q = condition(*f);
          }
          es = build::constrained(std::move(*es),
                                  build::attr_cmp(label(t.p), cop, std::move(value), std::move(q)));
          break;
        }
        case Op::Relation: {
          Triple& t = *op.triple;
          t.used = true;
          bool backward = t.s.text == v;
          std::optional<QualifierCond> q;
          if (FactPat* f = find_fact(t.s.text, t.p.text, t.o.text)) {
            f->used = true;
            q = condition(*f);
          }
          std::optional<CountCmp> count;
          if (p_.having && p_.having->var == op.child) {
            if (v != "?e" || p_.select != Select::Entity)
              fail("E_OUT_OF_DIALECT", p_.having->span, "HAVING counts only relations of ?e");
            auto n = parse_value_literal(VType::Number, p_.having->number);
            if (!n.value || n.value->unit)
              fail("E_BAD_VALUE", p_.having->span, "count must be a plain number");
            count = CountCmp{p_.having->cop, *n.value};
            having_used_ = true;
          }
          auto target = build(op.child);
          es = build::constrained(
              std::move(*es), build::rel(label(t.p), backward ? Dir::Backward : Dir::Forward,
                                         std::move(target), std::move(count), std::move(q)));
          break;
        }
      }
    }
    --depth_;
    return std::move(*es);
  }

  Parsed& p_;
  const SchemaMapping& m_;
  std::set<std::string> reserved_;
  std::set<std::string> concept_vars_;
  std::map<std::string, Triple*> value_of_;
  std::map<std::string, Triple*> unit_of_;
  std::map<std::string, Triple*> entity_name_;
  std::map<std::string, Triple*> concept_name_;
  std::map<std::string, std::vector<Triple*>> memberships_;
  std::set<std::string> building_;
  bool having_used_ = false;
  int depth_ = 0;
};

}  // namespace

Result<QueryAst> parse_sparql(std::string_view text, const SchemaMapping& mapping) {
  try {
    Parsed parsed = Parser(lex(text), mapping).parse();
    QueryAst q = normalize(Rebuilder(parsed, mapping).query());
    auto diags = validate(q);
    if (!diags.empty()) return diags;
    return q;
  } catch (const ReadError& e) {
    return error(e.code, e.span, e.message);
  }
}

}  // namespace graphq
