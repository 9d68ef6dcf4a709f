#include "ir_syntax.hpp"

namespace graphq {

namespace {

constexpr int kMaxNesting = 200;

struct ParseFailure {
  Diagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    end_ = tokens.empty() ? 0 : tokens.back().span.end;
  }

  QueryAst parse() {
    QueryAst q = query();
    if (pos_ < toks_.size()) {
      const Token& t = toks_[pos_];
      if (t.kind == TokenKind::MarkerClose)
        fail("E_UNBALANCED_MARKER", t.span, "'" + t.text + "' closes nothing");
      fail("E_TRAILING_INPUT", t.span, "unexpected '" + t.text + "' after a complete query");
    }
    return q;
  }

 private:
  // ---- token helpers ----

  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }

  bool at_keyword(std::string_view text, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->kind == TokenKind::Keyword && t->text == text;
  }

  bool at_open(MarkerTag tag, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->kind == TokenKind::MarkerOpen && t->tag == tag;
  }

  bool at_close(MarkerTag tag) const {
    const Token* t = peek();
    return t && t->kind == TokenKind::MarkerClose && t->tag == tag;
  }

  [[noreturn]] static void fail(std::string code, Span span, std::string message) {
    throw ParseFailure{error(std::move(code), span, std::move(message))};
  }

  // Reports the token under the cursor as not fitting `expected`.
  [[noreturn]] void unexpected(std::string_view expected) const {
    const Token* t = peek();
    if (!t) {
      if (!open_es_.empty())
        fail("E_UNBALANCED_MARKER", open_es_.back(), "'<ES>' is never closed");
      fail("E_UNEXPECTED_TOKEN", Span{end_, end_},
           "input ends where " + std::string(expected) + " was expected");
    }
    if (t->kind == TokenKind::MarkerClose &&
        (t->tag != MarkerTag::ES || open_es_.empty()))
      fail("E_UNBALANCED_MARKER", t->span, "'" + t->text + "' closes nothing");
    fail("E_UNEXPECTED_TOKEN", t->span,
         "expected " + std::string(expected) + ", found '" + t->text + "'");
  }

  void expect_keyword(std::string_view text) {
    if (!at_keyword(text)) unexpected("'" + std::string(text) + "'");
    ++pos_;
  }

  // Reads `<X> words </X>` and returns the words joined by single spaces.
  std::pair<std::string, Span> payload(MarkerTag tag) {
    std::string open = "<" + std::string(tag_name(tag)) + ">";
    if (!at_open(tag)) unexpected("'" + open + "'");
    Span open_span = toks_[pos_++].span;
    std::string text;
    Span span{open_span.end, open_span.end};
    bool first = true;
    while (const Token* t = peek()) {
      if (t->kind != TokenKind::Word && t->kind != TokenKind::Keyword) break;
      if (first) span.begin = t->span.begin;
      span.end = t->span.end;
      if (!first) text += ' ';
      text += t->text;
      first = false;
      ++pos_;
    }
    if (!at_close(tag))
      fail("E_UNBALANCED_MARKER", open_span, "'" + open + "' has no matching close marker");
    if (text.empty())
      fail("E_EMPTY_PAYLOAD", Span{open_span.begin, toks_[pos_].span.end},
           "'" + open + "' encloses no words");
    ++pos_;
    return {text, span};
  }

  template <typename E, typename F>
  std::optional<E> take(F parse_fn) {
    const Token* t = peek();
    if (!t || t->kind != TokenKind::Keyword) return std::nullopt;
    auto e = parse_fn(t->text);
    if (e) ++pos_;
    return e;
  }

  struct Nest {
    explicit Nest(Parser& p) : parser(p) {
      if (++parser.nesting_ > kMaxNesting) {
        const Token* t = parser.peek();
        fail("E_NESTING_TOO_DEEP", t ? t->span : Span{parser.end_, parser.end_},
             "nesting exceeds " + std::to_string(kMaxNesting) + " levels");
      }
    }
    ~Nest() { --parser.nesting_; }
    Parser& parser;
  };

  // ---- grammar ----

  QueryAst query() {
    if (at_keyword("what")) {
      ++pos_;
      expect_keyword("is");
      if (at_keyword("the")) {
        if (at_keyword("attribute", 1)) {
          pos_ += 2;
          auto attr = payload(MarkerTag::A).first;
          expect_keyword("of");
          return {AttributeQuery{attr, entity_set()}};
        }
        if (at_keyword("relation", 1)) {
          pos_ += 2;
          expect_keyword("from");
          auto source = entity_set();
          expect_keyword("to");
          return {RelationQuery{std::move(source), entity_set()}};
        }
        if (at_keyword("qualifier", 1)) {
          pos_ += 2;
          auto key = payload(MarkerTag::Q).first;
          expect_keyword("of");
          auto es = entity_set();
          return {QualifierQuery{key, std::move(es), constraint()}};
        }
        ++pos_;
        unexpected("'attribute', 'relation' or 'qualifier'");
      }
      if (starts_entity_set()) return {EntityQuery{entity_set()}};
      if (starts_value()) return {ValueQuery{value()}};
      unexpected("an entity set or a value");
    }
    if (at_keyword("how")) {
      ++pos_;
      expect_keyword("many");
      return {CountQuery{entity_set()}};
    }
    if (at_keyword("whether")) {
      ++pos_;
      auto es = entity_set();
      return {VerifyQuery{std::move(es), constraint()}};
    }
    if (at_keyword("which")) {
      ++pos_;
      expect_keyword("one");
      expect_keyword("has");
      expect_keyword("the");
      auto sop = take<Sop>(parse_sop);
      if (!sop) unexpected("'largest' or 'smallest'");
      auto attr = payload(MarkerTag::A).first;
      expect_keyword("among");
      return {SuperlativeQuery{*sop, attr, entity_set()}};
    }
    unexpected("'what', 'how', 'whether' or 'which'");
  }

  bool starts_entity_set() const {
    return at_open(MarkerTag::ES) || at_open(MarkerTag::E) || at_open(MarkerTag::C);
  }

  bool starts_value() const {
    const Token* t = peek();
    if (!t) return false;
    if (t->kind == TokenKind::Keyword)
      return parse_vtype(t->text) || parse_vop(t->text) || t->text == "(";
    return at_open(MarkerTag::A);
  }

  EntitySetExpr entity_set() {
    Nest nest(*this);
    if (at_open(MarkerTag::E)) return {EntityLeaf{payload(MarkerTag::E).first}};
    if (at_open(MarkerTag::C)) return {ConceptLeaf{payload(MarkerTag::C).first}};
    if (!at_open(MarkerTag::ES)) unexpected("an entity set");

    open_es_.push_back(toks_[pos_++].span);
    EntitySetExpr inner;
    if (at_open(MarkerTag::C)) {
      auto concept_name = payload(MarkerTag::C).first;
      if (starts_entity_set()) {
        auto typed = Typed{concept_name, entity_set()};
        close_es();
        return {std::move(typed)};
      }
      inner = {ConceptLeaf{concept_name}};
    } else {
      inner = entity_set();
    }

    EntitySetExpr result;
    if (auto lop = take<Lop>(parse_lop)) {
      result = {Combine{*lop, std::move(inner), entity_set()}};
    } else if (at_keyword("whose") || at_keyword("that")) {
      result = {Constrained{std::move(inner), constraint(), false}};
    } else if (at_keyword("(")) {
      ++pos_;
      if (!at_open(MarkerTag::ES)) unexpected("'<ES>'");
      open_es_.push_back(toks_[pos_++].span);
      expect_keyword("ones");
      auto c = constraint();
      close_es();
      expect_keyword(")");
      result = {Constrained{std::move(inner), std::move(c), true}};
    } else if (at_close(MarkerTag::ES)) {
      result = {Group{std::move(inner)}};
    } else {
      unexpected("a logical operator, a constraint or '</ES>'");
    }
    close_es();
    return result;
  }

  void close_es() {
    if (!at_close(MarkerTag::ES)) unexpected("'</ES>'");
    ++pos_;
    open_es_.pop_back();
  }

  ValueLiteral literal() {
    const Token* t = peek();
    auto vtype = take<VType>(parse_vtype);
    if (!vtype) unexpected("a value type");
    auto [raw, span] = payload(MarkerTag::V);
    auto parsed = parse_value_literal(*vtype, raw);
    if (!parsed.value) fail("E_BAD_VALUE", Span{t->span.begin, span.end}, parsed.error);
    return *parsed.value;
  }

  Cop cop() {
    auto op = take<Cop>(parse_cop);
    if (!op) unexpected("a comparison operator");
    return *op;
  }

  std::optional<QualifierCond> qualifier() {
    if (!at_open(MarkerTag::Q)) return std::nullopt;
    auto key = payload(MarkerTag::Q).first;
    auto op = cop();
    return QualifierCond{key, op, literal()};
  }

  Constraint constraint() {
    if (at_keyword("whose")) {
      ++pos_;
      auto attr = payload(MarkerTag::A).first;
      auto op = cop();
      auto v = literal();
      return {AttrCmp{attr, op, std::move(v), qualifier()}};
    }
    if (!at_keyword("that")) unexpected("'whose' or 'that'");
    ++pos_;
    if (at_keyword("have")) {
      ++pos_;
      auto sop = take<Sop>(parse_sop);
      if (!sop) unexpected("'largest' or 'smallest'");
      auto attr = payload(MarkerTag::A).first;
      return {AttrSup{*sop, attr, qualifier()}};
    }
    auto relation = payload(MarkerTag::R).first;
    auto dir = take<Dir>(parse_dir);
    expect_keyword("to");
    if (auto sop = take<Sop>(parse_sop))
      return {RelSup{relation, dir, *sop, entity_set()}};
    std::optional<CountCmp> count;
    if (auto op = take<Cop>(parse_cop)) count = CountCmp{*op, literal()};
    auto target = entity_set();
    return {Rel{relation, dir, std::move(target), std::move(count), qualifier()}};
  }

  // Value := Primary (LOP Primary)*, left-associative.
  ValueExpr value() {
    Nest nest(*this);
    ValueExpr left = value_primary();
    while (auto lop = take<Lop>(parse_lop))
      left = {ValueCombine{*lop, std::move(left), value_primary()}};
    return left;
  }

  ValueExpr value_primary() {
    Nest nest(*this);
    if (at_keyword("(")) {
      ++pos_;
      auto v = value();
      expect_keyword(")");
      return v;
    }
    if (at_open(MarkerTag::A)) {
      auto attr = payload(MarkerTag::A).first;
      expect_keyword("of");
      return {AttrOfEntity{attr, payload(MarkerTag::E).first}};
    }
    if (auto vop = take<Vop>(parse_vop)) {
      expect_keyword("of");
      return {Aggregate{*vop, value_primary()}};
    }
    const Token* t = peek();
    if (t && t->kind == TokenKind::Keyword && parse_vtype(t->text)) return {Lit{literal()}};
    unexpected("a value");
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  int nesting_ = 0;
  std::vector<Span> open_es_;
};

}  // namespace

Result<QueryAst> parse_ir(const std::vector<Token>& tokens) {
  try {
    return Parser(tokens).parse();
  } catch (const ParseFailure& f) {
    return f.diagnostic;
  }
}

Result<QueryAst> parse_ir_text(std::string_view text) { return parse_ir(tokenize(text)); }

}  // namespace graphq
