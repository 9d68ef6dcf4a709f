#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generator.hpp"
#include "ir_syntax.hpp"

using namespace graphq;

namespace {

std::string codes(const Diagnostics& d) {
  std::string out;
  for (const auto& x : d) out += (out.empty() ? "" : ",") + x.code;
  return out;
}

}  // namespace

TEST(Tokenize, MarkersAndWords) {
  auto t = tokenize("<C> film </C>");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].kind, TokenKind::MarkerOpen);
  EXPECT_EQ(t[0].tag, MarkerTag::C);
  EXPECT_EQ(t[1].kind, TokenKind::Word);
  EXPECT_EQ(t[1].text, "film");
  EXPECT_EQ(t[2].kind, TokenKind::MarkerClose);
  EXPECT_EQ(t[2].tag, MarkerTag::C);
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, MultiWordKeyword) {
  auto t = tokenize("is not x");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].kind, TokenKind::Keyword);
  EXPECT_EQ(t[0].text, "is not");
  EXPECT_EQ(t[1].kind, TokenKind::Word);
  EXPECT_EQ(t[1].text, "x");
}

TEST(Tokenize, MarkerGluedToParenthesis) {
  auto t = tokenize("(<ES>");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].text, "(");
  EXPECT_EQ(t[1].kind, TokenKind::MarkerOpen);
  EXPECT_EQ(t[1].tag, MarkerTag::ES);
}

TEST(Tokenize, KeywordsInsidePayloadAreWords) {
  auto t = tokenize("<E> what is and </E>");
  ASSERT_EQ(t.size(), 5u);
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(t[i].kind, TokenKind::Word) << i;
}

TEST(Tokenize, SpansCountCodePoints) {
  auto t = tokenize("<E> Zürich </E>");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[1].span.begin, 4u);
  EXPECT_EQ(t[1].span.end, 10u);
  EXPECT_EQ(t[2].span.begin, 11u);
}

TEST(ParseIr, CapitalQualifier) {
  auto q = parse_ir_text(test::kCapitalIr);
  ASSERT_TRUE(q) << codes(q.diagnostics());
  EXPECT_EQ(*q, test::capital_ast());
}

TEST(ParseIr, SmallestEntityQuery) {
  auto q = parse_ir_text("what is <E> x </E>");
  ASSERT_TRUE(q);
  EXPECT_EQ(*q, (QueryAst{EntityQuery{build::entity("x")}}));
}

TEST(ParseIr, NewscastSuperlative) {
  auto q = parse_ir_text(test::kNewscastIr);
  ASSERT_TRUE(q) << codes(q.diagnostics());
  EXPECT_EQ(*q, test::newscast_ast());
}

TEST(ParseIr, SpiderwickAppositive) {
  auto q = parse_ir_text(test::kSpiderwickIr);
  ASSERT_TRUE(q) << codes(q.diagnostics());
  auto* rq = std::get_if<RelationQuery>(&q->node);
  ASSERT_NE(rq, nullptr);
  auto* c = std::get_if<Constrained>(&rq->source.node);
  ASSERT_NE(c, nullptr);
  EXPECT_TRUE(c->appositive);
  EXPECT_EQ(rq->target, build::entity("John Sayles"));
}

TEST(ParseIr, Errors) {
  EXPECT_EQ(codes(parse_ir_text("what is <E> x").diagnostics()), "E_UNBALANCED_MARKER");
  EXPECT_EQ(codes(parse_ir_text("what is <E> </E>").diagnostics()), "E_EMPTY_PAYLOAD");
  EXPECT_EQ(codes(parse_ir_text("what is <E> x </E> extra").diagnostics()), "E_TRAILING_INPUT");
  EXPECT_EQ(codes(parse_ir_text("how much <E> x </E>").diagnostics()), "E_UNEXPECTED_TOKEN");
}

TEST(ParseIr, ErrorSpansPointIntoInput) {
  auto r = parse_ir_text("what is <E> x </E> extra");
  ASSERT_FALSE(r);
  EXPECT_EQ(r.diagnostics()[0].span.begin, 19u);
  EXPECT_EQ(r.diagnostics()[0].span.end, 24u);
}

TEST(PrintIr, Basics) {
  EXPECT_EQ(print_ir(QueryAst{EntityQuery{build::entity("x")}}), "what is <E> x </E>");
  EXPECT_EQ(print_ir(QueryAst{CountQuery{build::concept_set("film")}}), "how many <C> film </C>");
}

TEST(PrintIr, DefaultDirectionPrintsBackward) {
  EXPECT_EQ(print_ir(test::capital_ast()),
            "what is the qualifier <Q> start time </Q> of <E> Uzbekistan </E> that <R> capital "
            "</R> backward to <E> Tashkent </E>");
}

TEST(PrintIr, SurfaceFormKeepsAppositive) {
  auto q = parse_ir_text(test::kSpiderwickIr);
  ASSERT_TRUE(q);
  EXPECT_EQ(print_ir_surface(*q), test::kSpiderwickIr);
}

TEST(PrintIr, MarkersBalance) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    auto text = print_ir(gen_ast(rng, 4));
    for (auto tag : {"ES", "E", "C", "A", "R", "Q", "V"}) {
      auto count = [&](const std::string& m) {
        std::size_t n = 0;
        for (auto p = text.find(m); p != std::string::npos; p = text.find(m, p + 1)) ++n;
        return n;
      };
      EXPECT_EQ(count(std::string("<") + tag + ">"), count(std::string("</") + tag + ">"))
          << text;
    }
  }
}

TEST(PrintIr, RoundTripsRandomQueries) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    Rng rng(seed);
    auto ast = gen_ast(rng, 4);
    auto back = parse_ir_text(print_ir(ast));
    ASSERT_TRUE(back) << print_ir(ast) << " " << codes(back.diagnostics());
    EXPECT_EQ(*back, normalize(ast)) << print_ir(ast);
    auto surface = parse_ir_text(print_ir_surface(ast));
    ASSERT_TRUE(surface) << print_ir_surface(ast);
    EXPECT_EQ(*surface, ast) << print_ir_surface(ast);
  }
}
