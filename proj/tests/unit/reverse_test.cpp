#include <gtest/gtest.h>

#include "codegen.hpp"
#include "fixtures.hpp"
#include "generator.hpp"
#include "ir_syntax.hpp"
#include "reverse.hpp"

using namespace graphq;

namespace {

const SchemaMapping kMap = default_mapping();

std::string first_code(const Result<QueryAst>& r) { return r ? "" : r.diagnostics().front().code; }

}  // namespace

TEST(ParseSparql, CapitalQualifier) {
  auto q = parse_sparql(test::kCapitalSparql, kMap);
  ASSERT_TRUE(q) << first_code(q);
  EXPECT_EQ(*q, normalize(test::capital_ast()));
}

TEST(ParseSparql, SingleTriple) {
  auto q = parse_sparql("SELECT ?e WHERE { ?e name \"x\" }", kMap);
  ASSERT_TRUE(q) << first_code(q);
  EXPECT_EQ(*q, (QueryAst{EntityQuery{build::entity("x")}}));
}

TEST(ParseSparql, NewscastSuperlative) {
  auto q = parse_sparql(test::kNewscastSparql, kMap);
  ASSERT_TRUE(q) << first_code(q);
  EXPECT_EQ(*q, normalize(test::newscast_ast()));
}

TEST(ParseSparql, ToleratesWhitespace) {
  auto q = parse_sparql("SELECT ?e\nWHERE {\n  ?e name \"x\"\n}", kMap);
  ASSERT_TRUE(q) << first_code(q);
}

TEST(ParseSparql, OutOfDialect) {
  EXPECT_EQ(first_code(parse_sparql("SELECT ?e WHERE { OPTIONAL { ?e name \"x\" } }", kMap)),
            "E_OUT_OF_DIALECT");
  EXPECT_EQ(first_code(parse_sparql(
                "SELECT ?e WHERE { { ?e name \"x\" } UNION { ?e name \"y\" } }", kMap)),
            "E_OUT_OF_DIALECT");
  EXPECT_EQ(first_code(parse_sparql("SELECT ?e WHERE { ?e capital/name \"x\" }", kMap)),
            "E_OUT_OF_DIALECT");
  EXPECT_EQ(first_code(parse_sparql(
                "SELECT ?e WHERE { ?e name \"x\" . { SELECT ?f WHERE { ?f name \"y\" } } }", kMap)),
            "E_OUT_OF_DIALECT");
}

TEST(ParseSparql, UnknownPredicate) {
  EXPECT_EQ(first_code(parse_sparql("SELECT ?e WHERE { ?e name \"x\" . ?e Capital ?e_1 . ?e_1 name \"y\" }", kMap)),
            "E_UNKNOWN_PREDICATE");
}

TEST(ParseSparql, SyntaxError) {
  EXPECT_EQ(first_code(parse_sparql("SELECT ?e WHERE { ?e name ", kMap)), "E_SPARQL_SYNTAX");
  EXPECT_EQ(first_code(parse_sparql("", kMap)), "E_SPARQL_SYNTAX");
}

TEST(ParseKopl, CountConcept) {
  auto q = parse_kopl("FindAll() . FilterConcept(film) . Count()", kMap);
  ASSERT_TRUE(q) << first_code(q);
  EXPECT_EQ(*q, (QueryAst{CountQuery{build::concept_set("film")}}));
}

TEST(ParseKopl, NewscastProgram) {
  auto program = emit_kopl(test::newscast_ast(), kMap);
  ASSERT_TRUE(program);
  auto q = parse_kopl(*program, kMap);
  ASSERT_TRUE(q) << first_code(q);
  EXPECT_EQ(*q, normalize(test::newscast_ast()));
}

TEST(ParseKopl, Errors) {
  EXPECT_EQ(first_code(parse_kopl("Bogus(x)", kMap)), "E_UNKNOWN_FUNCTION");
  EXPECT_EQ(first_code(parse_kopl("Find(a, b) . What()", kMap)), "E_ARITY");
  EXPECT_EQ(first_code(parse_kopl("Find(a) | What()", kMap)), "E_BAD_BRANCH");
  EXPECT_EQ(first_code(parse_kopl("Find(a . What()", kMap)), "E_KOPL_SYNTAX");
}

TEST(Transpile, SparqlToKopl) {
  auto q = parse_sparql(test::kCapitalSparql, kMap);
  ASSERT_TRUE(q);
  auto out = emit_kopl(*q, kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, "Find(Uzbekistan) | Find(Tashkent) | QueryRelationQualifier(capital, start_time)");
}

TEST(RoundTrip, RandomQueries) {
  int sparql = 0, kopl = 0;
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    Rng rng(seed);
    auto ast = gen_ast(rng, 4);
    auto want = normalize(ast);
    if (auto s = emit_sparql(ast, kMap)) {
      ++sparql;
      auto back = parse_sparql(*s, kMap);
      ASSERT_TRUE(back) << *s << " " << first_code(back);
      EXPECT_EQ(*back, want) << *s;
    }
    if (auto k = emit_kopl(ast, kMap)) {
      ++kopl;
      auto back = parse_kopl(*k, kMap);
      ASSERT_TRUE(back) << *k << " " << first_code(back);
      EXPECT_EQ(*back, want) << *k;
    }
  }
  EXPECT_GT(sparql, 500);
  EXPECT_GT(kopl, 2000);
}

TEST(RoundTrip, CustomMapping) {
  auto m = load_mapping(R"({"reserved_predicates":{"name":"label","instance_of":"isa"},
                            "dialect_options":{"sparql.predicate_prefix":"p:"}})");
  ASSERT_TRUE(m);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    auto ast = gen_ast(rng, 3);
    if (auto s = emit_sparql(ast, *m)) {
      auto back = parse_sparql(*s, *m);
      ASSERT_TRUE(back) << *s << " " << first_code(back);
      EXPECT_EQ(*back, normalize(ast)) << *s;
    }
  }
}
