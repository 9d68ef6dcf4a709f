#include <gtest/gtest.h>

#include "codegen.hpp"
#include "fixtures.hpp"
#include "ir_syntax.hpp"

using namespace graphq;

namespace {

QueryAst ir(const char* text) {
  auto q = parse_ir_text(text);
  if (!q) throw std::runtime_error(std::string("bad fixture IR: ") + text);
  return *q;
}

std::string first_code(const Result<std::string>& r) {
  return r ? "" : r.diagnostics().front().code;
}

const SchemaMapping kMap = default_mapping();

}  // namespace

TEST(Sparql, CapitalQualifier) {
  auto out = emit_sparql(test::capital_ast(), kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, test::kCapitalSparql);
}

TEST(Sparql, NewscastSuperlative) {
  auto out = emit_sparql(test::newscast_ast(), kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, test::kNewscastSparql);
}

TEST(Sparql, SpiderwickAndEducatedAt) {
  auto r2 = emit_sparql(ir(test::kSpiderwickIr), kMap);
  ASSERT_TRUE(r2);
  EXPECT_EQ(*r2,
            "SELECT DISTINCT ?p WHERE { ?e_1 name \"The Spiderwick Chronicles\" . ?e_1 genre ?e_3 "
            ". ?e_3 name \"kid film\" . ?e_2 name \"John Sayles\" . ?e_1 ?p ?e_2 }");
  auto r4 = emit_sparql(ir(test::kEducatedAtIr), kMap);
  ASSERT_TRUE(r4);
  EXPECT_EQ(*r4,
            "SELECT DISTINCT ?qpv WHERE { ?e_1 name \"Joseph L. Mankiewicz\" . ?e_2 name "
            "\"Columbia University\" . ?e_1 educated_at ?e_2 . [ fact_h ?e_1 ; fact_r educated_at "
            "; fact_t ?e_2 ] start_time ?qpv }");
}

TEST(Sparql, SingleLeaf) {
  auto out = emit_sparql(QueryAst{EntityQuery{build::entity("x")}}, kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, "SELECT ?e WHERE { ?e name \"x\" }");
}

TEST(Sparql, ConceptTriples) {
  auto out = emit_sparql(QueryAst{EntityQuery{build::concept_set("film")}}, kMap);
  ASSERT_TRUE(out);
  EXPECT_NE(out->find("?e instance_of ?c . ?c name \"film\""), std::string::npos);
}

TEST(Sparql, EscapesStrings) {
  auto out = emit_sparql(QueryAst{EntityQuery{build::entity("say \"hi\" \\o/")}}, kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, "SELECT ?e WHERE { ?e name \"say \\\"hi\\\" \\\\o/\" }");
}

TEST(Sparql, CountWithHaving) {
  auto out = emit_sparql(
      ir("how many <ES> <C> person </C> that <R> spouse </R> forward to <C> person </C> </ES>"),
      kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(out->rfind("SELECT (COUNT(DISTINCT ?e) AS ?count)", 0), 0u) << *out;
}

TEST(Sparql, RelationSuperlativeUnsupported) {
  QueryAst q{EntityQuery{build::constrained(
      build::entity("a"), build::rel_sup("r", Dir::Forward, Sop::Largest, build::entity("b")))}};
  EXPECT_EQ(first_code(emit_sparql(q, kMap)), "E_UNSUPPORTED");
  EXPECT_EQ(first_code(emit_kopl(q, kMap)), "E_UNSUPPORTED");
  EXPECT_EQ(first_code(emit_cypher(q, kMap)), "E_UNSUPPORTED");
  EXPECT_EQ(first_code(emit_lambda_dcs(q, kMap)), "E_UNSUPPORTED");
}

TEST(Sparql, ValidationErrorsPassThrough) {
  QueryAst q{EntityQuery{build::constrained(
      build::entity("a"),
      build::attr_cmp("height", Cop::AtLeast, make_value(VType::String, "tall")))}};
  EXPECT_EQ(first_code(emit_sparql(q, kMap)), "E_TYPE_MISMATCH");
}

TEST(Sparql, PredicateCollision) {
  QueryAst q{AttributeQuery{"instance of", build::entity("a")}};
  EXPECT_EQ(first_code(emit_sparql(q, kMap)), "E_PREDICATE_COLLISION");
}

TEST(Sparql, MappingChangesPredicates) {
  auto m = load_mapping(R"({"reserved_predicates":{"name":"rdfs:label"},
                            "dialect_options":{"sparql.predicate_prefix":"wdt:"}})");
  ASSERT_TRUE(m);
  auto out = emit_sparql(test::capital_ast(), *m);
  ASSERT_TRUE(out);
  EXPECT_NE(out->find("?e_1 rdfs:label \"Uzbekistan\""), std::string::npos) << *out;
  EXPECT_NE(out->find("?e_1 wdt:capital ?e_2"), std::string::npos) << *out;
}

TEST(Mapping, RejectsUnknownKeys) {
  auto m = load_mapping(R"({"no_such_option": true})");
  ASSERT_FALSE(m);
  EXPECT_EQ(m.diagnostics().front().code, "E_CONFIG");
}

TEST(Kopl, NewscastSuperlative) {
  auto out = emit_kopl(test::newscast_ast(), kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out,
            "FindAll() . FilterConcept(newscast) . FilterNum(duration, 110, minute, =) . "
            "SelectAmong(duration, smallest) . What()");
}

TEST(Kopl, CountConcept) {
  auto out = emit_kopl(QueryAst{CountQuery{build::concept_set("film")}}, kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, "FindAll() . FilterConcept(film) . Count()");
}

TEST(Kopl, EducatedAtQualifier) {
  auto out = emit_kopl(ir(test::kEducatedAtIr), kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out,
            "Find(Joseph L. Mankiewicz) | Find(Columbia University) | "
            "QueryRelationQualifier(educated_at, start_time)");
}

TEST(Kopl, EscapesArguments) {
  auto out = emit_kopl(QueryAst{EntityQuery{build::entity("A, B (c)")}}, kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, "Find(A\\, B \\(c\\)) . What()");
}

TEST(Cypher, CapitalQualifier) {
  auto out = emit_cypher(test::capital_ast(), kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out,
            "MATCH (e1 {name: \"Uzbekistan\"})-[r1:capital]->(e2 {name: \"Tashkent\"}) RETURN "
            "DISTINCT r1.start_time");
}

TEST(Cypher, Skeletons) {
  auto leaf = emit_cypher(QueryAst{EntityQuery{build::entity("x")}}, kMap);
  ASSERT_TRUE(leaf);
  EXPECT_EQ(*leaf, "MATCH (e1 {name: \"x\"}) RETURN e1.name");
  auto count = emit_cypher(QueryAst{CountQuery{build::concept_set("film")}}, kMap);
  ASSERT_TRUE(count);
  EXPECT_EQ(*count,
            "MATCH (e1)-[:instance_of]->(:Concept {name: \"film\"}) RETURN count(DISTINCT e1)");
}

TEST(Cypher, RelationQueryLeavesTypeOpen) {
  auto out = emit_cypher(ir(test::kSpiderwickIr), kMap);
  ASSERT_TRUE(out);
  EXPECT_NE(out->find("-[r]->"), std::string::npos) << *out;
  EXPECT_NE(out->find("RETURN type(r)"), std::string::npos) << *out;
}

TEST(LambdaDcs, ConceptUsesTypeSkeleton) {
  auto out = emit_lambda_dcs(QueryAst{EntityQuery{build::concept_set("film")}}, kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out,
            "(call @listValue (call @getProperty (call @singleton en.film) (string !type)))");
}

TEST(LambdaDcs, QualifierQueryUnsupported) {
  EXPECT_EQ(first_code(emit_lambda_dcs(test::capital_ast(), kMap)), "E_UNSUPPORTED");
}

TEST(LambdaDcs, NewscastSuperlative) {
  auto out = emit_lambda_dcs(test::newscast_ast(), kMap);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out,
            "(call @listValue (call @superlative (call @filter (call @getProperty (call "
            "@singleton en.newscast) (string !type)) (string duration) (string =) (number 110 "
            "en.minute)) (string min) (string duration)))");
}

TEST(Emit, Deterministic) {
  for (auto d : {Dialect::Sparql, Dialect::Cypher, Dialect::Kopl, Dialect::LambdaDcs}) {
    auto a = emit(d, test::newscast_ast(), kMap);
    auto b = emit(d, test::newscast_ast(), kMap);
    ASSERT_TRUE(a);
    EXPECT_EQ(*a, *b);
  }
}
