#include <gtest/gtest.h>

#include "codegen.hpp"
#include "evaluator.hpp"
#include "fixtures.hpp"
#include "generator.hpp"
#include "ir_syntax.hpp"

using namespace graphq;

namespace {

const SchemaMapping kMap = default_mapping();

Answer eval_ir(const std::string& ir, const Graph& g) {
  auto q = parse_ir_text(ir);
  if (!q) throw std::runtime_error("bad IR: " + ir);
  auto a = interpret(*q, g, kMap);
  if (!a) throw std::runtime_error("eval failed: " + a.diagnostics().front().code);
  return *a;
}

Answer run(const std::string& program, const Graph& g) {
  auto a = run_kopl(program, g, kMap);
  if (!a) throw std::runtime_error("run failed: " + a.diagnostics().front().code);
  return *a;
}

}  // namespace

TEST(Interpret, CapitalQualifierValue) {
  auto g = test::load_fixture("uzbekistan.json");
  auto a = interpret(test::capital_ast(), g, kMap);
  ASSERT_TRUE(a);
  EXPECT_EQ(*a, Answer::of_values({make_value(VType::Year, "1930")}));
}

TEST(Interpret, CountOnEmptyGraph) {
  auto a = interpret(QueryAst{CountQuery{build::concept_set("film")}}, Graph{}, kMap);
  ASSERT_TRUE(a);
  EXPECT_EQ(*a, Answer::number(0));
}

TEST(Interpret, NotWithItselfIsEmpty) {
  auto g = test::load_fixture("kubrick.json");
  for (auto set : {build::concept_set("film"), build::entity("Stanley Kubrick")}) {
    auto a = interpret(QueryAst{EntityQuery{build::combine(Lop::Not, set, set)}}, g, kMap);
    ASSERT_TRUE(a);
    EXPECT_EQ(*a, Answer::entities({}));
  }
}

TEST(Interpret, DirectionConvention) {
  auto g = test::load_fixture("kubrick.json");
  // backward: the constrained films are the edge heads.
  EXPECT_EQ(eval_ir("how many <ES> <C> film </C> that <R> director </R> backward to <E> Stanley "
                    "Kubrick </E> </ES>",
                    g),
            Answer::number(3));
  EXPECT_EQ(eval_ir("what is <ES> <C> human </C> that <R> director </R> forward to <C> film </C> "
                    "</ES>",
                    g),
            Answer::entities({"Stanley Kubrick"}));
}

TEST(Interpret, SuperlativeKeepsTies) {
  auto g = test::load_fixture("newscasts.json");
  EXPECT_EQ(eval_ir(test::kNewscastIr, g), Answer::entities({"Morning Report", "Evening Report"}));
  EXPECT_EQ(eval_ir("which one has the smallest <A> duration </A> among <C> newscast </C>", g),
            Answer::entities({"Late Report"}));
}

TEST(Interpret, RelationQueryAndVerify) {
  auto g = test::load_fixture("kubrick.json");
  EXPECT_EQ(eval_ir("what is the relation from <E> The Shining </E> to <E> Stanley Kubrick </E>", g),
            Answer::predicates({"director"}));
  auto yes = eval_ir("whether <E> Stanley Kubrick </E> that <R> spouse </R> backward to <E> "
                     "Christiane Kubrick </E>",
                     g);
  EXPECT_EQ(yes, Answer::boolean(true));
}

TEST(Interpret, RelSupIsUnsupported) {
  QueryAst q{EntityQuery{build::constrained(
      build::entity("a"), build::rel_sup("r", Dir::Forward, Sop::Largest, build::entity("b")))}};
  auto a = interpret(q, Graph{}, kMap);
  ASSERT_FALSE(a);
  EXPECT_EQ(a.diagnostics().front().code, "E_EVAL_UNSUPPORTED");
}

TEST(RunKopl, CountFilms) {
  auto g = test::load_fixture("kubrick.json");
  EXPECT_EQ(run("FindAll() . FilterConcept(film) . Count()", g), Answer::number(3));
  EXPECT_EQ(run("FindAll() . Count()", Graph{}), Answer::number(0));
}

TEST(RunKopl, TiedSuperlative) {
  auto g = test::load_fixture("newscasts.json");
  auto program = emit_kopl(test::newscast_ast(), kMap);
  ASSERT_TRUE(program);
  EXPECT_EQ(run(*program, g), Answer::entities({"Morning Report", "Evening Report"}));
}

TEST(RunKopl, Errors) {
  auto a = run_kopl("Bogus(x)", Graph{}, kMap);
  ASSERT_FALSE(a);
  EXPECT_EQ(a.diagnostics().front().code, "E_UNKNOWN_FUNCTION");
  auto b = run_kopl("FindAll() . Count() . Count()", Graph{}, kMap);
  ASSERT_FALSE(b);
  EXPECT_EQ(b.diagnostics().front().code, "E_RUNTIME_TYPE");
}

TEST(Answer, ValuesCompareAsMultisets) {
  auto a = Answer::of_values({make_value(VType::Number, "110"), make_value(VType::Year, "1930")});
  auto b = Answer::of_values({make_value(VType::Year, "1930"), make_value(VType::Number, "110.00")});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, Answer::of_values({make_value(VType::Year, "1930")}));
}

TEST(Differential, InterpreterMatchesExecutor) {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 1500; ++seed) {
    Rng rng(seed + 77);
    auto ast = gen_ast(rng, 3);
    auto g = gen_graph(rng, 30);
    auto program = emit_kopl(ast, kMap);
    auto direct = interpret(ast, g, kMap);
    if (!program || !direct) continue;
    ++compared;
    auto via = run_kopl(*program, g, kMap);
    ASSERT_TRUE(via) << *program;
    EXPECT_EQ(*direct, *via) << print_ir(ast) << "\n" << *program << "\n"
                             << direct->to_json() << "\n" << via->to_json();
  }
  EXPECT_GT(compared, 1000);
}

TEST(Differential, NormalizeInvariance) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed + 5);
    auto ast = gen_ast(rng, 3);
    auto g = gen_graph(rng, 30);
    auto a = interpret(ast, g, kMap);
    auto b = interpret(normalize(ast), g, kMap);
    ASSERT_EQ(a.ok(), b.ok());
    if (a) {
      EXPECT_EQ(*a, *b) << print_ir(ast);
    }
  }
}

TEST(Differential, UnmatchedEntityDoesNotChangeSets) {
  GraphEntity stranger{"ZZ", "Nobody In Particular", {"nothing"}, {}, {}};
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed + 9);
    auto ast = gen_ast(rng, 3);
    if (!std::holds_alternative<CountQuery>(ast.node) &&
        !std::holds_alternative<EntityQuery>(ast.node))
      continue;
    auto g = gen_graph(rng, 20);
    auto parts = g.entities();
    parts.push_back(stranger);
    auto bigger = Graph::from_parts(parts);
    auto a = interpret(ast, g, kMap);
    auto b = interpret(ast, bigger, kMap);
    if (!a || !b) continue;
    EXPECT_EQ(*a, *b) << print_ir(ast);
  }
}
