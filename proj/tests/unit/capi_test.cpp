#include <gtest/gtest.h>

#include <string>

#include "fixtures.hpp"
#include "graphq/graphq.h"

namespace {

struct Diags {
  gq_diagnostics* d = gq_diagnostics_new();
  ~Diags() { gq_diagnostics_free(d); }
  std::string first() const {
    return gq_diagnostics_count(d) ? gq_diagnostic_code(d, 0) : std::string();
  }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  gq_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, CompileCapitalQualifier) {
  Diags diags;
  std::string ir = graphq::test::kCapitalIr;
  gq_query* q = nullptr;
  ASSERT_EQ(gq_query_parse(GQ_DIALECT_IR, ir.data(), ir.size(), nullptr, &q, diags.d), GQ_OK);
  char* out = nullptr;
  ASSERT_EQ(gq_query_emit(q, GQ_DIALECT_SPARQL, nullptr, &out, diags.d), GQ_OK);
  EXPECT_EQ(take(out), graphq::test::kCapitalSparql);
  EXPECT_EQ(gq_query_depth(q), 2);
  gq_query_free(q);
}

TEST(CApi, StatusClasses) {
  Diags diags;
  gq_query* q = nullptr;
  std::string bad = "what is <E> x";
  EXPECT_EQ(gq_query_parse(GQ_DIALECT_IR, bad.data(), bad.size(), nullptr, &q, diags.d),
            GQ_ERR_PARSE);
  EXPECT_EQ(q, nullptr);
  EXPECT_EQ(diags.first(), "E_UNBALANCED_MARKER");

  gq_diagnostics_clear(diags.d);
  std::string ill = "what is <ES> <E> a </E> whose <A> height </A> larger than string <V> x </V> </ES>";
  ASSERT_EQ(gq_query_parse(GQ_DIALECT_IR, ill.data(), ill.size(), nullptr, &q, diags.d), GQ_OK);
  EXPECT_EQ(gq_query_check(q, diags.d), GQ_ERR_VALIDATE);
  EXPECT_EQ(diags.first(), "E_TYPE_MISMATCH");
  gq_query_free(q);

  gq_diagnostics_clear(diags.d);
  std::string capital = graphq::test::kCapitalIr;
  ASSERT_EQ(gq_query_parse(GQ_DIALECT_IR, capital.data(), capital.size(), nullptr, &q, diags.d), GQ_OK);
  char* out = nullptr;
  EXPECT_EQ(gq_query_emit(q, GQ_DIALECT_LAMBDA_DCS, nullptr, &out, diags.d), GQ_ERR_UNSUPPORTED);
  EXPECT_EQ(out, nullptr);
  gq_query_free(q);

  gq_diagnostics_clear(diags.d);
  std::string optional = "SELECT ?e WHERE { OPTIONAL { ?e name \"x\" } }";
  EXPECT_EQ(gq_query_parse(GQ_DIALECT_SPARQL, optional.data(), optional.size(), nullptr, &q,
                           diags.d),
            GQ_ERR_UNSUPPORTED);

  gq_diagnostics_clear(diags.d);
  gq_graph* g = nullptr;
  std::string dangling =
      R"({"entities":[{"id":"a","name":"A","relations":[{"predicate":"p","target":"b"}]}]})";
  EXPECT_EQ(gq_graph_load(dangling.data(), dangling.size(), &g, diags.d), GQ_ERR_IO);
  EXPECT_EQ(diags.first(), "E_DANGLING_TARGET");

  gq_mapping* m = nullptr;
  std::string cfg = R"({"bogus":1})";
  EXPECT_EQ(gq_mapping_load(cfg.data(), cfg.size(), &m, nullptr), GQ_ERR_IO);
  EXPECT_EQ(m, nullptr);
}

TEST(CApi, CodeStatus) {
  EXPECT_EQ(gq_code_status("E_UNEXPECTED_TOKEN"), GQ_ERR_PARSE);
  EXPECT_EQ(gq_code_status("E_BAD_COUNT"), GQ_ERR_VALIDATE);
  EXPECT_EQ(gq_code_status("E_OUT_OF_DIALECT"), GQ_ERR_UNSUPPORTED);
  EXPECT_EQ(gq_code_status("E_DUP_ID"), GQ_ERR_IO);
}

TEST(CApi, EvalAndRunKopl) {
  auto text = graphq::test::read_file("kubrick.json");
  gq_graph* g = nullptr;
  ASSERT_EQ(gq_graph_load(text.data(), text.size(), &g, nullptr), GQ_OK);
  EXPECT_EQ(gq_graph_size(g), 5u);

  std::string ir = "how many <C> film </C>";
  gq_query* q = nullptr;
  ASSERT_EQ(gq_query_parse(GQ_DIALECT_IR, ir.data(), ir.size(), nullptr, &q, nullptr), GQ_OK);
  char* out = nullptr;
  ASSERT_EQ(gq_eval(q, g, nullptr, GQ_FORMAT_JSON, &out, nullptr), GQ_OK);
  EXPECT_EQ(take(out), R"({"answer":3,"kind":"count"})");

  std::string program = "FindAll() . FilterConcept(film) . Count()";
  ASSERT_EQ(gq_run_kopl(program.data(), program.size(), g, nullptr, GQ_FORMAT_TEXT, &out, nullptr),
            GQ_OK);
  EXPECT_EQ(take(out), "3");
  gq_query_free(q);
  gq_graph_free(g);
}

TEST(CApi, GenerateIsDeterministic) {
  gq_query* a = gq_query_generate(7, 4);
  gq_query* b = gq_query_generate(7, 4);
  char* sa = nullptr;
  char* sb = nullptr;
  ASSERT_EQ(gq_query_emit(a, GQ_DIALECT_JSON, nullptr, &sa, nullptr), GQ_OK);
  ASSERT_EQ(gq_query_emit(b, GQ_DIALECT_JSON, nullptr, &sb, nullptr), GQ_OK);
  EXPECT_EQ(take(sa), take(sb));
  gq_query_free(a);
  gq_query_free(b);
}

TEST(CApi, NullArguments) {
  EXPECT_EQ(gq_query_parse(GQ_DIALECT_IR, "x", 1, nullptr, nullptr, nullptr), GQ_ERR_ARGUMENT);
  EXPECT_EQ(gq_query_emit(nullptr, GQ_DIALECT_IR, nullptr, nullptr, nullptr), GQ_ERR_ARGUMENT);
  EXPECT_EQ(gq_diagnostics_count(nullptr), 0u);
  EXPECT_EQ(gq_diagnostic_code(nullptr, 0), nullptr);
  gq_dialect d;
  EXPECT_EQ(gq_dialect_from_name("cobol", &d), GQ_ERR_ARGUMENT);
  EXPECT_EQ(gq_dialect_from_name("lambda_dcs", &d), GQ_OK);
  EXPECT_EQ(d, GQ_DIALECT_LAMBDA_DCS);
}
