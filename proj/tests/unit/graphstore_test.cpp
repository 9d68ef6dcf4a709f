#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generator.hpp"

using namespace graphq;

namespace {

std::string first_code(const Result<Graph>& r) { return r ? "" : r.diagnostics().front().code; }

}  // namespace

TEST(LoadGraph, UzbekistanFixture) {
  auto g = test::load_fixture("uzbekistan.json");
  EXPECT_EQ(g.size(), 2u);
  auto u = g.named("Uzbekistan");
  auto t = g.named("Tashkent");
  ASSERT_EQ(u.size(), 1u);
  ASSERT_EQ(t.size(), 1u);
  ASSERT_EQ(g.at(u[0]).relations.size(), 1u);
  EXPECT_EQ(g.target_of(g.at(u[0]).relations[0]), t[0]);
  ASSERT_EQ(g.incoming(t[0]).size(), 1u);
  EXPECT_EQ(g.incoming(t[0])[0].source, u[0]);
  EXPECT_TRUE(g.incoming(u[0]).empty());
}

TEST(LoadGraph, Empty) {
  auto g = load_graph(R"({"entities": []})");
  ASSERT_TRUE(g);
  EXPECT_EQ(g->size(), 0u);
}

TEST(LoadGraph, Errors) {
  EXPECT_EQ(first_code(load_graph(
                R"({"entities":[{"id":"a","name":"A","relations":[{"predicate":"p","target":"zz"}]}]})")),
            "E_DANGLING_TARGET");
  EXPECT_EQ(first_code(load_graph(
                R"({"entities":[{"id":"a","name":"A"},{"id":"a","name":"B"}]})")),
            "E_DUP_ID");
  EXPECT_EQ(first_code(load_graph(
                R"({"entities":[{"id":"a","name":"A","attributes":[{"key":"d","type":"date","value":"2021-02-30"}]}]})")),
            "E_BAD_VALUE");
  EXPECT_EQ(first_code(load_graph("{not json")), "E_BAD_JSON");
  EXPECT_EQ(first_code(load_graph(R"({"entities":[{"id":"a","name":"A","colour":"red"}]})")),
            "E_BAD_JSON");
}

TEST(LoadGraph, NumericValuesMayBeJsonNumbers) {
  auto g = load_graph(
      R"({"entities":[{"id":"a","name":"A","attributes":[{"key":"height","type":"number","value":1.5,"unit":"metre"}]}]})");
  ASSERT_TRUE(g) << first_code(g);
  EXPECT_EQ(g->at(0).attributes[0].value.magnitude->to_string(), "1.5");
}

TEST(ValidateGraph, LoadedGraphsAreClean) {
  for (auto name : {"uzbekistan.json", "kubrick.json", "newscasts.json"})
    EXPECT_TRUE(validate_graph(test::load_fixture(name)).empty()) << name;
}

TEST(ValidateGraph, CatchesUncheckedParts) {
  GraphEntity a{"a", "A", {}, {}, {{"p", "missing", {}}}};
  GraphEntity b{"a", "B", {}, {}, {}};
  auto d = validate_graph(Graph::from_parts({a, b}));
  std::set<std::string> codes;
  for (const auto& x : d) codes.insert(x.code);
  EXPECT_TRUE(codes.count("E_DUP_ID"));
  EXPECT_TRUE(codes.count("E_DANGLING_TARGET"));
}

TEST(ValidateGraph, JsonRoundTrip) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    Graph g = gen_graph(rng, 50);
    EXPECT_TRUE(validate_graph(g).empty());
    auto back = load_graph(graph_to_json(g));
    ASSERT_TRUE(back) << first_code(back);
    EXPECT_EQ(graph_to_json(*back), graph_to_json(g));
  }
}
