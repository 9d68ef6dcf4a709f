#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generator.hpp"

using namespace graphq;

namespace {

std::vector<std::string> codes(const Diagnostics& d) {
  std::vector<std::string> out;
  for (const auto& x : d) out.push_back(x.code);
  return out;
}

using Codes = std::vector<std::string>;

}  // namespace

TEST(Value, NumberCarriesMagnitudeAndUnit) {
  auto v = make_value(VType::Number, "110 minute");
  ASSERT_TRUE(v.magnitude);
  EXPECT_EQ(v.magnitude->to_string(), "110");
  EXPECT_EQ(v.unit, "minute");
  EXPECT_EQ(v.magnitude_text(), "110");
  EXPECT_FALSE(v.year);
  EXPECT_FALSE(v.date);
}

TEST(Value, StringsCarryOnlyRaw) {
  auto v = make_value(VType::String, "110");
  EXPECT_FALSE(v.magnitude);
  EXPECT_EQ(v.raw, "110");
}

TEST(Value, RejectsMalformedLiterals) {
  EXPECT_FALSE(parse_value_literal(VType::Date, "2021-02-30").value);
  EXPECT_FALSE(parse_value_literal(VType::Time, "25:00").value);
  EXPECT_FALSE(parse_value_literal(VType::Number, "ten minute").value);
  EXPECT_FALSE(parse_value_literal(VType::Year, "19x0").value);
  EXPECT_TRUE(parse_value_literal(VType::Number, "1.5e6 metre").value);
  EXPECT_TRUE(parse_value_literal(VType::Date, "-44-03-15").value);
}

TEST(Value, ExactDecimalComparison) {
  auto a = make_value(VType::Number, "110 minute");
  auto b = make_value(VType::Number, "110.0 minute");
  EXPECT_TRUE(compare_values(a, Cop::Is, b));
  EXPECT_EQ(value_key(a), value_key(b));
  EXPECT_TRUE(compare_values(make_value(VType::Number, "0.3"), Cop::Is,
                             make_value(VType::Number, "0.30")));
  EXPECT_FALSE(compare_values(make_value(VType::Number, "0.1"), Cop::Is,
                              make_value(VType::Number, "0.10000000000000001")));
}

TEST(Value, UnitsMustMatch) {
  auto a = make_value(VType::Number, "110 minute");
  auto b = make_value(VType::Number, "110 metre");
  for (Cop c : kAllCops) EXPECT_FALSE(compare_values(a, c, b));
}

TEST(Value, YearsWidenAgainstDates) {
  auto y = make_value(VType::Year, "1990");
  EXPECT_TRUE(compare_values(make_value(VType::Date, "1990-06-01"), Cop::Is, y));
  EXPECT_TRUE(compare_values(make_value(VType::Date, "1991-01-01"), Cop::LargerThan, y));
}

TEST(Validate, NewscastQueryIsClean) { EXPECT_TRUE(validate(test::newscast_ast()).empty()); }

TEST(Validate, OrderingOnString) {
  QueryAst q{EntityQuery{build::constrained(
      build::entity("a"),
      build::attr_cmp("duration", Cop::LargerThan, make_value(VType::String, "x")))}};
  EXPECT_EQ(codes(validate(q)), Codes{"E_TYPE_MISMATCH"});
}

TEST(Validate, AggregateOverString) {
  QueryAst q{ValueQuery{ValueExpr{Aggregate{Vop::Sum, ValueExpr{Lit{make_value(VType::String, "a")}}}}}};
  EXPECT_EQ(codes(validate(q)), Codes{"E_BAD_AGGREGATE"});
}

TEST(Validate, BadCount) {
  auto c = [](const char* raw) {
    return QueryAst{EntityQuery{build::constrained(
        build::entity("a"),
        build::rel("r", Dir::Forward, build::entity("b"),
                   CountCmp{Cop::AtLeast, make_value(VType::Number, raw)}))}};
  };
  EXPECT_TRUE(validate(c("2")).empty());
  EXPECT_EQ(codes(validate(c("2.5"))), Codes{"E_BAD_COUNT"});
  EXPECT_EQ(codes(validate(c("-1"))), Codes{"E_BAD_COUNT"});
  EXPECT_EQ(codes(validate(c("2 minute"))), Codes{"E_BAD_COUNT"});
}

TEST(Validate, EmptyName) {
  EXPECT_EQ(codes(validate(QueryAst{EntityQuery{build::entity("")}})), Codes{"E_EMPTY_NAME"});
}

TEST(Validate, QualifierQueryNeedsFactConstraint) {
  QueryAst q{QualifierQuery{"start time", build::entity("a"),
                            build::attr_sup(Sop::Largest, "height")}};
  EXPECT_EQ(codes(validate(q)), Codes{"E_BAD_QUALIFIER_QUERY"});
}

TEST(Normalize, DropsRedundantWrapper) {
  QueryAst q{EntityQuery{build::group(build::entity("x"))}};
  EXPECT_EQ(normalize(q), (QueryAst{EntityQuery{build::entity("x")}}));
}

TEST(Normalize, DefaultDirectionIsBackward) {
  auto n = normalize(test::capital_ast());
  const auto& rel = std::get<Rel>(std::get<QualifierQuery>(n.node).constraint.node);
  EXPECT_EQ(rel.dir, Dir::Backward);
}

TEST(Normalize, Idempotent) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    auto once = normalize(gen_ast(rng, 4));
    EXPECT_EQ(normalize(once), once);
  }
}

TEST(Depth, LeafQueryIsOne) {
  EXPECT_EQ(depth(QueryAst{EntityQuery{build::entity("x")}}), 1);
  EXPECT_EQ(depth(test::newscast_ast()), 2);
}

TEST(Json, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    auto ast = gen_ast(rng, 4);
    auto back = from_json(to_json(ast));
    ASSERT_TRUE(back) << to_json(ast);
    EXPECT_EQ(*back, ast);
  }
}

TEST(Json, RejectsGarbage) {
  EXPECT_FALSE(from_json("{"));
  EXPECT_FALSE(from_json("{\"query\":\"Nope\"}"));
  EXPECT_FALSE(from_json("[]"));
}

TEST(Generator, Deterministic) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng a(seed), b(seed);
    EXPECT_EQ(gen_ast(a, 4), gen_ast(b, 4));
  }
}

TEST(Generator, DepthOneIsLeafQuery) {
  Rng rng(0);
  EXPECT_EQ(depth(gen_ast(rng, 1)), 1);
}

TEST(Generator, AlwaysValidAndWithinDepth) {
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    for (int d = 1; d <= 4; ++d) {
      Rng rng(seed);
      auto q = gen_ast(rng, d);
      EXPECT_TRUE(validate(q).empty()) << seed;
      EXPECT_LE(depth(q), d) << seed;
    }
  }
}

TEST(Generator, CoversEveryVariant) {
  std::set<std::string> seen;
  std::function<void(const EntitySetExpr&)> walk_set;
  std::function<void(const Constraint&)> walk_c = [&](const Constraint& c) {
    seen.insert(std::string(variant_name(c)));
    if (auto* r = std::get_if<Rel>(&c.node)) walk_set(*r->target);
    if (auto* r = std::get_if<RelSup>(&c.node)) walk_set(*r->target);
  };
  walk_set = [&](const EntitySetExpr& e) {
    seen.insert(std::string(variant_name(e)));
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Typed> || std::is_same_v<T, Group>) walk_set(*x.inner);
          if constexpr (std::is_same_v<T, Combine>) {
            walk_set(*x.left);
            walk_set(*x.right);
          }
          if constexpr (std::is_same_v<T, Constrained>) {
            walk_set(*x.inner);
            walk_c(x.constraint);
          }
        },
        e.node);
  };
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng(seed);
    auto q = gen_ast(rng, 4);
    seen.insert(std::string(variant_name(q)));
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (requires { x.entityset; }) walk_set(x.entityset);
          if constexpr (requires { x.constraint; }) walk_c(x.constraint);
          if constexpr (std::is_same_v<T, RelationQuery>) {
            walk_set(x.source);
            walk_set(x.target);
          }
        },
        q.node);
  }
  for (auto name : {"EntityQuery", "AttributeQuery", "RelationQuery", "QualifierQuery",
                    "CountQuery", "VerifyQuery", "ValueQuery", "SuperlativeQuery", "AttrCmp",
                    "AttrSup", "Rel", "RelSup", "Entity", "Concept", "Typed", "Combine",
                    "Constrained", "Group"})
    EXPECT_TRUE(seen.count(name)) << name;
}
