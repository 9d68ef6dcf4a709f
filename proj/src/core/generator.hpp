#pragma once

#include <cstdint>
#include <functional>
#include <iterator>
#include <random>

#include "ast.hpp"
#include "graph.hpp"

namespace graphq {

// Deterministic across platforms: only raw mt19937_64 output is used, never
// the standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(engine_() % n) : 0; }
  bool chance(unsigned percent) { return below(100) < percent; }
  template <typename C>
  const auto& pick(const C& items) {
    return items[below(std::size(items))];
  }

 private:
  std::mt19937_64 engine_;
};

// Well-formed random query of depth <= max_depth (at least 1). Names and
// labels come from the same pools as gen_graph, so answers are non-trivial.
QueryAst gen_ast(Rng& rng, int max_depth);

// Random graph with 1..max_entities entities. Ids are "Q<n>".
Graph gen_graph(Rng& rng, int max_entities);

// Visits every query of depth <= 2 over a small fixed vocabulary: one name
// per role and one literal per value type, all operators and options.
void enumerate_depth2(const std::function<void(const QueryAst&)>& visit);

}  // namespace graphq
