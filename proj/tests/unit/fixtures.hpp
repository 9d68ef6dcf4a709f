#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "ast.hpp"
#include "graph.hpp"

#ifndef GRAPHQ_TEST_DATA
#define GRAPHQ_TEST_DATA "tests/data"
#endif

namespace graphq::test {

inline std::string read_file(const std::string& name) {
  std::ifstream f(std::string(GRAPHQ_TEST_DATA) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Graph load_fixture(const std::string& name) {
  auto g = load_graph(read_file(name));
  if (!g) throw std::runtime_error("fixture " + name + " failed to load");
  return *g;
}

inline const char* kNewscastIr =
    "which one has the smallest <A> duration </A> among <ES> <C> newscast </C> whose <A> "
    "duration </A> is number <V> 110 minute </V> </ES>";
inline const char* kSpiderwickIr =
    "what is the relation from <ES> <E> The Spiderwick Chronicles </E> (<ES> ones that <R> genre "
    "</R> backward to <E> kid film </E> </ES>) </ES> to <E> John Sayles </E>";
inline const char* kCapitalIr =
    "what is the qualifier <Q> start time </Q> of <E> Uzbekistan </E> that <R> capital </R> to "
    "<E> Tashkent </E>";
inline const char* kEducatedAtIr =
    "what is the qualifier <Q> start time </Q> of <E> Joseph L. Mankiewicz </E> that <R> "
    "educated at </R> to <E> Columbia University </E>";

inline const char* kNewscastSparql =
    "SELECT ?e WHERE { ?e instance_of ?c . ?c name \"newscast\" . ?e duration ?pv_1 . ?pv_1 unit "
    "\"minute\" . ?pv_1 value \"110\"^^xsd:double . ?e duration ?pv . ?pv value ?v } ORDER BY ?v "
    "LIMIT 1";
inline const char* kCapitalSparql =
    "SELECT DISTINCT ?qpv WHERE { ?e_1 name \"Uzbekistan\" . ?e_2 name \"Tashkent\" . ?e_1 "
    "capital ?e_2 . [ fact_h ?e_1 ; fact_r capital ; fact_t ?e_2 ] start_time ?qpv }";

inline QueryAst newscast_ast() {
  return QueryAst{SuperlativeQuery{
      Sop::Smallest, "duration",
      build::constrained(build::concept_set("newscast"),
                         build::attr_cmp("duration", Cop::Is,
                                         make_value(VType::Number, "110 minute")))}};
}

inline QueryAst capital_ast() {
  return QueryAst{QualifierQuery{"start time", build::entity("Uzbekistan"),
                                 build::rel("capital", std::nullopt, build::entity("Tashkent"))}};
}

}  // namespace graphq::test
