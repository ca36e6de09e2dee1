#include <catch2/catch_amalgamated.hpp>

#include "symanzik/corpus.hpp"
#include "symanzik/graph_io.hpp"

using namespace symanzik;

namespace {

Json c3_doc() {
  return Json{{"version", 1},
              {"vertices", {"a", "b", "c"}},
              {"edges",
               {{{"id", 0}, {"tail", "a"}, {"head", "b"}},
                {{"id", 1}, {"tail", "b"}, {"head", "c"}},
                {{"id", 2}, {"tail", "c"}, {"head", "a"}}}},
              {"momenta", {{"dim", 1}, {"p", {{"a", {"1"}}, {"b", {"1"}}, {"c", {"-2"}}}}}},
              {"y", {"1", "1/2", "3"}}};
}

}  // namespace

TEST_CASE("rational parsing") {
  REQUIRE(parse_rat("3/4") == make_rat(3, 4));
  REQUIRE(parse_rat("-12/5") == make_rat(-12, 5));
  REQUIRE(parse_rat("7") == Rat(7));
  REQUIRE(parse_rat("2/6") == make_rat(1, 3));  // canonicalized
  REQUIRE_THROWS_AS(parse_rat("1.5"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_rat("x"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_rat(""), std::invalid_argument);
}

TEST_CASE("graph document: load and realize") {
  LoadedGraph lg = realize_graph_document(parse_graph_document(c3_doc()));
  REQUIRE(lg.graph.n() == 3);
  REQUIRE(lg.graph.m() == 3);
  REQUIRE(lg.graph.edge(2).tail == 2);
  REQUIRE(lg.graph.edge(2).head == 0);
  REQUIRE(lg.momenta);
  REQUIRE(lg.momenta->p[2][0] == Rat(-2));
  REQUIRE(lg.y);
  REQUIRE((*lg.y)[1] == make_rat(1, 2));
}

TEST_CASE("graph document: validation failures") {
  Json dup = c3_doc();
  dup["vertices"] = {"a", "a", "c"};
  REQUIRE_THROWS_AS(parse_graph_document(dup), std::invalid_argument);

  Json bad_ids = c3_doc();
  bad_ids["edges"][1]["id"] = 5;
  REQUIRE_THROWS_AS(parse_graph_document(bad_ids), std::invalid_argument);

  Json not_conserved = c3_doc();
  not_conserved["momenta"]["p"]["c"] = {"1"};
  REQUIRE_THROWS_WITH(realize_graph_document(parse_graph_document(not_conserved)), "momentum not conserved");

  Json unknown_label = c3_doc();
  unknown_label["edges"][0]["tail"] = "zz";
  REQUIRE_THROWS_AS(realize_graph_document(parse_graph_document(unknown_label)), std::invalid_argument);

  Json bad_version = c3_doc();
  bad_version["version"] = 9;
  REQUIRE_THROWS_AS(parse_graph_document(bad_version), std::invalid_argument);
}

TEST_CASE("normalization is idempotent") {
  // unordered edge list normalizes to id order and stays fixed afterwards
  Json shuffled = c3_doc();
  shuffled["edges"] = {{{"id", 2}, {"tail", "c"}, {"head", "a"}},
                       {{"id", 0}, {"tail", "a"}, {"head", "b"}},
                       {{"id", 1}, {"tail", "b"}, {"head", "c"}}};
  Json once = normalize_graph_document(shuffled);
  Json twice = normalize_graph_document(once);
  REQUIRE(once.dump() == twice.dump());
  REQUIRE(once["edges"][0]["id"] == 0);
}

TEST_CASE("momenta default form is the identity") {
  LoadedGraph lg = realize_graph_document(parse_graph_document(c3_doc()));
  REQUIRE(lg.momenta->form == Matrix::identity(1));

  Json mink = c3_doc();
  mink["momenta"] = {{"dim", 2},
                     {"form", Json::array({Json::array({"1", "0"}), Json::array({"0", "-1"})})},
                     {"p", {{"a", {"1", "1"}}, {"b", {"1", "1"}}, {"c", {"-2", "-2"}}}}};
  LoadedGraph lg2 = realize_graph_document(parse_graph_document(mink));
  REQUIRE(lg2.momenta->D == 2);
  REQUIRE(lg2.momenta->form(1, 1) == Rat(-1));
}

TEST_CASE("polynomial serialization is deterministic") {
  SymanzikPolynomial psi = psi_enum(graphs::cycle(3));
  Json a = polynomial_to_json(psi);
  Json b = polynomial_to_json(psi_enum(graphs::cycle(3)));
  REQUIRE(a.dump() == b.dump());
  REQUIRE(a["degree"] == 1);
  REQUIRE(a["terms"].size() == 3);
}
