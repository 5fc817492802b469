#include <doctest.h>

#include "balsa/errors.hpp"
#include "balsa/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace balsa;

TEST_CASE("graph round trip is byte identical") {
  std::string text = "3 4 2\n0 1\n0 2\n1 2\n0 1\n";
  std::istringstream in(text);
  ParsedGraph pg = read_graph(in);
  CHECK(pg.k == 2);
  CHECK(pg.graph.vertex_count() == 3);
  CHECK(pg.graph.edge_count() == 4);
  CHECK(graph_to_string(pg.graph, pg.k) == text);
}

TEST_CASE("graph parser skips comments and blank lines") {
  std::istringstream in(
      "# header comment\n"
      "\n"
      "2 2 2\n"
      "0 1\n"
      "# middle comment\n"
      "0 1\n"
      "\n");
  ParsedGraph pg = read_graph(in);
  CHECK(pg.graph.edge_count() == 2);
  CHECK(pg.graph.degree(0) == 2);
}

TEST_CASE("graph parser rejects malformed input") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_graph(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("2 1\n0 1\n"), ParseError);         // missing k
  CHECK_THROWS_AS(parse("2 2 2\n0 1\n"), ParseError);       // missing edge
  CHECK_THROWS_AS(parse("2 1 2\n0 1 9\n"), ParseError);     // trailing token
  CHECK_THROWS_AS(parse("2 1 0\n0 1\n"), ParseError);       // bad k
  CHECK_THROWS_AS(parse("2 -1 2\n"), ParseError);           // bad m
  CHECK_THROWS_AS(parse("2 1 2\nx y\n"), ParseError);       // non numeric
  CHECK_THROWS_AS(parse("2 1 2\n0 0\n"), SelfLoopError);
  CHECK_THROWS_AS(parse("2 1 2\n0 5\n"), VertexOutOfRangeError);
}

TEST_CASE("factorization round trip") {
  Factorization f{2, {0, 1, 1, 0}};
  std::string text = factorization_to_string(f);
  std::istringstream in(text);
  Factorization back = read_factorization(in, 4, 2);
  CHECK(back.k == f.k);
  CHECK(back.assignment == f.assignment);
  CHECK(factorization_to_string(back) == text);
}

TEST_CASE("factorization parser validates ids and range") {
  auto parse = [](const std::string& s, int m, std::optional<int> k) {
    std::istringstream in(s);
    return read_factorization(in, m, k);
  };
  // ids out of order
  CHECK_THROWS_AS(parse("1 0\n0 1\n", 2, 2), ParseError);
  // too few rows
  CHECK_THROWS_AS(parse("0 0\n", 2, 2), ParseError);
  // tree index out of range when k given
  CHECK_THROWS_AS(parse("0 0\n1 2\n", 2, 2), ParseError);
  // k inferred from indices when absent
  Factorization f = parse("0 0\n1 3\n", 2, std::nullopt);
  CHECK(f.k == 4);
}

TEST_CASE("persist_instance writes a parseable file") {
  MultiGraph g = MultiGraph::build(2, {{0, 1}, {0, 1}});
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "balsa-io-test";
  fs::remove_all(dir);

  std::string path = persist_instance(g, 2, dir.string(), "unit");
  REQUIRE_FALSE(path.empty());
  CHECK(fs::exists(path));
  CHECK(fs::path(path).filename().string().rfind("unit-", 0) == 0);

  ParsedGraph back = read_graph_file(path);
  CHECK(back.k == 2);
  CHECK(back.graph.edge_count() == 2);
  CHECK(graph_to_string(back.graph, back.k) == graph_to_string(g, 2));

  // same graph, same name: idempotent
  CHECK(persist_instance(g, 2, dir.string(), "unit") == path);
  CHECK(persist_instance(g, 2, "", "unit").empty());
  fs::remove_all(dir);
}
