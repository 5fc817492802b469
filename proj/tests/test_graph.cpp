#include <doctest.h>

#include "balsa/graph.hpp"
#include "balsa/errors.hpp"
#include "balsa/rational.hpp"

#include <algorithm>
#include <vector>

using namespace balsa;

namespace {

// Triangle on {x=0, y=1, z=2} plus a second x-y edge.
// Edge ids: 0 = xy, 1 = xz, 2 = yz, 3 = xy'.
MultiGraph triangle_plus_parallel() {
  return MultiGraph::build(3, {{0, 1}, {0, 2}, {1, 2}, {0, 1}});
}

MultiGraph k4() {
  return MultiGraph::build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

}  // namespace

TEST_CASE("build rejects bad edges") {
  CHECK_THROWS_AS(MultiGraph::build(2, {{0, 0}}), SelfLoopError);
  CHECK_THROWS_AS(MultiGraph::build(2, {{0, 2}}), VertexOutOfRangeError);
  CHECK_THROWS_AS(MultiGraph::build(-1, {}), VertexOutOfRangeError);
  CHECK_THROWS_AS(MultiGraph::build(2, {{-1, 1}}), VertexOutOfRangeError);
}

TEST_CASE("degrees and incidence") {
  MultiGraph g = triangle_plus_parallel();
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 4);
  CHECK(g.degree(0) == 3);
  CHECK(g.degree(1) == 3);
  CHECK(g.degree(2) == 2);
  CHECK(g.incident(2) == std::vector<EdgeId>{1, 2});
  CHECK(g.other_end(3, 0) == 1);
  CHECK(g.touches(3, 1));
  CHECK_FALSE(g.touches(3, 2));
}

TEST_CASE("parallel edges keep distinct ids") {
  MultiGraph g = MultiGraph::build(2, {{0, 1}, {0, 1}});
  CHECK(g.edge_count() == 2);
  CHECK(g.incident(0) == std::vector<EdgeId>{0, 1});
}

TEST_CASE("spanning tree recognition") {
  MultiGraph g = k4();
  CHECK(is_spanning_tree(g, {0, 3, 5}));        // path 0-1-2-3
  CHECK(is_spanning_tree(g, {0, 1, 2}));        // star at 0
  CHECK_FALSE(is_spanning_tree(g, {0, 1, 3}));  // triangle 0-1-2
  CHECK_FALSE(is_spanning_tree(g, {0, 1}));     // too few
}

TEST_CASE("verify_factorization catches defects") {
  MultiGraph g = k4();

  Factorization ok{2, {0, 1, 1, 0, 1, 0}};
  CHECK(verify_factorization(g, ok).valid());

  Factorization bad_index{2, {0, 1, 1, 0, 1, 2}};
  CHECK_FALSE(verify_factorization(g, bad_index).valid());

  // a malformed assignment length is an error, not a defect report
  Factorization wrong_size{2, {0, 1, 1, 0, 1}};
  CHECK_THROWS_AS(verify_factorization(g, wrong_size), InvalidFactorizationError);

  // Tree 0 is a triangle, tree 1 misses vertex 0.
  Factorization cyclic{2, {0, 0, 1, 0, 1, 1}};
  CHECK_FALSE(verify_factorization(g, cyclic).valid());
}

TEST_CASE("balance report on the doubled triangle edge") {
  MultiGraph g = triangle_plus_parallel();
  Factorization f{2, {0, 0, 1, 1}};  // T0 = {xy, xz}, T1 = {yz, xy'}
  CHECK(verify_factorization(g, f).valid());

  BalanceReport r = balance_report(g, f);
  CHECK(r.max_imbalance == 1);
  CHECK(r.max_deviation == Rat(1, 2));
  CHECK(r.tree_degrees[0][0] == 2);  // x in tree 0
  CHECK(r.tree_degrees[1][0] == 1);  // x in tree 1
}

TEST_CASE("balance report on the K4 path pair") {
  MultiGraph g = k4();
  // T0 = {01, 12, 23}, T1 = {02, 03, 13}: two Hamiltonian paths.
  Factorization f{2, {0, 1, 1, 0, 1, 0}};
  BalanceReport r = balance_report(g, f);
  CHECK(r.max_imbalance == 1);
  CHECK(r.max_deviation == Rat(1, 2));
}

TEST_CASE("balance report refuses invalid input") {
  MultiGraph g = k4();
  Factorization bad{2, {0, 0, 1, 0, 1, 1}};
  CHECK_THROWS_AS(balance_report(g, bad), InvalidFactorizationError);
}

TEST_CASE("fundamental cut and cycle") {
  // Double star on {u=0, w=1, x=2, y=3}:
  // edges uw=0, ux=1, uy=2, uw'=3, wx=4, wy=5.
  MultiGraph g =
      MultiGraph::build(4, {{0, 1}, {0, 2}, {0, 3}, {0, 1}, {1, 2}, {1, 3}});
  std::vector<EdgeId> star_u = {0, 1, 2};

  CHECK(fundamental_cut(g, star_u, 1) == std::vector<EdgeId>{1, 4});
  CHECK(fundamental_cut(g, star_u, 0) == std::vector<EdgeId>{0, 3, 4, 5});
  CHECK(fundamental_cycle(g, star_u, 4) == std::vector<EdgeId>{0, 1, 4});
  CHECK(fundamental_cycle(g, star_u, 3) == std::vector<EdgeId>{0, 3});

  CHECK_THROWS_AS(fundamental_cut(g, star_u, 4), EdgeNotInTreeError);
  CHECK_THROWS_AS(fundamental_cycle(g, star_u, 1), EdgeInTreeError);
}

TEST_CASE("single vertex graph") {
  MultiGraph g = MultiGraph::build(1, {});
  CHECK(g.vertex_count() == 1);
  Factorization f{2, {}};
  CHECK(verify_factorization(g, f).valid());
  BalanceReport r = balance_report(g, f);
  CHECK(r.max_imbalance == 0);
  CHECK(r.max_deviation == 0);
}
