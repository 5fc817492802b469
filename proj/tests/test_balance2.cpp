#include <doctest.h>

#include "balsa/balance2.hpp"
#include "balsa/errors.hpp"
#include "balsa/graph.hpp"
#include "balsa/oracle.hpp"
#include "balsa/packing.hpp"
#include "balsa/rational.hpp"

#include <vector>

using namespace balsa;

namespace {

MultiGraph k4() {
  return MultiGraph::build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

// ids: a=0 (xy), b=1 (xz), c=2 (yz), d=3 (xy')
MultiGraph triangle_plus_parallel() {
  return MultiGraph::build(3, {{0, 1}, {0, 2}, {1, 2}, {0, 1}});
}

// Hub u=0 with a doubled edge to v1=1 and single edges to v2..v8 (2..8),
// plus the path v1-v2-...-v8. T0 is the star at u, T1 the path through v1.
struct StarPath {
  MultiGraph g;
  Factorization f;
};

StarPath star_path() {
  std::vector<std::pair<int, int>> ends;
  std::vector<int> asg;
  ends.push_back({0, 1});  // star edge to v1
  asg.push_back(0);
  for (int i = 2; i <= 8; ++i) {
    ends.push_back({0, i});
    asg.push_back(0);
  }
  ends.push_back({0, 1});  // the path enters v1 from u
  asg.push_back(1);
  for (int i = 1; i < 8; ++i) {
    ends.push_back({i, i + 1});
    asg.push_back(1);
  }
  return {MultiGraph::build(9, ends), Factorization{2, asg}};
}

Factorization packed(const MultiGraph& g) {
  PackingResult res = pack(g, 2);
  REQUIRE(res.ok());
  return *res.factorization;
}

}  // namespace

TEST_CASE("vertex classification") {
  StarPath sp = star_path();
  REQUIRE(verify_factorization(sp.g, sp.f).valid());

  VertexClass u = classify(sp.g, sp.f, 0);
  CHECK(u.degree == 9);
  CHECK(u.big);
  CHECK_FALSE(u.critical);  // its 3-neighbors are 7, not matching 1 + 7 shape

  // v1 sees the hub through two parallel edges: two big-edges at a
  // 3-vertex, which is the poor profile.
  VertexClass v1 = classify(sp.g, sp.f, 1);
  CHECK(v1.degree == 3);
  CHECK(v1.poor);
  CHECK_FALSE(v1.rich);

  VertexClass v2 = classify(sp.g, sp.f, 2);
  CHECK(v2.degree == 3);
  CHECK_FALSE(v2.poor);  // one big-edge only
  CHECK_FALSE(v2.rich);

  VertexClass v8 = classify(sp.g, sp.f, 8);
  CHECK(v8.degree == 2);
  CHECK_FALSE(v8.big);

  MultiGraph g4 = k4();
  Factorization f4 = packed(g4);
  for (VertexId v = 0; v < 4; ++v) {
    VertexClass c = classify(g4, f4, v);
    CHECK(c.degree == 3);
    CHECK_FALSE(c.big);
    CHECK_FALSE(c.rich);
    CHECK_FALSE(c.poor);
  }
}

TEST_CASE("find_reduction priorities") {
  // Parallel pairs beat everything.
  MultiGraph dp = MultiGraph::build(3, {{0, 1}, {0, 1}, {1, 2}, {1, 2}});
  auto c1 = find_reduction(dp, packed(dp));
  REQUIRE(c1);
  CHECK(c1->tag == ReductionTag::ParallelTwoVertex);
  CHECK(c1->vertices == std::vector<VertexId>{0, 1});
  CHECK(c1->edges == std::vector<EdgeId>{0, 1});

  // 2-vertex z=2 with two distinct small neighbors; x=0 is the smaller.
  MultiGraph tp = triangle_plus_parallel();
  auto c2 = find_reduction(tp, packed(tp));
  REQUIRE(c2);
  CHECK(c2->tag == ReductionTag::TwoVertexSmallNeighbor);
  CHECK(c2->vertices == std::vector<VertexId>{2, 0, 1});
  CHECK(c2->edges == std::vector<EdgeId>{1, 2});

  // No big vertex, minimum degree 3: nothing to reduce.
  CHECK_FALSE(find_reduction(k4(), packed(k4())).has_value());
}

TEST_CASE("reduce ParallelTwoVertex") {
  MultiGraph dp = MultiGraph::build(3, {{0, 1}, {0, 1}, {1, 2}, {1, 2}});
  ReductionEntry entry = reduce(dp, {ReductionTag::ParallelTwoVertex, {0, 1}, {0, 1}});
  CHECK(entry.reduced.vertex_count() == 2);
  CHECK(entry.reduced.edge_count() == 2);
  CHECK(entry.vertex_map == std::vector<VertexId>{-1, 0, 1});
  CHECK(entry.edge_map == std::vector<EdgeId>{-1, -1, 0, 1});
  CHECK(entry.created.empty());

  // Lift the only two child factorizations.
  for (int t : {0, 1}) {
    Factorization child{2, {t, 1 - t}};
    Factorization up = lift(entry, child);
    CHECK(verify_factorization(dp, up).valid());
    CHECK(balance_report(dp, up).max_imbalance <= 1);
    // role edges land in opposite trees
    CHECK(up.assignment[0] != up.assignment[1]);
  }
}

TEST_CASE("reduce TwoVertexSmallNeighbor") {
  MultiGraph tp = triangle_plus_parallel();
  ReductionEntry entry =
      reduce(tp, {ReductionTag::TwoVertexSmallNeighbor, {2, 0, 1}, {1, 2}});
  CHECK(entry.reduced.vertex_count() == 2);
  CHECK(entry.reduced.edge_count() == 2);  // the two surviving x-y edges

  for (int t : {0, 1}) {
    Factorization child{2, {t, 1 - t}};
    Factorization up = lift(entry, child);
    CHECK(verify_factorization(tp, up).valid());
    CHECK(balance_report(tp, up).max_imbalance == 1);
  }
}

TEST_CASE("reduce rejects absent configurations") {
  MultiGraph g = k4();
  CHECK_THROWS_AS(reduce(g, {ReductionTag::ParallelTwoVertex, {0, 1}, {0, 1}}),
                  CaseNotPresentError);
  CHECK_THROWS_AS(reduce(g, {ReductionTag::TwoVertexSmallNeighbor, {0, 1, 2}, {0, 1}}),
                  CaseNotPresentError);
  MultiGraph tp = triangle_plus_parallel();
  // wrong role edge order
  CHECK_THROWS_AS(reduce(tp, {ReductionTag::TwoVertexSmallNeighbor, {2, 0, 1}, {2, 1}}),
                  CaseNotPresentError);
}

TEST_CASE("lift rejects an out-of-bound child factorization") {
  // Star-path plus a 2-vertex w=9 doubly linked to the hub. Reducing at w
  // leaves the star-path graph as the child; giving the child its natural
  // star/path factorization puts the hub at imbalance 7, past the bound.
  StarPath sp = star_path();
  std::vector<std::pair<int, int>> ends;
  for (EdgeId e = 0; e < sp.g.edge_count(); ++e)
    ends.push_back({sp.g.ends(e).u, sp.g.ends(e).v});
  ends.push_back({0, 9});
  ends.push_back({0, 9});
  MultiGraph parent = MultiGraph::build(10, ends);

  auto c = find_reduction(parent, packed(parent));
  REQUIRE(c);
  CHECK(c->tag == ReductionTag::ParallelTwoVertex);
  CHECK(c->vertices == std::vector<VertexId>{9, 0});

  ReductionEntry entry = reduce(parent, *c);
  CHECK(entry.reduced.edge_count() == sp.g.edge_count());

  Factorization bad = sp.f;  // imbalance 7 at the hub
  CHECK(balance_report(entry.reduced, bad).max_imbalance == 7);
  CHECK_THROWS_AS(lift(entry, bad), ImbalancedInputError);

  Factorization invalid{2, std::vector<int>(entry.reduced.edge_count(), 0)};
  CHECK_THROWS_AS(lift(entry, invalid), ImbalancedInputError);
}

TEST_CASE("local search balances the double star") {
  MultiGraph g =
      MultiGraph::build(4, {{0, 1}, {0, 2}, {0, 3}, {0, 1}, {1, 2}, {1, 3}});
  Factorization f{2, {0, 0, 0, 1, 1, 1}};
  REQUIRE(verify_factorization(g, f).valid());
  CHECK(balance_report(g, f).max_imbalance == 2);

  Factorization out = local_search(g, f, 0);
  CHECK(verify_factorization(g, out).valid());
  CHECK(balance_report(g, out).max_imbalance == 0);
  CHECK(optimal_imbalance(g, 2).optimal == 0);
}

TEST_CASE("local search leaves a within-target factorization alone") {
  MultiGraph g = k4();
  Factorization f{2, {0, 1, 1, 0, 1, 0}};  // path pair, imbalance 1
  Factorization out = local_search(g, f, 1);
  CHECK(out.assignment == f.assignment);
}

TEST_CASE("balance_double_tree certifies small instances") {
  // The double edge reduces once (its 2-vertex has parallel edges) down to
  // a single-vertex kernel.
  MultiGraph de = MultiGraph::build(2, {{0, 1}, {0, 1}});
  Balance2Result r = balance_double_tree(de);
  CHECK(r.report.max_imbalance == 0);
  CHECK(r.reductions == std::vector<ReductionTag>{ReductionTag::ParallelTwoVertex});

  // K4 has no reducible configuration; the packed factorization is already
  // within reach of local search.
  Balance2Result rk4 = balance_double_tree(k4());
  CHECK(rk4.report.max_imbalance == 1);
  CHECK(verify_factorization(k4(), rk4.factorization).valid());
  CHECK(rk4.reductions.empty());

  Balance2Result rtp = balance_double_tree(triangle_plus_parallel());
  CHECK(rtp.report.max_imbalance <= 1);
  CHECK(rtp.reductions ==
        std::vector<ReductionTag>{ReductionTag::TwoVertexSmallNeighbor,
                                  ReductionTag::ParallelTwoVertex});

  StarPath sp = star_path();
  Balance2Result rsp = balance_double_tree(sp.g);
  CHECK(rsp.report.max_imbalance <= 5);
}

TEST_CASE("balance_double_tree refuses non double trees") {
  MultiGraph path3 = MultiGraph::build(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(balance_double_tree(path3), NotADoubleTreeError);
  MultiGraph star = MultiGraph::build(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK_THROWS_AS(balance_double_tree(star), NotADoubleTreeError);
  // right edge count, deficient subset
  MultiGraph dense =
      MultiGraph::build(4, {{0, 1}, {0, 1}, {0, 2}, {0, 2}, {1, 2}, {1, 2}});
  CHECK_THROWS_AS(balance_double_tree(dense), NotADoubleTreeError);
}

TEST_CASE("balance_double_tree on seeded instances") {
  for (uint64_t i = 0; i < 50; ++i) {
    GeneratorSpec spec;
    spec.model = all_models()[i % all_models().size()];
    spec.n = 5 + (int)(i * 3 % 56);
    spec.k = 2;
    spec.seed = 500 + i;
    auto [g, planted] = generate(spec);
    Balance2Result r = balance_double_tree(g);
    CHECK(verify_factorization(g, r.factorization).valid());
    CHECK(r.report.max_imbalance <= 5);
  }
}

TEST_CASE("discharge audit conserves and pinpoints charges") {
  MultiGraph de = MultiGraph::build(2, {{0, 1}, {0, 1}});
  Factorization fde{2, {0, 1}};
  ChargeReport cde = discharge_audit(de, fde);
  CHECK(cde.final_charge == std::vector<Rat>{2, 2});
  CHECK(cde.total == 4);
  CHECK(cde.min_charge == 2);

  MultiGraph g4 = k4();
  ChargeReport c4 = discharge_audit(g4, packed(g4));
  CHECK(c4.total == 12);
  CHECK(c4.min_charge == 3);
  for (const Rat& c : c4.final_charge) CHECK(c == 3);

  // Star-path: the hub sends 1 to the 2-vertex v8, 1/2 to each of v2..v7
  // (3 total), and 1/2 along each parallel edge to the poor 3-vertex v1
  // (1 total), keeping 9 - 5 = 4. v1 ends at 3 + 1 = 4, v2..v7 at 7/2,
  // v8 at 3.
  StarPath sp = star_path();
  ChargeReport csp = discharge_audit(sp.g, sp.f);
  CHECK(csp.final_charge[0] == 4);
  CHECK(csp.final_charge[1] == 4);
  for (int v = 2; v <= 7; ++v) CHECK(csp.final_charge[v] == Rat(7, 2));
  CHECK(csp.final_charge[8] == 3);
  CHECK(csp.total == 32);  // 2m, conserved
  CHECK(csp.min_charge == 3);
  CHECK(csp.min_charge < 4);
}
