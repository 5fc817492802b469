#include <doctest.h>

#include "balsa/balancek.hpp"
#include "balsa/errors.hpp"
#include "balsa/graph.hpp"
#include "balsa/oracle.hpp"
#include "balsa/packing.hpp"
#include "balsa/rational.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace balsa;

TEST_CASE("budget schedule start values") {
  CHECK(feasible_constant(1) == 0);
  CHECK(feasible_constant(2) == Rat(5, 2));
  CHECK(feasible_constant(3) == Rat(25, 3));
  CHECK(feasible_constant(4) == 5);
  CHECK(feasible_constant(5) == 11);
  // even halving: c_8 = c_4 + 5/2, c_16 = c_8 + 5/2
  CHECK(feasible_constant(8) == Rat(15, 2));
  CHECK(feasible_constant(16) == 10);
  CHECK_THROWS_AS(feasible_constant(0), Error);
}

TEST_CASE("budget stays under the logarithmic ceiling") {
  for (int k = 2; k <= 4096; ++k) {
    double ck = rat_to_double(feasible_constant(k));
    CHECK(ck <= 11.0 * std::log2((double)k) + 1e-9);
  }
}

TEST_CASE("envelope recurrence frozen example") {
  // k = 2 inner trees, degree 9, budget c_2 = 5/2.
  Rat ck = feasible_constant(2);
  auto [lo, hi] = envelope_limits(9, 2, ck);
  CHECK(lo == -2);
  CHECK(hi == 8);
  CHECK(envelope_next(Rat(0), 9, 2, ck, false) == Rat(-3, 2));
  CHECK(envelope_next(Rat(9), 9, 2, ck, true) == Rat(33, 4));
}

TEST_CASE("envelope limits are fixed points") {
  for (int k : {1, 2, 3, 5, 8}) {
    Rat ck = feasible_constant(k);
    for (int d : {0, 1, 3, 7, 20, 59}) {
      auto [lo, hi] = envelope_limits(d, k, ck);
      CHECK(envelope_next(lo, d, k, ck, false) == lo);
      CHECK(envelope_next(hi, d, k, ck, true) == hi);
      CHECK(lo <= hi);
    }
  }
}

TEST_CASE("combine_double pairs up the halves") {
  GeneratorSpec spec;
  spec.model = GenModel::UniformRandomTrees;
  spec.n = 20;
  spec.k = 4;
  spec.seed = 9;
  auto [g, planted] = generate(spec);
  auto trees = tree_edge_lists(g, planted);

  std::vector<std::vector<EdgeId>> a = {trees[0], trees[1]};
  std::vector<std::vector<EdgeId>> b = {trees[2], trees[3]};

  // dev_in: worst deviation of any half's tree from that half's even share
  Rat dev_in = 0;
  for (const auto* half : {&a, &b}) {
    std::vector<int> half_deg(g.vertex_count(), 0);
    for (const auto& t : *half)
      for (EdgeId e : t) {
        half_deg[g.ends(e).u]++;
        half_deg[g.ends(e).v]++;
      }
    for (const auto& t : *half) {
      std::vector<int> deg(g.vertex_count(), 0);
      for (EdgeId e : t) {
        deg[g.ends(e).u]++;
        deg[g.ends(e).v]++;
      }
      for (VertexId v = 0; v < g.vertex_count(); ++v) {
        Rat dev = abs(Rat(deg[v]) - Rat(half_deg[v], (long long)half->size()));
        if (dev > dev_in) dev_in = dev;
      }
    }
  }

  Factorization out = combine_double(g, a, b);
  CHECK(out.k == 4);
  CHECK(verify_factorization(g, out).valid());
  BalanceReport rep = balance_report(g, out);
  CHECK(rep.max_deviation <= dev_in + Rat(5, 2));
}

TEST_CASE("combine_double rejects malformed halves") {
  MultiGraph g = MultiGraph::build(2, {{0, 1}, {0, 1}});
  // not a partition: edge 0 on both sides
  CHECK_THROWS_AS(combine_double(g, {{0}}, {{0}}), InvalidHalvesError);
  // size mismatch
  CHECK_THROWS_AS(combine_double(g, {{0}}, {}), InvalidHalvesError);
  // not a spanning tree: edges 0 and 3 are a parallel pair
  MultiGraph g2 = MultiGraph::build(3, {{0, 1}, {1, 2}, {0, 2}, {0, 1}});
  CHECK_THROWS_AS(combine_double(g2, {{0, 3}}, {{1, 2}}), InvalidHalvesError);
}

namespace {

// Star at vertex 0 as tree 0, two parallel hub-to-end paths as trees 1 and
// 2. The hub starts with first-tree degree n-1, far above its window
// (d(hub)/3 + 5), so extraction has real work to do.
std::pair<MultiGraph, Factorization> skewed_triple(int n) {
  std::vector<std::pair<int, int>> ends;
  std::vector<int> asg;
  for (int i = 1; i < n; ++i) {
    ends.push_back({0, i});
    asg.push_back(0);
  }
  for (int t : {1, 2})
    for (int i = 0; i + 1 < n; ++i) {
      ends.push_back({i, i + 1});
      asg.push_back(t);
    }
  return {MultiGraph::build(n, ends), Factorization{3, asg}};
}

}  // namespace

TEST_CASE("extract_first_tree reaches the window") {
  auto [g, planted] = skewed_triple(40);
  REQUIRE(verify_factorization(g, planted).valid());

  BalanceKOptions opts;
  opts.track_envelope = true;
  std::ostringstream log;
  opts.iteration_log = &log;
  ExtractResult res = extract_first_tree(g, 3, planted, opts);
  CHECK(res.iterations >= 1);
  CHECK(verify_factorization(g, res.factorization).valid());

  Rat ck = feasible_constant(2);
  std::vector<int> d0(g.vertex_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (res.factorization.assignment[e] == 0) {
      d0[g.ends(e).u]++;
      d0[g.ends(e).v]++;
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto [lo, hi] = envelope_limits(g.degree(v), 2, ck);
    CHECK(Rat(d0[v]) >= lo);
    CHECK(Rat(d0[v]) <= hi);
  }
  CHECK_FALSE(log.str().empty());
}

TEST_CASE("extract_first_tree enforces the iteration cap") {
  auto [g, planted] = skewed_triple(40);

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "balsa-cap-test";
  fs::remove_all(dir);
  BalanceKOptions opts;
  opts.iteration_cap = 0;
  opts.persist_dir = dir.string();
  try {
    extract_first_tree(g, 3, planted, opts);
    FAIL("expected IterationCapExceededError");
  } catch (const IterationCapExceededError& e) {
    CHECK_FALSE(e.persisted_path.empty());
    CHECK(fs::exists(e.persisted_path));
  }
  fs::remove_all(dir);
}

TEST_CASE("extract_first_tree validates its inputs") {
  MultiGraph g = MultiGraph::build(2, {{0, 1}, {0, 1}});
  Factorization f{2, {0, 1}};
  CHECK_THROWS_AS(extract_first_tree(g, 3, f), InvalidFactorizationError);
  CHECK_THROWS_AS(extract_first_tree(g, 1, f), Error);
}

TEST_CASE("balance_k certified deviations") {
  MultiGraph single = MultiGraph::build(2, {{0, 1}});
  BalanceKResult r1 = balance_k(single, 1);
  CHECK(r1.report.max_deviation == 0);
  CHECK(r1.certified == 0);

  for (int k : {2, 3, 4, 5}) {
    GeneratorSpec spec;
    spec.model = all_models()[k % all_models().size()];
    spec.n = 30;
    spec.k = k;
    spec.seed = 40 + (uint64_t)k;
    auto [g, planted] = generate(spec);
    BalanceKResult r = balance_k(g, k);
    CHECK(verify_factorization(g, r.factorization).valid());
    CHECK(r.factorization.k == k);
    CHECK(r.certified == feasible_constant(k));
    CHECK(r.report.max_deviation <= r.certified);
    // pairwise imbalance is at most twice the deviation
    CHECK(Rat(r.report.max_imbalance) <= 2 * r.certified);
  }
}

TEST_CASE("balance_k refuses graphs that do not split") {
  MultiGraph path3 = MultiGraph::build(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(balance_k(path3, 2), NotKMultipleTreeError);
  MultiGraph k4 = MultiGraph::build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK_THROWS_AS(balance_k(k4, 3), NotKMultipleTreeError);
}
