#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "balsa/graph.hpp"

namespace balsa {

enum class GenModel { UniformRandomTrees, StarHeavy, PathHeavy, ParallelRich };

std::optional<GenModel> model_from_name(const std::string& name);
std::string model_name(GenModel model);
const std::vector<GenModel>& all_models();

struct GeneratorSpec {
  GenModel model = GenModel::UniformRandomTrees;
  int n = 1;
  int k = 2;
  uint64_t seed = 0;
};

// Union of k random spanning trees on the same vertex set; the planted
// factorization assigns each tree its own index. Deterministic in the seed.
std::pair<MultiGraph, Factorization> generate(const GeneratorSpec& spec);

struct EnumerateOptions {
  int max_edges = 16;
};

// Yields every valid ordered k-factorization exactly once. The callback
// returns false to stop early. Throws TooLargeError above the edge cap.
void enumerate_factorizations(const MultiGraph& g, int k,
                              const std::function<bool(const Factorization&)>& visit,
                              const EnumerateOptions& opts = {});

struct OracleResult {
  // Minimum over all valid k-factorizations of the max pairwise imbalance;
  // -1 when no factorization exists.
  int optimal = -1;
  std::optional<Factorization> witness;
  long long examined = 0;
};

// Exhaustive minimum. For k = 2, edge 0's tree is fixed (tree relabeling
// does not change imbalance), halving the work; `examined` reflects that.
OracleResult optimal_imbalance(const MultiGraph& g, int k, const EnumerateOptions& opts = {});

struct SearchOptions {
  int target = 2;
  int max_vertices = 8;
  int instances = 200;
  uint64_t seed = 1;
};

struct SearchHit {
  MultiGraph graph;
  int optimal = 0;
};

// Random small double trees (plus a few fixed candidates) whose exact
// optimal imbalance reaches the target. An empty result is a legitimate
// negative outcome for the searched range.
std::vector<SearchHit> search_lower_bound(const SearchOptions& opts);

}  // namespace balsa
