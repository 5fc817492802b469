#pragma once

#include <optional>
#include <string>
#include <vector>

#include "balsa/graph.hpp"

namespace balsa {

// Evidence that g cannot be split into k spanning trees: either the edge
// count is off, or a vertex set X induces more than k*(|X|-1) edges.
struct Deficiency {
  std::string reason;
  std::vector<VertexId> vertex_set;  // X, empty for edge-count mismatches
  long long edges_inside = 0;        // |E(G[X])|
  long long capacity = 0;            // k * (|X| - 1)
};

struct PackingResult {
  std::optional<Factorization> factorization;
  std::optional<Deficiency> deficiency;
  bool ok() const { return factorization.has_value(); }
};

// Splits E(g) into k spanning trees when possible. Deterministic: edges are
// inserted in id order and augmenting steps break ties toward smaller edge
// ids, so identical inputs give identical factorizations.
PackingResult pack(const MultiGraph& g, int k);

bool is_k_multiple_tree(const MultiGraph& g, int k);

}  // namespace balsa
