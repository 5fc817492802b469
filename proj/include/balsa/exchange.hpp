#pragma once

#include <utility>
#include <vector>

#include "balsa/graph.hpp"

namespace balsa {

// Move edge e out of tree i and edge f from tree j into tree i.
struct SwapMove {
  int i = 0, j = 0;
  EdgeId e = -1;  // in tree i
  EdgeId f = -1;  // in tree j
};

// All edges f of tree j such that (tree_i - e + f, tree_j - f + e) are both
// spanning trees, ids increasing. `trees` as produced by tree_edge_lists.
std::vector<EdgeId> exchange_partners(const MultiGraph& g,
                                      const std::vector<std::vector<EdgeId>>& trees, int i, int j,
                                      EdgeId e);

// The smallest-id exchange partner of e. Such an edge always exists: the
// tree-j path between e's endpoints must cross the cut left by removing e
// from tree i. Throws InvalidFactorizationError / EdgeNotInTreeError.
EdgeId tree_mapping_edge(const MultiGraph& g, const Factorization& f, int i, int j, EdgeId e);

// Applies a swap and revalidates. Throws InvalidSwapError when the result is
// not a factorization into spanning trees.
Factorization apply_swap(const MultiGraph& g, const Factorization& f, const SwapMove& move);

// For a degree-3 vertex under a 2-factorization: its unique incident edge in
// the tree where it has degree 1, plus that tree's index.
// Throws NotDegreeThreeError.
std::pair<EdgeId, int> special_edge(const MultiGraph& g, const Factorization& f, VertexId v);

}  // namespace balsa
