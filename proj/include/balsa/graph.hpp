#pragma once

#include <string>
#include <utility>
#include <vector>

#include "balsa/errors.hpp"
#include "balsa/rational.hpp"

namespace balsa {

using VertexId = int;
using EdgeId = int;

struct EdgeEnds {
  VertexId u, v;
};

// Loopless multigraph. Vertices are 0..n-1, edges are 0..m-1 in insertion
// order; parallel edges are distinct EdgeIds. Immutable once built.
class MultiGraph {
 public:
  MultiGraph() = default;

  // Throws SelfLoopError / VertexOutOfRangeError.
  static MultiGraph build(int n, const std::vector<std::pair<int, int>>& endpoints);

  int vertex_count() const { return n_; }
  int edge_count() const { return (int)edges_.size(); }

  EdgeEnds ends(EdgeId e) const { return edges_[e]; }

  VertexId other_end(EdgeId e, VertexId v) const {
    const EdgeEnds& p = edges_[e];
    return p.u == v ? p.v : p.u;
  }

  bool touches(EdgeId e, VertexId v) const {
    const EdgeEnds& p = edges_[e];
    return p.u == v || p.v == v;
  }

  int degree(VertexId v) const { return (int)incident_[v].size(); }

  // Incident edge ids in increasing order.
  const std::vector<EdgeId>& incident(VertexId v) const { return incident_[v]; }

 private:
  int n_ = 0;
  std::vector<EdgeEnds> edges_;
  std::vector<std::vector<EdgeId>> incident_;
};

// Ordered partition of the edge set into k trees: assignment[e] is the tree
// index of edge e. Validity (each class a spanning tree) is a separate check.
struct Factorization {
  int k = 0;
  std::vector<int> assignment;
};

// Edge ids of each tree, ids increasing within a tree.
std::vector<std::vector<EdgeId>> tree_edge_lists(const MultiGraph& g, const Factorization& f);

enum class TreeDefectKind { BadTreeIndex, WrongEdgeCount, HasCycle, Disconnected };

struct TreeDefect {
  int tree;  // -1 for assignment-level defects
  TreeDefectKind kind;
  std::string detail;
};

struct ValidityReport {
  std::vector<TreeDefect> defects;
  bool valid() const { return defects.empty(); }
};

// Checks that every class of f is a spanning tree of g. Violations are data,
// not errors; only a malformed assignment length throws.
ValidityReport verify_factorization(const MultiGraph& g, const Factorization& f);

struct BalanceReport {
  // tree_degrees[v][i] = degree of v in tree i.
  std::vector<std::vector<int>> tree_degrees;
  // max over vertices and tree pairs of |d_i(v) - d_j(v)|.
  int max_imbalance = 0;
  // max over vertices and trees of |d_i(v) - d_G(v)/k|, exact.
  Rat max_deviation = 0;
};

// Throws InvalidFactorizationError if f is not valid.
BalanceReport balance_report(const MultiGraph& g, const Factorization& f);

bool is_spanning_tree(const MultiGraph& g, const std::vector<EdgeId>& edges);

// Edges of the unique cycle in tree+e, including e itself, ids increasing.
// tree must be a spanning tree not containing e.
std::vector<EdgeId> fundamental_cycle(const MultiGraph& g, const std::vector<EdgeId>& tree,
                                      EdgeId e);

// All edges of g crossing the two components of tree-e, including e itself,
// ids increasing. tree must be a spanning tree containing e.
std::vector<EdgeId> fundamental_cut(const MultiGraph& g, const std::vector<EdgeId>& tree,
                                    EdgeId e);

}  // namespace balsa
