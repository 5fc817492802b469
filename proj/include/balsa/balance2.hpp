#pragma once

#include <optional>
#include <string>
#include <vector>

#include "balsa/graph.hpp"
#include "balsa/rational.hpp"

namespace balsa {

struct VertexClass {
  int degree = 0;
  bool big = false;       // degree >= 8
  bool rich = false;      // 3-vertex with three edges to big vertices
  bool poor = false;      // 3-vertex with exactly two edges to big vertices
  bool critical = false;  // 8-vertex with one edge to a 2-vertex, seven to 3-vertices
};

// Degree-profile classification. The factorization parameter is part of the
// stable signature; the current classes depend only on degrees.
VertexClass classify(const MultiGraph& g, const Factorization& f, VertexId v);

enum class ReductionTag {
  ParallelTwoVertex,       // 2-vertex whose edges are parallel
  TwoVertexSmallNeighbor,  // 2-vertex with a small neighbor
  BigWithTwoTwoNeighbors,  // big vertex with two 2-vertex neighbors
  SpecialEdgeToSmall,      // 3-vertex whose special edge meets a small vertex
  CriticalParallelPoor,    // critical 8-vertex doubly linked to a poor 3-vertex
  CriticalAdjacentThrees,  // critical 8-vertex with two adjacent 3-vertex neighbors
};

std::string tag_name(ReductionTag tag);

// A configuration found in the graph. Role order (vertices; edges) per tag:
//   ParallelTwoVertex:      {x, y};              {e1, e2}          (e1 < e2)
//   TwoVertexSmallNeighbor: {x, y, z};           {xy, xz}          (y small)
//   BigWithTwoTwoNeighbors: {x, y1, y2, z1, z2}; {xy1, xy2, y1z1, y2z2}
//   SpecialEdgeToSmall:     {x, y, z1, z2};      {xy, xz1, xz2}    (xy special)
//   CriticalParallelPoor:   {x, y, z};           {e, f, yz}        (e < f)
//   CriticalAdjacentThrees: {x, y1, y2, z1, z2}; {xy1, xy2, y1y2, y1z1, y2z2}
struct ReductionCase {
  ReductionTag tag;
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
};

// Scans tags in declaration order, smallest participating vertex first
// within a tag. SpecialEdgeToSmall is only reported when the graph has a
// big vertex at all: without one, every valid factorization is within the
// bound already, so no surgery is ever needed.
std::optional<ReductionCase> find_reduction(const MultiGraph& g, const Factorization& f);

// One applied reduction step; carries everything needed to turn a
// factorization of `reduced` back into one of `parent`.
struct ReductionEntry {
  ReductionTag tag;
  MultiGraph parent, reduced;
  std::vector<VertexId> vertices;    // parent-side roles, as in ReductionCase
  std::vector<EdgeId> edges;         // parent-side role edges
  std::vector<VertexId> vertex_map;  // parent vertex -> child vertex, -1 if removed
  std::vector<EdgeId> edge_map;      // parent edge -> child edge, -1 if removed
  std::vector<EdgeId> created;       // child ids of created edges, role order:
                                     //   BigWithTwoTwoNeighbors: {z1y, z2y}
                                     //   SpecialEdgeToSmall:     {z1z2}
                                     //   CriticalParallelPoor:   {xz}
                                     //   CriticalAdjacentThrees: {e, f, yz2}
  VertexId merged = -1;              // child id of the vertex replacing removed ones
};

// Removes one vertex per the case's surgery. Throws CaseNotPresentError when
// the roles do not form the tag's configuration in g.
ReductionEntry reduce(const MultiGraph& g, const ReductionCase& c);

// Maps a child factorization with max imbalance <= 5 to a parent
// factorization with max imbalance <= 5, applying the tree relabelings and
// single swaps each case calls for. Throws ImbalancedInputError when the
// child factorization is invalid or exceeds the bound.
Factorization lift(const ReductionEntry& entry, const Factorization& child);

// First-improvement descent on sum over v of (d_T1(v) - d_T2(v))^2 using
// single-edge exchanges; stops at a local optimum or once max imbalance
// <= target.
Factorization local_search(const MultiGraph& g, const Factorization& f, int target);

struct ChargeReport {
  std::vector<Rat> final_charge;
  Rat total = 0;
  Rat min_charge = 0;
};

// Initial charge d_G(v); every big vertex sends along each incident edge to
// a 2-vertex (1), to a non-rich 3-vertex (1/2), or to a rich 3-vertex (1/2
// over its special edge, 1/4 otherwise). Transfers conserve the total.
ChargeReport discharge_audit(const MultiGraph& g, const Factorization& f);

struct Balance2Options {
  // kernels at most this many edges get exhaustive enumeration as fallback
  int exhaustive_edge_cap = 12;
  std::string persist_dir;  // where uncertified instances are written
};

struct Balance2Result {
  Factorization factorization;
  BalanceReport report;
  std::vector<ReductionTag> reductions;  // applied, in application order
};

// Certified 2-balancing: pack, reduce to a kernel, balance the kernel, lift
// back. The result always has max imbalance <= 5; if no phase can certify
// that, throws BoundNotCertifiedError with the instance persisted.
Balance2Result balance_double_tree(const MultiGraph& g, const Balance2Options& opts = {});

}  // namespace balsa
