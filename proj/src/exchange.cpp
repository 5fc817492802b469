#include "balsa/exchange.hpp"

#include <algorithm>

namespace balsa {

std::vector<EdgeId> exchange_partners(const MultiGraph& g,
                                      const std::vector<std::vector<EdgeId>>& trees, int i, int j,
                                      EdgeId e) {
  std::vector<EdgeId> cut = fundamental_cut(g, trees[i], e);
  std::vector<EdgeId> cycle = fundamental_cycle(g, trees[j], e);
  std::vector<EdgeId> both;
  std::set_intersection(cut.begin(), cut.end(), cycle.begin(), cycle.end(),
                        std::back_inserter(both));
  both.erase(std::remove(both.begin(), both.end(), e), both.end());
  return both;
}

EdgeId tree_mapping_edge(const MultiGraph& g, const Factorization& f, int i, int j, EdgeId e) {
  ValidityReport check = verify_factorization(g, f);
  if (!check.valid())
    throw InvalidFactorizationError("tree_mapping_edge: " + check.defects.front().detail);
  if (i == j) throw EdgeNotInTreeError("tree indices must differ");
  if (f.assignment[e] != i)
    throw EdgeNotInTreeError("edge " + std::to_string(e) + " is not in tree " + std::to_string(i));
  std::vector<EdgeId> partners = exchange_partners(g, tree_edge_lists(g, f), i, j, e);
  if (partners.empty())
    throw std::logic_error("no exchange partner for edge " + std::to_string(e));
  return partners.front();
}

Factorization apply_swap(const MultiGraph& g, const Factorization& f, const SwapMove& move) {
  if (move.i == move.j || move.e < 0 || move.e >= g.edge_count() || move.f < 0 ||
      move.f >= g.edge_count())
    throw InvalidSwapError("malformed swap");
  if (f.assignment[move.e] != move.i || f.assignment[move.f] != move.j)
    throw InvalidSwapError("swap edges are not in the stated trees");
  Factorization out = f;
  out.assignment[move.e] = move.j;
  out.assignment[move.f] = move.i;
  ValidityReport check = verify_factorization(g, out);
  if (!check.valid()) throw InvalidSwapError("swap result: " + check.defects.front().detail);
  return out;
}

std::pair<EdgeId, int> special_edge(const MultiGraph& g, const Factorization& f, VertexId v) {
  if (g.degree(v) != 3)
    throw NotDegreeThreeError("vertex " + std::to_string(v) + " has degree " +
                              std::to_string(g.degree(v)));
  ValidityReport check = verify_factorization(g, f);
  if (!check.valid() || f.k != 2)
    throw InvalidFactorizationError("special_edge needs a valid 2-factorization");
  int count[2] = {0, 0};
  for (EdgeId e : g.incident(v)) ++count[f.assignment[e]];
  int lone = count[0] == 1 ? 0 : 1;
  for (EdgeId e : g.incident(v))
    if (f.assignment[e] == lone) return {e, lone};
  throw std::logic_error("unreachable: degree-3 vertex with no lone tree edge");
}

}  // namespace balsa
