#include "balsa/graph.hpp"

#include <algorithm>
#include <queue>

#include "dsu.hpp"

namespace balsa {

MultiGraph MultiGraph::build(int n, const std::vector<std::pair<int, int>>& endpoints) {
  if (n < 0) throw VertexOutOfRangeError("vertex count must be non-negative");
  MultiGraph g;
  g.n_ = n;
  g.edges_.reserve(endpoints.size());
  g.incident_.resize(n);
  for (size_t i = 0; i < endpoints.size(); ++i) {
    int u = endpoints[i].first, v = endpoints[i].second;
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw VertexOutOfRangeError("edge " + std::to_string(i) + " endpoint out of range");
    if (u == v) throw SelfLoopError("edge " + std::to_string(i) + " is a self loop");
    g.edges_.push_back({u, v});
    g.incident_[u].push_back((EdgeId)i);
    g.incident_[v].push_back((EdgeId)i);
  }
  return g;
}

std::vector<std::vector<EdgeId>> tree_edge_lists(const MultiGraph& g, const Factorization& f) {
  std::vector<std::vector<EdgeId>> lists(f.k);
  for (EdgeId e = 0; e < (int)f.assignment.size(); ++e) {
    int t = f.assignment[e];
    if (t >= 0 && t < f.k) lists[t].push_back(e);
  }
  (void)g;
  return lists;
}

namespace {

// 0 = ok, otherwise the defect found first
bool tree_defects(const MultiGraph& g, const std::vector<EdgeId>& edges, int tree,
                  std::vector<TreeDefect>* out) {
  int n = g.vertex_count();
  bool ok = true;
  if ((int)edges.size() != std::max(0, n - 1)) {
    out->push_back({tree, TreeDefectKind::WrongEdgeCount,
                    "has " + std::to_string(edges.size()) + " edges, expected " +
                        std::to_string(std::max(0, n - 1))});
    ok = false;
  }
  Dsu dsu(n);
  bool cyclic = false;
  for (EdgeId e : edges) {
    EdgeEnds p = g.ends(e);
    if (!dsu.unite(p.u, p.v)) cyclic = true;
  }
  if (cyclic) {
    out->push_back({tree, TreeDefectKind::HasCycle, "contains a cycle"});
    ok = false;
  }
  int comps = 0;
  for (int v = 0; v < n; ++v)
    if (dsu.find(v) == v) ++comps;
  if (comps > 1) {
    out->push_back({tree, TreeDefectKind::Disconnected,
                    std::to_string(comps) + " components"});
    ok = false;
  }
  return ok;
}

}  // namespace

ValidityReport verify_factorization(const MultiGraph& g, const Factorization& f) {
  if ((int)f.assignment.size() != g.edge_count())
    throw InvalidFactorizationError("assignment length " +
                                    std::to_string(f.assignment.size()) + " != edge count " +
                                    std::to_string(g.edge_count()));
  ValidityReport report;
  if (f.k < 1) {
    report.defects.push_back({-1, TreeDefectKind::BadTreeIndex, "k must be >= 1"});
    return report;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    int t = f.assignment[e];
    if (t < 0 || t >= f.k)
      report.defects.push_back({-1, TreeDefectKind::BadTreeIndex,
                                "edge " + std::to_string(e) + " assigned to tree " +
                                    std::to_string(t)});
  }
  if (!report.defects.empty()) return report;
  auto lists = tree_edge_lists(g, f);
  for (int t = 0; t < f.k; ++t) tree_defects(g, lists[t], t, &report.defects);
  return report;
}

BalanceReport balance_report(const MultiGraph& g, const Factorization& f) {
  ValidityReport v = verify_factorization(g, f);
  if (!v.valid())
    throw InvalidFactorizationError("balance_report requires a valid factorization (" +
                                    v.defects.front().detail + ")");
  int n = g.vertex_count();
  BalanceReport rep;
  rep.tree_degrees.assign(n, std::vector<int>(f.k, 0));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    EdgeEnds p = g.ends(e);
    int t = f.assignment[e];
    ++rep.tree_degrees[p.u][t];
    ++rep.tree_degrees[p.v][t];
  }
  rep.max_imbalance = 0;
  rep.max_deviation = 0;
  for (int v2 = 0; v2 < n; ++v2) {
    const auto& d = rep.tree_degrees[v2];
    int lo = d[0], hi = d[0];
    for (int t = 1; t < f.k; ++t) {
      lo = std::min(lo, d[t]);
      hi = std::max(hi, d[t]);
    }
    rep.max_imbalance = std::max(rep.max_imbalance, hi - lo);
    int dg = g.degree(v2);
    for (int t = 0; t < f.k; ++t) {
      // |d_t(v) - d_G(v)/k| = |k*d_t(v) - d_G(v)| / k
      long long num = (long long)f.k * d[t] - dg;
      if (num < 0) num = -num;
      Rat dev(num, f.k);
      if (dev > rep.max_deviation) rep.max_deviation = dev;
    }
  }
  return rep;
}

bool is_spanning_tree(const MultiGraph& g, const std::vector<EdgeId>& edges) {
  int n = g.vertex_count();
  if ((int)edges.size() != std::max(0, n - 1)) return false;
  Dsu dsu(n);
  for (EdgeId e : edges) {
    EdgeEnds p = g.ends(e);
    if (!dsu.unite(p.u, p.v)) return false;
  }
  return true;
}

namespace {

void require_spanning_tree(const MultiGraph& g, const std::vector<EdgeId>& tree) {
  if (!is_spanning_tree(g, tree))
    throw NotASpanningTreeError("edge set of size " + std::to_string(tree.size()) +
                                " is not a spanning tree");
}

// parent pointers of the tree rooted at `root`; parent_edge[v] = edge to parent
void root_tree(const MultiGraph& g, const std::vector<EdgeId>& tree, VertexId root,
               std::vector<EdgeId>* parent_edge) {
  int n = g.vertex_count();
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(n);
  for (EdgeId e : tree) {
    EdgeEnds p = g.ends(e);
    adj[p.u].push_back({p.v, e});
    adj[p.v].push_back({p.u, e});
  }
  parent_edge->assign(n, -1);
  std::vector<char> seen(n, 0);
  std::queue<VertexId> q;
  q.push(root);
  seen[root] = 1;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (auto [w, e] : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        (*parent_edge)[w] = e;
        q.push(w);
      }
    }
  }
}

}  // namespace

std::vector<EdgeId> fundamental_cycle(const MultiGraph& g, const std::vector<EdgeId>& tree,
                                      EdgeId e) {
  require_spanning_tree(g, tree);
  for (EdgeId t : tree)
    if (t == e) throw EdgeInTreeError("edge " + std::to_string(e) + " is in the tree");
  EdgeEnds p = g.ends(e);
  std::vector<EdgeId> parent_edge;
  root_tree(g, tree, p.u, &parent_edge);
  std::vector<EdgeId> cycle{e};
  VertexId v = p.v;
  while (v != p.u) {
    EdgeId pe = parent_edge[v];
    cycle.push_back(pe);
    v = g.other_end(pe, v);
  }
  std::sort(cycle.begin(), cycle.end());
  return cycle;
}

std::vector<EdgeId> fundamental_cut(const MultiGraph& g, const std::vector<EdgeId>& tree,
                                    EdgeId e) {
  require_spanning_tree(g, tree);
  bool present = false;
  for (EdgeId t : tree)
    if (t == e) present = true;
  if (!present) throw EdgeNotInTreeError("edge " + std::to_string(e) + " is not in the tree");
  // 2-color the components of tree - e
  int n = g.vertex_count();
  Dsu dsu(n);
  for (EdgeId t : tree) {
    if (t == e) continue;
    EdgeEnds p = g.ends(t);
    dsu.unite(p.u, p.v);
  }
  int side = dsu.find(g.ends(e).u);
  std::vector<EdgeId> cut;
  for (EdgeId x = 0; x < g.edge_count(); ++x) {
    EdgeEnds p = g.ends(x);
    if ((dsu.find(p.u) == side) != (dsu.find(p.v) == side)) cut.push_back(x);
  }
  return cut;  // already id-increasing
}

}  // namespace balsa
