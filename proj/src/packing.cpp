#include "balsa/packing.hpp"

#include <algorithm>
#include <queue>

#include "dsu.hpp"

namespace balsa {

namespace {

// Incremental k-forest packing (graphic matroid union). Each forest keeps a
// union-find for O(1) "would this edge close a cycle" checks plus adjacency
// lists for fundamental-path walks during augmentation.
struct Packer {
  const MultiGraph& g;
  int k;
  std::vector<int> owner;  // edge -> forest, -1 if unplaced
  std::vector<Dsu> dsu;    // one per forest
  std::vector<std::vector<std::vector<std::pair<VertexId, EdgeId>>>> adj;  // [forest][v]

  Packer(const MultiGraph& graph, int forests)
      : g(graph),
        k(forests),
        owner(graph.edge_count(), -1),
        dsu(forests, Dsu(graph.vertex_count())),
        adj(forests,
            std::vector<std::vector<std::pair<VertexId, EdgeId>>>(graph.vertex_count())) {}

  void add_to_forest(EdgeId e, int t) {
    EdgeEnds p = g.ends(e);
    owner[e] = t;
    dsu[t].unite(p.u, p.v);
    adj[t][p.u].push_back({p.v, e});
    adj[t][p.v].push_back({p.u, e});
  }

  // adjacency only; the caller re-homes the edge right after
  void detach(EdgeId e, int t) {
    EdgeEnds p = g.ends(e);
    auto drop = [&](VertexId v) {
      auto& lst = adj[t][v];
      for (size_t i = 0; i < lst.size(); ++i) {
        if (lst[i].second == e) {
          lst.erase(lst.begin() + i);
          return;
        }
      }
    };
    drop(p.u);
    drop(p.v);
  }

  void rebuild_dsu(int t) {
    dsu[t].reset();
    for (int v = 0; v < g.vertex_count(); ++v)
      for (auto [w, e] : adj[t][v]) dsu[t].unite(v, w);
  }

  // Edges on the path between the endpoints of `e` in forest t. The
  // endpoints must be connected there.
  std::vector<EdgeId> forest_path(EdgeId e, int t) const {
    EdgeEnds p = g.ends(e);
    int n = g.vertex_count();
    std::vector<EdgeId> via(n, -1);
    std::vector<char> seen(n, 0);
    std::queue<VertexId> q;
    q.push(p.u);
    seen[p.u] = 1;
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      if (v == p.v) break;
      for (auto [w, pe] : adj[t][v]) {
        if (!seen[w]) {
          seen[w] = 1;
          via[w] = pe;
          q.push(w);
        }
      }
    }
    std::vector<EdgeId> path;
    VertexId v = p.v;
    while (v != p.u) {
      EdgeId pe = via[v];
      path.push_back(pe);
      v = g.other_end(pe, v);
    }
    return path;
  }

  // Tries to place e0, moving other edges between forests if needed.
  // Standard shortest-augmenting-sequence search over the exchange digraph,
  // breadth first, expanding forests in index order and cycle edges in id
  // order. Returns false when no placement exists.
  bool insert(EdgeId e0) {
    EdgeEnds p0 = g.ends(e0);
    for (int t = 0; t < k; ++t) {
      if (!dsu[t].same(p0.u, p0.v)) {
        add_to_forest(e0, t);
        return true;
      }
    }

    std::vector<char> visited(g.edge_count(), 0);
    std::vector<EdgeId> parent(g.edge_count(), -1);
    std::vector<int> parent_forest(g.edge_count(), -1);
    std::queue<EdgeId> q;
    visited[e0] = 1;
    q.push(e0);
    EdgeId sink = -1;
    int sink_forest = -1;
    while (!q.empty() && sink < 0) {
      EdgeId x = q.front();
      q.pop();
      EdgeEnds p = g.ends(x);
      for (int t = 0; t < k && sink < 0; ++t) {
        if (t == owner[x]) continue;
        if (!dsu[t].same(p.u, p.v)) {
          sink = x;
          sink_forest = t;
          break;
        }
        std::vector<EdgeId> cyc = forest_path(x, t);
        std::sort(cyc.begin(), cyc.end());
        for (EdgeId y : cyc) {
          if (!visited[y]) {
            visited[y] = 1;
            parent[y] = x;
            parent_forest[y] = t;
            q.push(y);
          }
        }
      }
    }
    if (sink < 0) return false;

    // Walk the chain back: each edge vacates its forest for its parent and
    // moves into the slot vacated by its child (the sink moves freely).
    std::vector<char> touched(k, 0);
    EdgeId cur = sink;
    int target = sink_forest;
    while (cur != e0) {
      EdgeId prev = parent[cur];
      int t = parent_forest[cur];  // forest owning cur, blocking prev
      detach(cur, t);
      add_to_forest(cur, target);
      touched[t] = 1;
      touched[target] = 1;
      target = t;
      cur = prev;
    }
    add_to_forest(e0, target);
    touched[target] = 1;
    for (int t = 0; t < k; ++t)
      if (touched[t]) rebuild_dsu(t);
    return true;
  }

  // Certificate for a failed insertion: the vertex span of the edges
  // reachable in the exchange search, which induces too many edges.
  Deficiency witness(EdgeId e0) {
    std::vector<char> visited(g.edge_count(), 0);
    std::queue<EdgeId> q;
    visited[e0] = 1;
    q.push(e0);
    while (!q.empty()) {
      EdgeId x = q.front();
      q.pop();
      for (int t = 0; t < k; ++t) {
        if (t == owner[x]) continue;
        for (EdgeId y : forest_path(x, t)) {
          if (!visited[y]) {
            visited[y] = 1;
            q.push(y);
          }
        }
      }
    }
    std::vector<char> in_x(g.vertex_count(), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (visited[e]) {
        in_x[g.ends(e).u] = 1;
        in_x[g.ends(e).v] = 1;
      }
    }
    Deficiency d;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (in_x[v]) d.vertex_set.push_back(v);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      EdgeEnds p = g.ends(e);
      if (in_x[p.u] && in_x[p.v]) ++d.edges_inside;
    }
    d.capacity = (long long)k * ((long long)d.vertex_set.size() - 1);
    d.reason = "vertex set of size " + std::to_string(d.vertex_set.size()) + " induces " +
               std::to_string(d.edges_inside) + " edges, capacity " + std::to_string(d.capacity);
    return d;
  }
};

}  // namespace

PackingResult pack(const MultiGraph& g, int k) {
  PackingResult result;
  if (k < 1) {
    result.deficiency = Deficiency{"k must be >= 1", {}, 0, 0};
    return result;
  }
  long long n = g.vertex_count(), m = g.edge_count();
  if (m != (long long)k * std::max(0ll, n - 1)) {
    Deficiency d;
    d.reason = "edge count " + std::to_string(m) + " != k*(n-1) = " +
               std::to_string((long long)k * std::max(0ll, n - 1));
    result.deficiency = d;
    return result;
  }

  Packer packer(g, k);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!packer.insert(e)) {
      result.deficiency = packer.witness(e);
      return result;
    }
  }

  Factorization f;
  f.k = k;
  f.assignment = packer.owner;
  ValidityReport check = verify_factorization(g, f);
  if (!check.valid())
    throw std::logic_error("pack produced an invalid factorization: " +
                           check.defects.front().detail);
  result.factorization = std::move(f);
  return result;
}

bool is_k_multiple_tree(const MultiGraph& g, int k) { return pack(g, k).ok(); }

}  // namespace balsa
