#include "balsa/oracle.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

#include "balsa/rng.hpp"
#include "dsu.hpp"

namespace balsa {

namespace {

const char* kModelNames[] = {"uniform-random-trees", "star-heavy", "path-heavy", "parallel-rich"};

std::vector<std::pair<int, int>> prufer_decode(const std::vector<int>& seq, int n) {
  std::vector<int> deg(n, 1);
  for (int s : seq) ++deg[s];
  std::vector<std::pair<int, int>> edges;
  int ptr = 0;
  while (deg[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int s : seq) {
    edges.push_back({leaf, s});
    if (--deg[s] == 1 && s < ptr) {
      leaf = s;
    } else {
      ++ptr;
      while (deg[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.push_back({leaf, n - 1});
  return edges;
}

std::vector<std::pair<int, int>> uniform_tree(Rng& rng, int n) {
  if (n < 2) return {};
  if (n == 2) return {{0, 1}};
  std::vector<int> seq(n - 2);
  for (int& s : seq) s = (int)rng.below((uint64_t)n);
  return prufer_decode(seq, n);
}

std::vector<std::pair<int, int>> star_heavy_tree(Rng& rng, int n) {
  if (n < 2) return {};
  // Mostly one hub; occasional stray attachments keep the instances varied.
  int hub = rng.below(4) == 0 ? (int)rng.below((uint64_t)n) : 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> attached{hub};
  for (int v = 0; v < n; ++v) {
    if (v == hub) continue;
    int to = rng.below(8) == 0 ? attached[rng.below(attached.size())] : hub;
    edges.push_back({to, v});
    attached.push_back(v);
  }
  return edges;
}

std::vector<std::pair<int, int>> path_heavy_tree(Rng& rng, int n) {
  if (n < 2) return {};
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below((uint64_t)i + 1)]);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({order[i], order[i + 1]});
  return edges;
}

}  // namespace

std::optional<GenModel> model_from_name(const std::string& name) {
  for (int i = 0; i < 4; ++i)
    if (name == kModelNames[i]) return (GenModel)i;
  return std::nullopt;
}

std::string model_name(GenModel model) { return kModelNames[(int)model]; }

const std::vector<GenModel>& all_models() {
  static const std::vector<GenModel> models = {GenModel::UniformRandomTrees, GenModel::StarHeavy,
                                               GenModel::PathHeavy, GenModel::ParallelRich};
  return models;
}

std::pair<MultiGraph, Factorization> generate(const GeneratorSpec& spec) {
  int n = spec.n, k = spec.k;
  Rng rng{spec.seed ^ (0x9e3779b97f4a7c15ULL * (uint64_t)((int)spec.model + 1))};
  std::vector<std::pair<int, int>> endpoints;
  Factorization planted;
  planted.k = k;

  if (spec.model == GenModel::ParallelRich && n >= 2) {
    // Trees share most attachment choices, producing many parallel edges.
    std::vector<int> parent(n);
    for (int v = 1; v < n; ++v) parent[v] = (int)rng.below((uint64_t)v);
    for (int t = 0; t < k; ++t) {
      if (t > 0)
        for (int v = 1; v < n; ++v)
          if (rng.below(4) == 0) parent[v] = (int)rng.below((uint64_t)v);
      for (int v = 1; v < n; ++v) {
        endpoints.push_back({parent[v], v});
        planted.assignment.push_back(t);
      }
    }
  } else {
    for (int t = 0; t < k; ++t) {
      std::vector<std::pair<int, int>> tree;
      switch (spec.model) {
        case GenModel::StarHeavy:
          tree = star_heavy_tree(rng, n);
          break;
        case GenModel::PathHeavy:
          tree = path_heavy_tree(rng, n);
          break;
        default:
          tree = uniform_tree(rng, n);
          break;
      }
      for (auto& e : tree) {
        endpoints.push_back(e);
        planted.assignment.push_back(t);
      }
    }
  }

  MultiGraph g = MultiGraph::build(n, endpoints);
  ValidityReport check = verify_factorization(g, planted);
  if (!check.valid())
    throw std::logic_error("generator produced an invalid planting: " +
                           check.defects.front().detail);
  return {std::move(g), std::move(planted)};
}

namespace {

// Backtracking edge-to-tree assignment. Forests stay acyclic via union-find
// with rollback; a tree that reaches n-1 edges is complete. Since
// m = k(n-1), a full assignment makes every class a spanning tree.
struct Enumerator {
  const MultiGraph& g;
  int k, n, m;
  std::vector<RollbackDsu> dsu;
  std::vector<int> count;
  Factorization cur;
  bool stopped = false;

  // set when minimizing imbalance
  bool minimize = false;
  std::vector<std::vector<int>> deg;  // [v][t]
  int best = INT_MAX;
  int floor = 0;
  std::optional<Factorization> witness;
  long long examined = 0;

  const std::function<bool(const Factorization&)>* visit = nullptr;

  Enumerator(const MultiGraph& graph, int trees)
      : g(graph),
        k(trees),
        n(graph.vertex_count()),
        m(graph.edge_count()),
        dsu(trees, RollbackDsu(graph.vertex_count())),
        count(trees, 0) {
    cur.k = k;
    cur.assignment.assign(m, -1);
  }

  void leaf() {
    if (!minimize) {
      stopped = !(*visit)(cur);
      return;
    }
    ++examined;
    int imbalance = 0;
    for (int v = 0; v < n; ++v) {
      auto [lo, hi] = std::minmax_element(deg[v].begin(), deg[v].end());
      imbalance = std::max(imbalance, *hi - *lo);
    }
    if (imbalance < best) {
      best = imbalance;
      witness = cur;
      if (best == floor) stopped = true;
    }
  }

  void assign(EdgeId e, int t, int from) {
    EdgeEnds p = g.ends(e);
    int at = dsu[t].mark();
    dsu[t].unite(p.u, p.v);
    ++count[t];
    cur.assignment[e] = t;
    if (minimize) {
      ++deg[p.u][t];
      ++deg[p.v][t];
    }
    rec(from);
    if (minimize) {
      --deg[p.u][t];
      --deg[p.v][t];
    }
    cur.assignment[e] = -1;
    --count[t];
    dsu[t].rollback(at);
  }

  void rec(int e) {
    if (stopped) return;
    if (e == m) {
      leaf();
      return;
    }
    EdgeEnds p = g.ends(e);
    for (int t = 0; t < k && !stopped; ++t) {
      if (count[t] == n - 1) continue;
      if (dsu[t].same(p.u, p.v)) continue;
      assign(e, t, e + 1);
    }
  }
};

}  // namespace

void enumerate_factorizations(const MultiGraph& g, int k,
                              const std::function<bool(const Factorization&)>& visit,
                              const EnumerateOptions& opts) {
  if (g.edge_count() > opts.max_edges)
    throw TooLargeError("enumeration cap " + std::to_string(opts.max_edges) + " edges, graph has " +
                        std::to_string(g.edge_count()));
  if (k < 1) return;
  long long need = (long long)k * std::max(0, g.vertex_count() - 1);
  if (g.edge_count() != need) return;
  Enumerator en(g, k);
  en.visit = &visit;
  en.rec(0);
}

OracleResult optimal_imbalance(const MultiGraph& g, int k, const EnumerateOptions& opts) {
  if (g.edge_count() > opts.max_edges)
    throw TooLargeError("enumeration cap " + std::to_string(opts.max_edges) + " edges, graph has " +
                        std::to_string(g.edge_count()));
  OracleResult out;
  if (k < 1) return out;
  long long need = (long long)k * std::max(0, g.vertex_count() - 1);
  if (g.edge_count() != need) return out;

  Enumerator en(g, k);
  en.minimize = true;
  en.deg.assign(g.vertex_count(), std::vector<int>(k, 0));
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) % k != 0) en.floor = 1;
  if (k == 2 && g.edge_count() > 0) {
    en.assign(0, 0, 1);
  } else {
    en.rec(0);
  }
  if (en.witness) {
    out.optimal = en.best;
    out.witness = std::move(en.witness);
  }
  out.examined = en.examined;
  return out;
}

std::vector<SearchHit> search_lower_bound(const SearchOptions& opts) {
  std::vector<SearchHit> hits;
  auto consider = [&](const MultiGraph& g) {
    if (g.edge_count() > 16) return;
    OracleResult r = optimal_imbalance(g, 2);
    if (r.optimal >= opts.target) hits.push_back({g, r.optimal});
  };

  // fixed small candidates: the complete graph on 4 vertices and the
  // triangle with one doubled edge
  consider(MultiGraph::build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  consider(MultiGraph::build(3, {{0, 1}, {0, 2}, {1, 2}, {0, 1}}));

  for (int i = 0; i < opts.instances; ++i) {
    GeneratorSpec spec;
    spec.model = all_models()[i % 4];
    spec.n = 3 + (int)(i % std::max(1, opts.max_vertices - 2));
    spec.k = 2;
    spec.seed = opts.seed + (uint64_t)i * 1000003ULL;
    if (2 * (spec.n - 1) > 16) continue;
    consider(generate(spec).first);
  }
  return hits;
}

}  // namespace balsa
