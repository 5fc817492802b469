#include "balsa/balancek.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "balsa/io.hpp"
#include "balsa/packing.hpp"

namespace balsa {

Rat feasible_constant(int k) {
  if (k < 1) throw Error("feasible_constant: k must be at least 1");
  static std::map<int, Rat> cache;
  static std::mutex lock;
  {
    std::lock_guard<std::mutex> guard(lock);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
  }
  Rat value;
  if (k == 1) value = 0;
  else if (k % 2 == 0) value = feasible_constant(k / 2) + Rat(5, 2);
  else value = (Rat(1) + Rat(1, k)) * feasible_constant(k - 1) + 5;
  std::lock_guard<std::mutex> guard(lock);
  cache.emplace(k, value);
  return value;
}

Rat envelope_next(const Rat& prev, int degree, int k, const Rat& ck, bool upper) {
  Rat shift = ck / 2 + Rat(5, 2);
  Rat base = prev * (Rat(1, 2) - Rat(1, 2 * k)) + Rat(degree, 2 * k);
  if (upper) return base + shift;
  return base - shift;
}

std::pair<Rat, Rat> envelope_limits(int degree, int k, const Rat& ck) {
  Rat center = Rat(degree, k + 1);
  Rat radius = Rat(k) * (ck + 5) / (k + 1);
  return {center - radius, center + radius};
}

namespace {

struct SubGraph {
  MultiGraph graph;
  std::vector<EdgeId> to_parent;
};

// Induced subgraph on the full vertex set, keeping the listed edges in the
// listed order (local edge i is parent edge edges[i]).
SubGraph subgraph(const MultiGraph& g, std::vector<EdgeId> edges) {
  std::vector<std::pair<int, int>> ends;
  ends.reserve(edges.size());
  for (EdgeId e : edges) {
    EdgeEnds p = g.ends(e);
    ends.push_back({p.u, p.v});
  }
  return SubGraph{MultiGraph::build(g.vertex_count(), ends), std::move(edges)};
}

Factorization balance_internal(const MultiGraph& g, int k, const Factorization& start,
                               const BalanceKOptions& opts, long long& rounds);

ExtractResult extract_loop(const MultiGraph& g, const Factorization& f0,
                           const BalanceKOptions& opts, long long& rounds) {
  int big_k = f0.k;
  int k = big_k - 1;
  int n = g.vertex_count(), m = g.edge_count();
  Rat ck = feasible_constant(k);

  std::vector<std::pair<Rat, Rat>> window(n);
  for (VertexId v = 0; v < n; ++v) window[v] = envelope_limits(g.degree(v), k, ck);

  std::vector<Rat> lo(n), hi(n);
  for (VertexId v = 0; v < n; ++v) {
    lo[v] = 0;
    hi[v] = g.degree(v);
  }

  Factorization cur = f0;
  int iters = 0;
  while (true) {
    std::vector<int> d0(n, 0);
    for (EdgeId e = 0; e < m; ++e)
      if (cur.assignment[e] == 0) {
        EdgeEnds p = g.ends(e);
        ++d0[p.u];
        ++d0[p.v];
      }

    if (opts.track_envelope)
      for (VertexId v = 0; v < n; ++v)
        if (Rat(d0[v]) < lo[v] || Rat(d0[v]) > hi[v])
          throw std::logic_error("first-tree degree left its envelope at iteration " +
                                 std::to_string(iters));

    Rat slack = 0;
    for (VertexId v = 0; v < n; ++v) {
      Rat dv(d0[v]);
      if (dv < window[v].first) slack = std::max(slack, Rat(window[v].first - dv));
      if (dv > window[v].second) slack = std::max(slack, Rat(dv - window[v].second));
    }
    if (opts.iteration_log) (*opts.iteration_log) << iters << ',' << rat_decimal(slack, 4) << '\n';
    if (slack == 0) break;

    if (iters >= opts.iteration_cap) {
      std::string path = persist_instance(g, big_k, opts.persist_dir, "iteration-cap");
      throw IterationCapExceededError("first-tree extraction still outside its window after " +
                                          std::to_string(iters) + " rounds",
                                      path, iters);
    }

    // Rebalance the other k trees over G - T0, warm started from their
    // current shape.
    std::vector<EdgeId> rest;
    Factorization warm;
    warm.k = k;
    for (EdgeId e = 0; e < m; ++e)
      if (cur.assignment[e] != 0) {
        rest.push_back(e);
        warm.assignment.push_back(cur.assignment[e] - 1);
      }
    SubGraph gh = subgraph(g, std::move(rest));
    Factorization rebal = balance_internal(gh.graph, k, warm, opts, rounds);

    // Pair T0 with the first rebalanced tree and 2-balance their union.
    std::vector<EdgeId> pair_edges;
    for (EdgeId e = 0; e < m; ++e)
      if (cur.assignment[e] == 0) pair_edges.push_back(e);
    for (int le = 0; le < (int)gh.to_parent.size(); ++le)
      if (rebal.assignment[le] == 0) pair_edges.push_back(gh.to_parent[le]);
    std::sort(pair_edges.begin(), pair_edges.end());
    SubGraph gf = subgraph(g, std::move(pair_edges));
    Balance2Result two = balance_double_tree(gf.graph, opts.inner);

    Factorization next;
    next.k = big_k;
    next.assignment.assign(m, -1);
    for (int le = 0; le < (int)gh.to_parent.size(); ++le)
      next.assignment[gh.to_parent[le]] = rebal.assignment[le] + 1;
    for (int le = 0; le < (int)gf.to_parent.size(); ++le)
      next.assignment[gf.to_parent[le]] = two.factorization.assignment[le] == 0 ? 0 : 1;
    cur = std::move(next);

    for (VertexId v = 0; v < n; ++v) {
      lo[v] = envelope_next(lo[v], g.degree(v), k, ck, false);
      hi[v] = envelope_next(hi[v], g.degree(v), k, ck, true);
    }
    ++iters;
    ++rounds;
  }
  return ExtractResult{std::move(cur), iters};
}

Factorization balance_internal(const MultiGraph& g, int k, const Factorization& start,
                               const BalanceKOptions& opts, long long& rounds) {
  Factorization out;
  if (k == 1) {
    out = start;
  } else if (k == 2) {
    out = balance_double_tree(g, opts.inner).factorization;
  } else if (k % 2 == 0) {
    int h = k / 2;
    int m = g.edge_count();
    std::vector<EdgeId> ea, eb;
    Factorization sa, sb;
    sa.k = sb.k = h;
    for (EdgeId e = 0; e < m; ++e) {
      int t = start.assignment[e];
      if (t < h) {
        ea.push_back(e);
        sa.assignment.push_back(t);
      } else {
        eb.push_back(e);
        sb.assignment.push_back(t - h);
      }
    }
    SubGraph ga = subgraph(g, std::move(ea));
    SubGraph gb = subgraph(g, std::move(eb));
    Factorization ra = balance_internal(ga.graph, h, sa, opts, rounds);
    Factorization rb = balance_internal(gb.graph, h, sb, opts, rounds);
    std::vector<std::vector<EdgeId>> half_a(h), half_b(h);
    for (int le = 0; le < (int)ga.to_parent.size(); ++le)
      half_a[ra.assignment[le]].push_back(ga.to_parent[le]);
    for (int le = 0; le < (int)gb.to_parent.size(); ++le)
      half_b[rb.assignment[le]].push_back(gb.to_parent[le]);
    out = combine_double(g, half_a, half_b, opts.inner);
  } else {
    ExtractResult ex = extract_loop(g, start, opts, rounds);
    int m = g.edge_count();
    std::vector<EdgeId> rest;
    Factorization warm;
    warm.k = k - 1;
    for (EdgeId e = 0; e < m; ++e)
      if (ex.factorization.assignment[e] != 0) {
        rest.push_back(e);
        warm.assignment.push_back(ex.factorization.assignment[e] - 1);
      }
    SubGraph gh = subgraph(g, std::move(rest));
    Factorization rr = balance_internal(gh.graph, k - 1, warm, opts, rounds);
    out.k = k;
    out.assignment.assign(m, 0);
    for (int le = 0; le < (int)gh.to_parent.size(); ++le)
      out.assignment[gh.to_parent[le]] = rr.assignment[le] + 1;
  }

  BalanceReport rep = balance_report(g, out);
  if (rep.max_deviation > feasible_constant(k))
    throw std::logic_error("deviation budget exceeded at width " + std::to_string(k));
  return out;
}

}  // namespace

Factorization combine_double(const MultiGraph& g, const std::vector<std::vector<EdgeId>>& a_trees,
                             const std::vector<std::vector<EdgeId>>& b_trees,
                             const Balance2Options& inner) {
  int k = (int)a_trees.size();
  if (k == 0 || (int)b_trees.size() != k)
    throw InvalidHalvesError("halves must carry the same positive tree count");
  int n = g.vertex_count(), m = g.edge_count();

  std::vector<char> used(m, 0);
  long long covered = 0;
  auto claim = [&](const std::vector<EdgeId>& t) {
    if (!is_spanning_tree(g, t))
      throw InvalidHalvesError("half entry is not a spanning tree");
    for (EdgeId e : t) {
      if (e < 0 || e >= m || used[e])
        throw InvalidHalvesError("halves do not partition the edge set");
      used[e] = 1;
      ++covered;
    }
  };
  for (int i = 0; i < k; ++i) {
    claim(a_trees[i]);
    claim(b_trees[i]);
  }
  if (covered != m) throw InvalidHalvesError("halves do not cover every edge");

  // Input deviation per half, for the output budget check.
  Rat dev_in = 0;
  {
    std::vector<int> tot_a(n, 0), tot_b(n, 0);
    std::vector<std::vector<int>> deg_a(n, std::vector<int>(k, 0)), deg_b = deg_a;
    for (int i = 0; i < k; ++i) {
      for (EdgeId e : a_trees[i]) {
        EdgeEnds p = g.ends(e);
        ++deg_a[p.u][i]; ++deg_a[p.v][i]; ++tot_a[p.u]; ++tot_a[p.v];
      }
      for (EdgeId e : b_trees[i]) {
        EdgeEnds p = g.ends(e);
        ++deg_b[p.u][i]; ++deg_b[p.v][i]; ++tot_b[p.u]; ++tot_b[p.v];
      }
    }
    for (VertexId v = 0; v < n; ++v)
      for (int i = 0; i < k; ++i) {
        Rat da = abs(Rat(deg_a[v][i]) - Rat(tot_a[v], k));
        Rat db = abs(Rat(deg_b[v][i]) - Rat(tot_b[v], k));
        dev_in = std::max(std::max(dev_in, da), db);
      }
  }

  Factorization out;
  out.k = 2 * k;
  out.assignment.assign(m, -1);

  std::exception_ptr fail;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < k; ++i) {
    try {
      std::vector<EdgeId> edges;
      edges.reserve(a_trees[i].size() + b_trees[i].size());
      edges.insert(edges.end(), a_trees[i].begin(), a_trees[i].end());
      edges.insert(edges.end(), b_trees[i].begin(), b_trees[i].end());
      std::sort(edges.begin(), edges.end());
      SubGraph sub = subgraph(g, std::move(edges));
      Balance2Result pair = balance_double_tree(sub.graph, inner);
      for (int le = 0; le < (int)sub.to_parent.size(); ++le)
        out.assignment[sub.to_parent[le]] = pair.factorization.assignment[le] == 0 ? i : k + i;
    } catch (...) {
#pragma omp critical(balsa_combine_fail)
      if (!fail) fail = std::current_exception();
    }
  }
  if (fail) std::rethrow_exception(fail);

  ValidityReport check = verify_factorization(g, out);
  if (!check.valid())
    throw std::logic_error("combined factorization invalid: " + check.defects.front().detail);
  BalanceReport rep = balance_report(g, out);
  if (rep.max_deviation > dev_in + Rat(5, 2))
    throw std::logic_error("combined deviation exceeds the input budget plus 5/2");
  return out;
}

ExtractResult extract_first_tree(const MultiGraph& g, int k_plus_1, const Factorization& f0,
                                 const BalanceKOptions& opts) {
  if (k_plus_1 < 2) throw Error("extract_first_tree: need at least two trees");
  if (f0.k != k_plus_1)
    throw InvalidFactorizationError("extract_first_tree: factorization width mismatch");
  ValidityReport check = verify_factorization(g, f0);
  if (!check.valid())
    throw InvalidFactorizationError("extract_first_tree: " + check.defects.front().detail);
  long long rounds = 0;
  return extract_loop(g, f0, opts, rounds);
}

BalanceKResult balance_k(const MultiGraph& g, int k, const BalanceKOptions& opts) {
  if (k < 1) throw Error("balance_k: k must be at least 1");
  PackingResult packed = pack(g, k);
  if (!packed.ok())
    throw NotKMultipleTreeError("cannot pack " + std::to_string(k) +
                                " spanning trees: " + packed.deficiency->reason);
  long long rounds = 0;
  Factorization f = balance_internal(g, k, *packed.factorization, opts, rounds);

  BalanceKResult out;
  out.factorization = std::move(f);
  out.report = balance_report(g, out.factorization);
  out.certified = feasible_constant(k);
  out.iterations = rounds;
  if (out.report.max_deviation > out.certified)
    throw std::logic_error("final deviation exceeds the certified constant");
  return out;
}

}  // namespace balsa
