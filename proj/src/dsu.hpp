#pragma once

#include <numeric>
#include <vector>

namespace balsa {

struct Dsu {
  std::vector<int> parent, size;

  explicit Dsu(int n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  bool same(int a, int b) { return find(a) == find(b); }

  // false if a and b were already connected
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return true;
  }

  void reset() {
    std::iota(parent.begin(), parent.end(), 0);
    std::fill(size.begin(), size.end(), 1);
  }
};

// Union-find with rollback (no path compression), for backtracking search.
struct RollbackDsu {
  std::vector<int> parent, size;
  std::vector<int> trail;  // roots made non-root, in order
  int components;

  explicit RollbackDsu(int n) : parent(n), size(n, 1), components(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) const {
    while (parent[x] != x) x = parent[x];
    return x;
  }

  bool same(int a, int b) const { return find(a) == find(b); }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    trail.push_back(b);
    --components;
    return true;
  }

  int mark() const { return (int)trail.size(); }

  void rollback(int to) {
    while ((int)trail.size() > to) {
      int b = trail.back();
      trail.pop_back();
      int a = parent[b];
      size[a] -= size[b];
      parent[b] = b;
      ++components;
    }
  }
};

}  // namespace balsa
