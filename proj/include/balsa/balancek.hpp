#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "balsa/balance2.hpp"
#include "balsa/graph.hpp"
#include "balsa/rational.hpp"

namespace balsa {

// Deviation budget c_k of the k-balancing recursion:
//   c_1 = 0, c_{2m} = c_m + 5/2, c_{2m+1} = (1 + 1/(2m+1)) c_{2m} + 5.
Rat feasible_constant(int k);

// One step of the first-tree degree envelope: from the bound at iteration j
// to the bound at j+1, for a vertex of the given total degree, splitting off
// one tree from k+1. `upper` selects the upper envelope (lower otherwise).
Rat envelope_next(const Rat& prev, int degree, int k, const Rat& ck, bool upper);

// Fixed points of the envelope recurrences: the first-tree degree window
// (lower, upper) that extraction drives every vertex into.
std::pair<Rat, Rat> envelope_limits(int degree, int k, const Rat& ck);

struct BalanceKOptions {
  int iteration_cap = 1000;  // first-tree extraction rounds before giving up
  std::string persist_dir;   // where cap-exceeded instances are written
  bool track_envelope = false;       // assert the envelope sandwich each round
  std::ostream* iteration_log = nullptr;  // CSV rounds: iteration,max_slack
  Balance2Options inner;     // settings for the pair balancer underneath
};

// Balances tree pairs i and k+i of a 2k-factorization whose halves are given
// as explicit trees: a_trees[i] and b_trees[i] must each be a spanning tree,
// and together all 2k trees must partition the edges of g (else
// InvalidHalvesError). Tree i of the result refines a_trees[i] u b_trees[i].
Factorization combine_double(const MultiGraph& g, const std::vector<std::vector<EdgeId>>& a_trees,
                             const std::vector<std::vector<EdgeId>>& b_trees,
                             const Balance2Options& inner = {});

struct ExtractResult {
  Factorization factorization;  // all k+1 trees; tree 0 is the extracted one
  int iterations = 0;
};

// Rebalances a (k+1)-factorization until tree 0's degrees sit inside the
// closed-form envelope window at every vertex <=> |d_T0(v) - d(v)/(k+1)| <=
// k(c_k+5)/(k+1). f0 must be a valid factorization with k_plus_1 trees.
// Throws IterationCapExceededError past the cap.
ExtractResult extract_first_tree(const MultiGraph& g, int k_plus_1, const Factorization& f0,
                                 const BalanceKOptions& opts = {});

struct BalanceKResult {
  Factorization factorization;
  BalanceReport report;
  Rat certified;             // the budget c_k the result is certified against
  long long iterations = 0;  // total extraction rounds across the recursion
};

// Splits g into k spanning trees with max deviation <= c_k (so max pairwise
// imbalance <= 2 c_k). Throws NotKMultipleTreeError when g has no such split.
BalanceKResult balance_k(const MultiGraph& g, int k, const BalanceKOptions& opts = {});

}  // namespace balsa
