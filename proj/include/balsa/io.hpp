#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "balsa/graph.hpp"

namespace balsa {

// Graph text format:
//   # comment lines and blank lines are skipped
//   n m k
//   u v            (m lines, 0-based endpoints, one per edge id)
//
// Factorization text format:
//   edgeId treeIndex   (m lines, edge ids 0..m-1 in order)
//
// Writers emit the canonical form (no comments, single spaces, trailing
// newline), so generated files re-serialize byte for byte after a parse.

struct ParsedGraph {
  MultiGraph graph;
  int k = 0;  // intended tree count from the header
};

ParsedGraph read_graph(std::istream& in);
ParsedGraph read_graph_file(const std::string& path);

void write_graph(std::ostream& out, const MultiGraph& g, int k);
std::string graph_to_string(const MultiGraph& g, int k);

// `m` is the expected edge count; `k` (if given) validates tree indices are
// in range, otherwise k is inferred as max index + 1.
Factorization read_factorization(std::istream& in, int m, std::optional<int> k = {});
Factorization read_factorization_file(const std::string& path, int m, std::optional<int> k = {});

void write_factorization(std::ostream& out, const Factorization& f);
std::string factorization_to_string(const Factorization& f);

// Writes g under dir as <tag>-<hash>.graph (creating dir if needed) and
// returns the path. Returns "" if dir is empty.
std::string persist_instance(const MultiGraph& g, int k, const std::string& dir,
                             const std::string& tag);

}  // namespace balsa
