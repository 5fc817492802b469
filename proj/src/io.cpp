#include "balsa/io.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace balsa {

namespace {

// next non-blank, non-comment line; false at EOF
bool next_data_line(std::istream& in, std::string* line) {
  while (std::getline(in, *line)) {
    size_t i = line->find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if ((*line)[i] == '#') continue;
    return true;
  }
  return false;
}

long long parse_int(std::istringstream& ss, const char* what) {
  long long v;
  if (!(ss >> v)) throw ParseError(std::string("expected ") + what);
  return v;
}

void expect_line_end(std::istringstream& ss, const std::string& line) {
  std::string rest;
  if (ss >> rest) throw ParseError("trailing tokens on line: " + line);
}

}  // namespace

ParsedGraph read_graph(std::istream& in) {
  std::string line;
  if (!next_data_line(in, &line)) throw ParseError("missing graph header");
  std::istringstream header(line);
  long long n = parse_int(header, "vertex count");
  long long m = parse_int(header, "edge count");
  long long k = parse_int(header, "tree count");
  expect_line_end(header, line);
  if (n < 0 || m < 0 || k < 1) throw ParseError("bad header values");

  std::vector<std::pair<int, int>> ends;
  ends.reserve(m);
  for (long long i = 0; i < m; ++i) {
    if (!next_data_line(in, &line))
      throw ParseError("expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    std::istringstream ss(line);
    long long u = parse_int(ss, "edge endpoint");
    long long v = parse_int(ss, "edge endpoint");
    expect_line_end(ss, line);
    ends.push_back({(int)u, (int)v});
  }
  if (next_data_line(in, &line)) throw ParseError("unexpected data after edge list: " + line);
  ParsedGraph pg;
  pg.graph = MultiGraph::build((int)n, ends);
  pg.k = (int)k;
  return pg;
}

ParsedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const MultiGraph& g, int k) {
  out << g.vertex_count() << ' ' << g.edge_count() << ' ' << k << '\n';
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    EdgeEnds p = g.ends(e);
    out << p.u << ' ' << p.v << '\n';
  }
}

std::string graph_to_string(const MultiGraph& g, int k) {
  std::ostringstream ss;
  write_graph(ss, g, k);
  return ss.str();
}

Factorization read_factorization(std::istream& in, int m, std::optional<int> k) {
  std::string line;
  Factorization f;
  f.assignment.resize(m);
  int max_tree = -1;
  for (int i = 0; i < m; ++i) {
    if (!next_data_line(in, &line))
      throw ParseError("expected " + std::to_string(m) + " factorization lines, got " +
                       std::to_string(i));
    std::istringstream ss(line);
    long long id = parse_int(ss, "edge id");
    long long t = parse_int(ss, "tree index");
    expect_line_end(ss, line);
    if (id != i) throw ParseError("edge ids must appear in order; saw " + std::to_string(id) +
                                  " at position " + std::to_string(i));
    if (t < 0) throw ParseError("negative tree index");
    if (k && t >= *k)
      throw ParseError("tree index " + std::to_string(t) + " out of range for k=" +
                       std::to_string(*k));
    f.assignment[i] = (int)t;
    max_tree = std::max(max_tree, (int)t);
  }
  if (next_data_line(in, &line)) throw ParseError("unexpected data after factorization: " + line);
  f.k = k ? *k : max_tree + 1;
  if (f.k < 1) f.k = 1;
  return f;
}

Factorization read_factorization_file(const std::string& path, int m, std::optional<int> k) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_factorization(in, m, k);
}

void write_factorization(std::ostream& out, const Factorization& f) {
  for (size_t e = 0; e < f.assignment.size(); ++e)
    out << e << ' ' << f.assignment[e] << '\n';
}

std::string factorization_to_string(const Factorization& f) {
  std::ostringstream ss;
  write_factorization(ss, f);
  return ss.str();
}

std::string persist_instance(const MultiGraph& g, int k, const std::string& dir,
                             const std::string& tag) {
  if (dir.empty()) return "";
  std::string body = graph_to_string(g, k);
  // FNV-1a over the canonical serialization
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : body) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char hex[17];
  snprintf(hex, sizeof hex, "%016llx", (unsigned long long)h);
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + tag + "-" + hex + ".graph";
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace balsa
