// balsa: balanced spanning-tree factorizations of multigraphs.
//
// Exit codes: 0 success, 1 usage, 2 contract failure (bad input, impossible
// request), 3 research event (a certified bound the implementation could not
// meet; the instance is persisted for inspection).

#include <chrono>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "balsa/balance2.hpp"
#include "balsa/balancek.hpp"
#include "balsa/errors.hpp"
#include "balsa/exchange.hpp"
#include "balsa/graph.hpp"
#include "balsa/io.hpp"
#include "balsa/oracle.hpp"
#include "balsa/packing.hpp"
#include "balsa/rational.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace balsa;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitContract = 2;
constexpr int kExitResearch = 3;

struct Output {
  std::string path;  // empty = stdout
  std::ostream& stream() {
    if (path.empty()) return std::cout;
    if (!file.is_open()) {
      file.open(path);
      if (!file) throw Error("cannot open output file " + path);
    }
    return file;
  }
 private:
  std::ofstream file;
};

void print_report(std::ostream& out, const BalanceReport& rep) {
  out << "max imbalance " << rep.max_imbalance << "\n";
  out << "max deviation " << rat_string(rep.max_deviation) << " ("
      << rat_decimal(rep.max_deviation, 6) << ")\n";
}

int cmd_verify(const std::string& gpath, const std::string& fpath, Output& out,
               const std::string& format) {
  ParsedGraph pg = read_graph_file(gpath);
  Factorization f = read_factorization_file(fpath, pg.graph.edge_count(), pg.k);
  ValidityReport rep = verify_factorization(pg.graph, f);
  std::ostream& os = out.stream();
  if (!rep.valid()) {
    for (const TreeDefect& d : rep.defects)
      os << "tree " << d.tree << ": " << d.detail << "\n";
    os << "invalid\n";
    return kExitContract;
  }
  BalanceReport bal = balance_report(pg.graph, f);
  if (format == "csv") {
    os << "# balsa-verify-v1 valid,max_imbalance,max_deviation\n";
    os << "1," << bal.max_imbalance << ',' << rat_decimal(bal.max_deviation, 9) << "\n";
  } else {
    os << "valid factorization into " << f.k << " spanning trees\n";
    print_report(os, bal);
  }
  return kExitOk;
}

int cmd_pack(const std::string& gpath, std::optional<int> k_opt, Output& out) {
  ParsedGraph pg = read_graph_file(gpath);
  int k = k_opt.value_or(pg.k);
  PackingResult res = pack(pg.graph, k);
  if (!res.ok()) {
    std::cerr << res.deficiency->reason << "\n";
    if (!res.deficiency->vertex_set.empty()) {
      std::cerr << "witness set:";
      for (VertexId v : res.deficiency->vertex_set) std::cerr << ' ' << v;
      std::cerr << " (" << res.deficiency->edges_inside << " edges, capacity "
                << res.deficiency->capacity << ")\n";
    }
    return kExitContract;
  }
  write_factorization(out.stream(), *res.factorization);
  std::cerr << "packed " << k << " spanning trees\n";
  return kExitOk;
}

int cmd_balance2(const std::string& gpath, Output& out, const std::string& persist_dir) {
  ParsedGraph pg = read_graph_file(gpath);
  Balance2Options opts;
  opts.persist_dir = persist_dir;
  Balance2Result res = balance_double_tree(pg.graph, opts);
  write_factorization(out.stream(), res.factorization);
  std::cerr << "reductions applied: " << res.reductions.size();
  for (ReductionTag t : res.reductions) std::cerr << " " << tag_name(t);
  std::cerr << "\n";
  print_report(std::cerr, res.report);
  std::cerr << "certified bound 5\n";
  return kExitOk;
}

int cmd_balancek(const std::string& gpath, std::optional<int> k_opt, Output& out,
                 const std::string& persist_dir, int max_iters, bool verbose) {
  ParsedGraph pg = read_graph_file(gpath);
  int k = k_opt.value_or(pg.k);
  BalanceKOptions opts;
  opts.iteration_cap = max_iters;
  opts.persist_dir = persist_dir;
  if (verbose) {
    opts.iteration_log = &std::cerr;
    opts.track_envelope = true;
  }
  BalanceKResult res = balance_k(pg.graph, k, opts);
  write_factorization(out.stream(), res.factorization);
  print_report(std::cerr, res.report);
  std::cerr << "certified deviation bound " << rat_string(res.certified) << " ("
            << rat_decimal(res.certified, 6) << "), extraction rounds " << res.iterations
            << "\n";
  return kExitOk;
}

int cmd_audit(const std::string& gpath, const std::string& fpath, Output& out,
              const std::string& format) {
  ParsedGraph pg = read_graph_file(gpath);
  Factorization f = read_factorization_file(fpath, pg.graph.edge_count(), pg.k);
  ChargeReport rep = discharge_audit(pg.graph, f);
  std::ostream& os = out.stream();
  if (format == "csv") {
    os << "# balsa-audit-v1 vertex,charge\n";
    for (VertexId v = 0; v < pg.graph.vertex_count(); ++v)
      os << v << ',' << rat_decimal(rep.final_charge[v], 9) << "\n";
  } else {
    for (VertexId v = 0; v < pg.graph.vertex_count(); ++v)
      os << "vertex " << v << ": " << rat_string(rep.final_charge[v]) << "\n";
  }
  os << (format == "csv" ? "# " : "") << "total " << rat_string(rep.total) << ", min "
     << rat_string(rep.min_charge) << "\n";
  return kExitOk;
}

int cmd_oracle(const std::string& gpath, std::optional<int> k_opt, Output& out,
               std::optional<int> search_target, int instances, int max_vertices,
               uint64_t seed) {
  if (search_target) {
    SearchOptions sopts;
    sopts.target = *search_target;
    sopts.instances = instances;
    sopts.max_vertices = max_vertices;
    sopts.seed = seed;
    std::vector<SearchHit> hits = search_lower_bound(sopts);
    std::ostream& os = out.stream();
    os << "# balsa-oracle-search-v1 id,n,m,optimal\n";
    for (size_t i = 0; i < hits.size(); ++i)
      os << i << ',' << hits[i].graph.vertex_count() << ',' << hits[i].graph.edge_count()
         << ',' << hits[i].optimal << "\n";
    if (hits.empty())
      std::cerr << "no witness with optimal imbalance >= " << *search_target << " among "
                << instances << " instances (n <= " << max_vertices << ")\n";
    else
      std::cerr << hits.size() << " witness instance(s) found\n";
    return kExitOk;
  }
  ParsedGraph pg = read_graph_file(gpath);
  int k = k_opt.value_or(pg.k);
  OracleResult res = optimal_imbalance(pg.graph, k);
  if (res.optimal < 0) {
    std::cerr << "no valid factorization into " << k << " spanning trees\n";
    return kExitContract;
  }
  std::cerr << "optimal max imbalance " << res.optimal << " (" << res.examined
            << " factorizations examined)\n";
  write_factorization(out.stream(), *res.witness);
  return kExitOk;
}

int cmd_gen(int n, int k, const std::string& model, uint64_t seed, Output& out) {
  std::optional<GenModel> parsed = model_from_name(model);
  if (!parsed) throw Error("unknown generator model " + model);
  GeneratorSpec spec;
  spec.model = *parsed;
  spec.n = n;
  spec.k = k;
  spec.seed = seed;
  auto [graph, planted] = generate(spec);
  write_graph(out.stream(), graph, k);
  std::cerr << "n=" << graph.vertex_count() << " m=" << graph.edge_count() << " k=" << k
            << " planted factorization valid\n";
  return kExitOk;
}

struct SuiteRow {
  GenModel model;
  int n, k;
  uint64_t seed;
};

std::vector<SuiteRow> default_suite() {
  std::vector<SuiteRow> rows;
  for (GenModel model : all_models())
    for (int n : {10, 20, 40, 60})
      for (int k : {2, 3, 4, 5})
        for (uint64_t seed : {1ull, 2ull}) rows.push_back({model, n, k, seed});
  for (GenModel model : all_models())
    for (int n : {100, 200}) rows.push_back({model, n, 2, 1});
  return rows;
}

std::vector<SuiteRow> read_suite(const std::string& path) {
  if (path == "default") return default_suite();
  std::ifstream in(path);
  if (!in) throw Error("cannot open suite file " + path);
  std::vector<SuiteRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos || line[i] == '#') continue;
    std::istringstream ss(line);
    std::string model;
    SuiteRow row;
    if (!(ss >> model >> row.n >> row.k >> row.seed))
      throw ParseError("bad suite line: " + line);
    std::optional<GenModel> parsed = model_from_name(model);
    if (!parsed) throw ParseError("unknown generator model in suite: " + model);
    row.model = *parsed;
    rows.push_back(row);
  }
  return rows;
}

int cmd_experiment(const std::string& suite, Output& out, int max_iters, int workers,
                   const std::string& persist_dir) {
  std::vector<SuiteRow> rows = read_suite(suite);
  std::vector<std::string> lines(rows.size());

#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif

#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < rows.size(); ++i) {
    const SuiteRow& row = rows[i];
    GeneratorSpec spec{row.model, row.n, row.k, row.seed};
    auto [graph, planted] = generate(spec);
    (void)planted;
    BalanceKOptions opts;
    opts.iteration_cap = max_iters;
    opts.persist_dir = persist_dir;
    std::string status = "ok";
    int imbalance = -1;
    std::string deviation = "", certified = rat_decimal(feasible_constant(row.k), 9);
    long long iterations = 0;
    auto t0 = std::chrono::steady_clock::now();
    try {
      BalanceKResult res = balance_k(graph, row.k, opts);
      imbalance = res.report.max_imbalance;
      deviation = rat_decimal(res.report.max_deviation, 9);
      iterations = res.iterations;
    } catch (const BoundNotCertifiedError&) {
      status = "bound-not-certified";
    } catch (const IterationCapExceededError&) {
      status = "iteration-cap-exceeded";
    } catch (const Error& e) {
      status = std::string("error: ") + e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    std::ostringstream ss;
    ss << i << ',' << graph.vertex_count() << ',' << graph.edge_count() << ',' << row.k << ','
       << row.seed << ',' << model_name(row.model) << ',' << imbalance << ',' << deviation
       << ',' << certified << ',' << iterations << ',' << ms << ',' << status;
    lines[i] = ss.str();
  }

  std::ostream& os = out.stream();
  os << "# balsa-experiment-v1 id,n,m,k,seed,model,imbalance,deviation,certified,"
        "iterations,wall_ms,status\n";
  for (const std::string& line : lines) os << line << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced spanning-tree factorizations of multigraphs"};
  app.require_subcommand(1);

  Output out;
  std::string format = "text";
  uint64_t seed = 1;
  int max_iters = 1000;
  std::string persist_dir = "research-events";
  app.add_option("--out", out.path, "write primary output to this file instead of stdout");
  app.add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  app.add_option("--seed", seed, "random seed");
  app.add_option("--max-iters", max_iters, "extraction iteration cap");
  app.add_option("--persist-dir", persist_dir, "directory for persisted instances");

  std::string gpath, fpath, model = "uniform-random-trees", suite = "default";
  std::optional<int> k_opt;
  int n = 10, instances = 200, max_vertices = 8, workers = 0;
  std::optional<int> search_target;
  bool verbose = false;

  CLI::App* verify = app.add_subcommand("verify", "check a factorization against its graph");
  verify->add_option("graph", gpath)->required();
  verify->add_option("factorization", fpath)->required();

  CLI::App* packc = app.add_subcommand("pack", "split a graph into k spanning trees");
  packc->add_option("graph", gpath)->required();
  packc->add_option("-k", k_opt, "tree count (default: graph header)");

  CLI::App* bal2 = app.add_subcommand("balance2", "2-balance a double tree (imbalance <= 5)");
  bal2->add_option("graph", gpath)->required();

  CLI::App* balk = app.add_subcommand("balancek", "k-balance a k-multiple tree");
  balk->add_option("graph", gpath)->required();
  balk->add_option("-k", k_opt, "tree count (default: graph header)");
  balk->add_flag("--verbose", verbose, "log extraction rounds and track envelopes");

  CLI::App* audit = app.add_subcommand("audit", "discharging audit of a 2-factorization");
  audit->add_option("graph", gpath)->required();
  audit->add_option("factorization", fpath)->required();

  CLI::App* oraclec = app.add_subcommand("oracle", "exhaustive optimum on small instances");
  oraclec->add_option("graph", gpath);
  oraclec->add_option("-k", k_opt, "tree count (default: graph header)");
  oraclec->add_option("--search-target", search_target,
                      "search seeded instances for optimal imbalance >= target");
  oraclec->add_option("--instances", instances, "instances to try in search mode");
  oraclec->add_option("--max-vertices", max_vertices, "vertex cap in search mode");

  CLI::App* gen = app.add_subcommand("gen", "generate a seeded k-multiple tree");
  gen->add_option("-n", n, "vertex count")->required();
  gen->add_option("-k", k_opt, "tree count");
  gen->add_option("--model", model,
                  "uniform-random-trees | star-heavy | path-heavy | parallel-rich");

  CLI::App* expc = app.add_subcommand("experiment", "run a suite, emit CSV rows");
  expc->add_option("--suite", suite, "suite file or 'default'");
  expc->add_option("--workers", workers, "worker threads (0 = library default)");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(gpath, fpath, out, format);
    if (packc->parsed()) return cmd_pack(gpath, k_opt, out);
    if (bal2->parsed()) return cmd_balance2(gpath, out, persist_dir);
    if (balk->parsed())
      return cmd_balancek(gpath, k_opt, out, persist_dir, max_iters, verbose);
    if (audit->parsed()) return cmd_audit(gpath, fpath, out, format);
    if (oraclec->parsed()) {
      if (!search_target && gpath.empty()) {
        std::cerr << "oracle needs a graph file or --search-target\n";
        return kExitUsage;
      }
      return cmd_oracle(gpath, k_opt, out, search_target, instances, max_vertices, seed);
    }
    if (gen->parsed()) return cmd_gen(n, k_opt.value_or(2), model, seed, out);
    if (expc->parsed()) return cmd_experiment(suite, out, max_iters, workers, persist_dir);
  } catch (const BoundNotCertifiedError& e) {
    std::cerr << "research event: " << e.what() << "\n";
    if (!e.persisted_path.empty()) std::cerr << "instance persisted: " << e.persisted_path << "\n";
    return kExitResearch;
  } catch (const IterationCapExceededError& e) {
    std::cerr << "research event: " << e.what() << "\n";
    if (!e.persisted_path.empty()) std::cerr << "instance persisted: " << e.persisted_path << "\n";
    return kExitResearch;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitContract;
  }
  return kExitUsage;
}
