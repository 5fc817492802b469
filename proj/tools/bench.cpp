// Compares the parallel pair-combining path against the serial reference on
// a batch of generated instances, and checks the results are identical (the
// parallel schedule must not change any output).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "balsa/balancek.hpp"
#include "balsa/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace balsa;

namespace {

struct Case {
  GenModel model;
  int n, k;
  uint64_t seed;
};

double run_batch(const std::vector<Case>& cases, std::vector<Factorization>* results) {
  results->clear();
  auto t0 = std::chrono::steady_clock::now();
  for (const Case& c : cases) {
    auto [g, planted] = generate(GeneratorSpec{c.model, c.n, c.k, c.seed});
    (void)planted;
    results->push_back(balance_k(g, c.k).factorization);
  }
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int scale = argc > 1 ? std::atoi(argv[1]) : 1;
  if (scale < 1) scale = 1;
  std::vector<Case> cases;
  for (int s = 0; s < scale; ++s)
    for (GenModel model : all_models())
      for (int k : {4, 6, 8})
        cases.push_back({model, 40, k, 100 + (uint64_t)s});

  std::vector<Factorization> serial, parallel;

#ifdef _OPENMP
  int max_threads = omp_get_max_threads();
  omp_set_num_threads(1);
#else
  int max_threads = 1;
#endif
  double t_serial = run_batch(cases, &serial);

#ifdef _OPENMP
  omp_set_num_threads(max_threads);
#endif
  double t_parallel = run_batch(cases, &parallel);

  bool identical = serial.size() == parallel.size();
  for (size_t i = 0; identical && i < serial.size(); ++i)
    identical = serial[i].assignment == parallel[i].assignment;

  std::printf("instances            %zu\n", cases.size());
  std::printf("serial (1 thread)    %.1f ms\n", t_serial);
  std::printf("parallel (%d thread%s) %.1f ms\n", max_threads, max_threads == 1 ? "" : "s",
              t_parallel);
  std::printf("speedup              %.2fx\n", t_parallel > 0 ? t_serial / t_parallel : 0.0);
  std::printf("outputs identical    %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
