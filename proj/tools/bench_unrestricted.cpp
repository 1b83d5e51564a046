// Compares the serial and OpenMP-parallel paths of the unrestricted
// synthesis enumeration on seeded libraries. Both paths must produce
// identical reports; the parallel one only spreads the per-component MDP
// solves across threads.

#include <chrono>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "composynth/embedded.hpp"
#include "composynth/gen.hpp"

using namespace composynth;

namespace {

double run_suite(uint64_t seed, int instances, int components, int states) {
  auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  for (int i = 0; i < instances; ++i) {
    Library lib = gen_library(rng, components, states, 2, 2);
    auto alpha = gen_library_index(rng, lib, 3);
    auto rep = synth_unrestricted(lib, alpha, SynthMode::Quantitative, Rational(1, 2));
    (void)rep;
  }
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  int instances = argc > 1 ? std::atoi(argv[1]) : 60;
  int components = argc > 2 ? std::atoi(argv[2]) : 10;
  int states = argc > 3 ? std::atoi(argv[3]) : 16;
  const uint64_t seed = 20240817;

#ifdef _OPENMP
  omp_set_num_threads(1);
  double serial = run_suite(seed, instances, components, states);
  omp_set_num_threads(omp_get_num_procs());
  double parallel = run_suite(seed, instances, components, states);
  std::cout << "instances=" << instances << " components=" << components << " states=" << states
            << "\n";
  std::cout << "serial:   " << serial << " s\n";
  std::cout << "parallel: " << parallel << " s (" << omp_get_num_procs() << " threads)\n";
  std::cout << "speedup:  " << (parallel > 0 ? serial / parallel : 0.0) << "x\n";
#else
  double serial = run_suite(seed, instances, components, states);
  std::cout << "serial: " << serial << " s (built without OpenMP)\n";
#endif
  return 0;
}
