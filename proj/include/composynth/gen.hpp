#pragma once

#include <cstdint>

#include "composynth/core.hpp"
#include "composynth/embedded.hpp"
#include "composynth/pagadget.hpp"
#include "composynth/posgames.hpp"

namespace composynth {

/// Deterministic splitmix64 stream; identical output on every platform,
/// which keeps seeded fixtures and test suites byte-reproducible.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  int upto(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<uint64_t>(n)); }
  bool flip() { return (next() & 1) != 0; }
};

Distribution gen_distribution(Rng& rng, int num_targets, int max_support = 3);

Library gen_library(Rng& rng, int num_components, int max_states, int width, int num_inputs);

std::vector<IndexFunction> gen_library_index(Rng& rng, const Library& lib, int max_priority);

Composer gen_composer(Rng& rng, const Library& lib, int num_states);

/// Random non-blocking relation; when must_allow is given, every transfer
/// edge of that composer is included so it stays compatible.
ExitControlRelation gen_relation(Rng& rng, int width, int num_components,
                                 const Composer* must_allow = nullptr);

StochasticGame gen_game(Rng& rng, int num_states, int num_a1, int num_a2, int max_priority,
                        bool deterministic);

/// Deterministic, strictly alternating, total on player-2 rows, starting
/// at a player-2 state: ready for the hardness gadget.
StochasticGame gen_alternating_game(Rng& rng, int num_p2, int num_p1, int num_a1, int num_a2,
                                    int max_priority);

ObservedGame gen_observed_game(Rng& rng, int num_states, int num_a1, int num_a2,
                               int max_priority, int num_obs);

ProbabilisticAutomaton gen_pa(Rng& rng, int num_states, int num_letters, int max_priority);

Dpw gen_dpw(Rng& rng, const std::vector<std::string>& alphabet, int num_states,
            int max_priority);

}  // namespace composynth
