#pragma once

#include <vector>

#include "composynth/core.hpp"

namespace composynth {

/// Finite Markov chain; step[s] must be stochastic for every state.
struct Chain {
  std::vector<Distribution> step;
  int num_states() const { return static_cast<int>(step.size()); }
};

/// Strongly connected components in reverse topological order (component 0
/// has no edges into later components... successors have lower ids).
/// Returns the component id per state.
std::vector<int> chain_sccs(const Chain& c, int* num_components);

/// Exact probability of eventually visiting the target set, per state.
std::vector<Rational> chain_reach(const Chain& c, const std::vector<bool>& target);

/// Exact probability that the minimum priority visited infinitely often is
/// even: classifies bottom SCCs by their minimum priority and absorbs.
std::vector<Rational> chain_parity(const Chain& c, const IndexFunction& prio);

}  // namespace composynth
