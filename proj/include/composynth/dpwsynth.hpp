#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "composynth/composition.hpp"
#include "composynth/core.hpp"
#include "composynth/posgames.hpp"

namespace composynth {

/// Qualitative DPW realizability instance. The search for a composer is
/// complete only up to the memory bound.
struct DpwProblem {
  Library library;
  Dpw monitor;
  int mem_bound = 2;
};

ValidationReport validate_dpw_problem(const DpwProblem& p);

struct ProductMap {
  std::vector<std::tuple<int, int, int>> origin;  // (component, local state, dpw state)
  std::vector<int> obs_of_component;              // component -> observation id
  std::vector<std::vector<int>> obs_of_exit;      // [component][direction] -> observation id
};

/// Product of the library game with the monitor: the automaton advances on
/// the output of the state being left, priorities come from the automaton,
/// and only the component name (plus exit identity) is observable.
ObservedGame build_product_game(const DpwProblem& p, ProductMap* map = nullptr);

struct NotCollapsedStutterInvariant : std::runtime_error {
  explicit NotCollapsedStutterInvariant(const std::string& m) : std::runtime_error(m) {}
};

/// Reads a composer off a collapsed-stutter-invariant strategy on the
/// product game: composer states are the memory values that are stable
/// within a component block.
Composer composer_from_strategy(const StrategyTransducer& sigma, const DpwProblem& p);

/// Lifts an observation-based winner of the collapsed reduction back to a
/// collapsed-stutter-invariant strategy on the product game, following the
/// recurrent-memory construction.
ObsStrategy collapse_obs_strategy(const ObsStrategy& s, const ObservedGame& product);

struct DpwSynthReport {
  bool realizable = false;
  std::optional<Composer> composer;
  int mem_bound = 0;
  long explored = 0;
  std::string note;
};

/// build_product_game -> reduce_collapsed -> bounded_memory_search ->
/// composer extraction, with the result certified by an independent
/// value_dpw check. A negative answer always carries the bound.
DpwSynthReport synth_dpw_qualitative(const DpwProblem& p);

}  // namespace composynth
