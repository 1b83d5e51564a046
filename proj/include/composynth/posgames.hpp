#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "composynth/game.hpp"
#include "composynth/solve.hpp"

namespace composynth {

/// Stochastic game with an observation map for player 1.
struct ObservedGame {
  StochasticGame game;
  std::vector<std::string> obs_names;
  std::vector<int> obs;  // per state, total

  int num_obs() const { return static_cast<int>(obs_names.size()); }
};

ValidationReport validate_observed(const ObservedGame& og);

enum class StrategyClass { ObservationBased, StutterInvariant, CollapsedStutterInvariant };

/// Drops repeated consecutive observations from a state sequence.
std::vector<int> collapse(const std::vector<int>& states, const ObservedGame& og);

/// Exact classification on the reachable strategy/game product:
/// observation-based compares action choices across prefixes with equal
/// observation sequences; stutter-invariance requires the action to
/// survive observation repeats; the collapsed variant requires the memory
/// itself to freeze while the observation repeats.
std::set<StrategyClass> classify_strategy(const StrategyTransducer& sigma,
                                          const ObservedGame& og);

/// Output of the stutter reductions: the reduced observed game plus the
/// encoding of its states.
struct ReducedGame {
  ObservedGame og;
  int bottom = -1;
  int num_a1 = 0;
  int stall_priority = 2;       // even, parity-neutral, on every barred copy
  std::vector<int> base_state;  // per reduced state, original state (-1 for bottom)
  std::vector<int> stored;      // 0 = nothing, a+1 = action a   (-1 for bottom)
  std::vector<bool> barred;

  int encode(int s, int stored_tag, bool is_barred) const;
};

/// The collapsed-stutter-invariant reduction: the last player-1 action is
/// stored while the observation repeats (a wrong action loses), and after
/// every move player 2 may stall on a barred copy for arbitrarily many
/// rounds. Barred copies carry the neutral even priority, so stalling
/// forever hands the parity to player 1.
ReducedGame reduce_collapsed(const ObservedGame& og);

/// The stutter-invariant variant: identical, except the barred copies
/// have no stalling loop and bounce straight back.
ReducedGame reduce_stutter(const ObservedGame& og);

/// Routes every transition through a fresh dummy state with a fresh
/// observation and the priority of the target, so consecutive
/// observations always differ.
ObservedGame lower_bound_gadget(const ObservedGame& og);

struct ContainsBottom : std::runtime_error {
  explicit ContainsBottom(const std::string& m) : std::runtime_error(m) {}
};

/// Removes barred states from a reduced-game play and projects back to
/// original states.
std::vector<int> project_play(const std::vector<int>& play, const ReducedGame& rg);

/// Finite-memory strategy reading observations only.
struct ObsStrategy {
  int num_memory = 1;
  int initial_memory = 0;
  std::vector<std::vector<int>> update;  // [memory][observation]
  std::vector<int> next;                 // [memory] -> player-1 action

  StrategyTransducer to_transducer(const ObservedGame& og) const;
};

struct BoundTooLargeForEnumeration : std::runtime_error {
  explicit BoundTooLargeForEnumeration(const std::string& m) : std::runtime_error(m) {}
};

struct SearchResult {
  std::optional<ObsStrategy> strategy;
  int bound = 0;        // the bound that was searched; None means only "no winner within bound"
  long explored = 0;    // enumeration nodes visited
};

/// Enumerates observation-reading transducers with at most mem_bound
/// memory states, canonically up to memory renaming and restricted to the
/// (memory, observation) pairs that are actually reachable, and returns
/// the first almost-sure winner from the game's initial state. A None is
/// always relative to the bound.
SearchResult bounded_memory_search(const ObservedGame& og, int mem_bound,
                                   long node_limit = 20000000);

}  // namespace composynth
