#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "composynth/core.hpp"

namespace composynth {

/// Turn-based stochastic game. Every state belongs to exactly one player;
/// delta[s][a] is the distribution played when the owner of s picks action
/// a, and an empty distribution marks a disabled action. Every state must
/// keep at least one enabled action.
struct StochasticGame {
  std::vector<std::string> state_names;
  std::vector<bool> owner1;  // true: player 1 moves at s
  std::vector<std::string> actions1;
  std::vector<std::string> actions2;
  std::vector<std::vector<Distribution>> delta;  // [state][action of owner]
  IndexFunction priorities;
  int initial = 0;

  int num_states() const { return static_cast<int>(state_names.size()); }
  int num_actions(int s) const { return static_cast<int>(delta[s].size()); }
  bool enabled(int s, int a) const { return a < num_actions(s) && !delta[s][a].empty(); }
  bool deterministic() const;

  /// Swaps the two players and shifts every priority by one; the value of
  /// the swapped game is one minus the value of the original.
  StochasticGame swap_players() const;
};

/// One-player special case: the single controller resolves every choice.
/// Solvers treat the controller as maximizing the parity objective.
struct Mdp {
  std::vector<std::string> state_names;
  std::vector<std::string> action_names;
  std::vector<std::vector<Distribution>> delta;  // [state][action]
  IndexFunction priorities;
  int initial = 0;

  int num_states() const { return static_cast<int>(state_names.size()); }
  bool enabled(int s, int a) const {
    return a < static_cast<int>(delta[s].size()) && !delta[s][a].empty();
  }
};

/// Pure memoryless strategy for one player: a total choice of enabled
/// action on that player's states (-1 elsewhere).
struct MemorylessStrategy {
  std::vector<int> choice;  // [state] -> action id, -1 on opponent states
};

/// Finite-memory deterministic strategy. On reading state s with memory m
/// the memory becomes update[m][s] and, at player-1 states, the action
/// next[update[m][s]] is played.
struct StrategyTransducer {
  int num_memory = 1;
  int initial_memory = 0;
  std::vector<std::vector<int>> update;  // [memory][state] -> memory
  std::vector<int> next;                 // [memory] -> action

  int step(int m, int s) const { return update[m][s]; }
};

StrategyTransducer memoryless_to_transducer(const MemorylessStrategy& s,
                                            const StochasticGame& g);

struct DisabledAction : std::runtime_error {
  explicit DisabledAction(const std::string& m) : std::runtime_error(m) {}
};

ValidationReport validate_game(const StochasticGame& g);
ValidationReport validate_mdp(const Mdp& m);

/// Product of a game with a player-1 strategy transducer: player-1 moves
/// are fixed by the transducer, player-2 keeps all choices, priorities are
/// lifted from the game.
Mdp apply_strategy(const StochasticGame& g, const StrategyTransducer& sigma);

}  // namespace composynth
