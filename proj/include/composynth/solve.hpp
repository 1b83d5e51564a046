#pragma once

#include <utility>
#include <vector>

#include "composynth/chain.hpp"
#include "composynth/game.hpp"

namespace composynth {

// ---------------------------------------------------------------------------
// MDP analysis. The controller maximizes; minimizing variants go through the
// parity complement (priorities shifted by one).
// ---------------------------------------------------------------------------

/// End component: a set of states together with the actions that stay
/// inside it.
struct EndComponent {
  std::vector<int> states;
  std::vector<std::vector<int>> actions;  // aligned with states
};

std::vector<EndComponent> mec_decomposition(const Mdp& m);

/// Union of all end components whose minimum priority is even, found by
/// recursively peeling minimal odd priorities out of maximal end
/// components. The witness policy cycles through each component's minimal
/// priority states.
std::vector<bool> winning_ec_union(const Mdp& m, MemorylessStrategy* witness = nullptr);

/// States from which the controller can reach the target with probability
/// one, with a witness policy on that set.
std::vector<bool> mdp_prob1(const Mdp& m, const std::vector<bool>& target,
                            MemorylessStrategy* witness = nullptr);

/// Exact maximal reachability values via policy iteration with exact
/// per-policy chain evaluation.
std::vector<Rational> mdp_max_reach(const Mdp& m, const std::vector<bool>& target,
                                    MemorylessStrategy* witness = nullptr);

/// Exact minimal reachability values.
std::vector<Rational> mdp_min_reach(const Mdp& m, const std::vector<bool>& target,
                                    MemorylessStrategy* witness = nullptr);

/// Qualitative: states where the controller wins the parity objective
/// almost surely; graph-based, no numeric probabilities.
std::pair<std::vector<bool>, MemorylessStrategy> mdp_almost_sure_parity(const Mdp& m);

/// Exact per-state maximal probability of the parity objective.
std::pair<std::vector<Rational>, MemorylessStrategy> mdp_parity_value(const Mdp& m);

/// Exact per-state minimal probability of the parity objective
/// (the adversarial environment view).
std::pair<std::vector<Rational>, MemorylessStrategy> mdp_min_parity_value(const Mdp& m);

/// Graph-based set where the minimal parity probability is still 1, i.e.
/// the controller cannot spoil the objective.
std::vector<bool> mdp_min_value_one(const Mdp& m);

/// Evaluates a fixed policy exactly: the parity probability of the induced
/// chain, per state.
std::vector<Rational> mdp_policy_parity(const Mdp& m, const MemorylessStrategy& policy);

// ---------------------------------------------------------------------------
// Turn-based stochastic games.
// ---------------------------------------------------------------------------

struct AlmostSureResult {
  std::vector<bool> winning;   // player-1 almost-sure region
  MemorylessStrategy witness;  // player-1, total on S1, certified
};

/// Almost-sure winning region for player 1 under min-parity, with a pure
/// memoryless witness. The complement is exactly the region where player 2
/// can keep the satisfaction probability below one. The witness is
/// re-verified against the opponent MDP before returning.
AlmostSureResult almost_sure_parity(const StochasticGame& g);

struct ParityValueResult {
  std::vector<Rational> value;
  MemorylessStrategy strategy1;
  MemorylessStrategy strategy2;
};

/// Exact game values with optimal pure memoryless witnesses for both
/// players. Certification is unconditional: each returned strategy is
/// checked by an exact best-response MDP solve, and the two bounds must
/// meet; any gap raises an internal error.
ParityValueResult parity_value(const StochasticGame& g);

/// Fixes one player's memoryless choices without blowing up the state
/// space; the remaining choices belong to the other player.
Mdp fix_memoryless(const StochasticGame& g, const MemorylessStrategy& s, bool fix_player1);

/// Exact values of the reachability game (player 1 maximizes the
/// probability of visiting the target), via Hoffman-Karp style strategy
/// iteration with exact evaluation.
struct ReachGameResult {
  std::vector<Rational> value;
  MemorylessStrategy strategy1;
  MemorylessStrategy strategy2;
};
ReachGameResult reach_game_value(const StochasticGame& g, const std::vector<bool>& target);

}  // namespace composynth
