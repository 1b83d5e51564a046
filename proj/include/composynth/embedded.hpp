#pragma once

#include <optional>
#include <string>
#include <vector>

#include "composynth/composition.hpp"
#include "composynth/core.hpp"
#include "composynth/solve.hpp"

namespace composynth {

enum class SynthMode { Qualitative, Quantitative };

/// Embedded parity realizability instance: priorities sit directly on the
/// component states and the composer must respect the exit relation.
struct EmbeddedProblem {
  Library library;
  ExitControlRelation relation;
  std::vector<IndexFunction> alpha;  // per component, total
  SynthMode mode = SynthMode::Qualitative;
  Rational eta = Rational(1, 2);  // quantitative threshold, in (0,1)
};

ValidationReport validate_problem(const EmbeddedProblem& p);

/// Bookkeeping for the game built from a library: which (component, state)
/// pair a game state came from.
struct GameMap {
  std::vector<std::pair<int, int>> origin;  // game state -> (component, local state)
  std::vector<std::vector<int>> state_of;   // [component][local state] -> game state
  int bottom = -1;
};

/// The perfect-information stochastic game of the upper-bound reduction:
/// non-exit states replay the component, exits belong to player 1 whose
/// actions name the next component; disallowed choices lead to the odd
/// absorbing state.
StochasticGame build_game(const EmbeddedProblem& p, GameMap* map = nullptr);

struct InvalidStrategy : std::runtime_error {
  explicit InvalidStrategy(const std::string& m) : std::runtime_error(m) {}
};
struct IncompatibleComposer : std::runtime_error {
  explicit IncompatibleComposer(const std::string& m) : std::runtime_error(m) {}
};
struct NotAlternating : std::runtime_error {
  explicit NotAlternating(const std::string& m) : std::runtime_error(m) {}
};

/// One composer state per component; transfers read off the memoryless
/// strategy at the exit states.
Composer strategy_to_composer(const MemorylessStrategy& sigma, const EmbeddedProblem& p);

/// The composer as a finite-memory game strategy: memory follows the
/// transfer function at exits and is frozen elsewhere.
StrategyTransducer composer_to_strategy(const Composer& c, const EmbeddedProblem& p);

struct SynthReport {
  bool realizable = false;
  std::optional<Composer> composer;
  Rational value = Rational(0);      // game value at the start state
  Rational certified = Rational(0);  // value of the returned composer's composition
  std::string method;
};

/// Solves the embedded realizability problem through the game reduction;
/// any returned composer is re-certified by an independent value
/// computation on its composition.
SynthReport synth_embedded(const EmbeddedProblem& p);

/// Polynomial-time path for the unrestricted exit relation: all exits
/// funnel through a single player-1 hub, leaving only one memoryless
/// choice per component to try.
SynthReport synth_unrestricted(const Library& lib, const std::vector<IndexFunction>& alpha,
                               SynthMode mode, const Rational& eta = Rational(1, 2));

/// Inserts opposite-owner dummy states so that the two players strictly
/// alternate; dummies copy the priority of their source, and player-2
/// rows are totalized by duplicating the smallest enabled action.
StochasticGame make_alternating(const StochasticGame& g);

bool is_alternating(const StochasticGame& g);

/// The hardness gadget: one deterministic component per player-2 state,
/// one exit direction per player-1 state; the exit relation encodes the
/// player-1 moves. The game must be deterministic and strictly
/// alternating with a player-2 initial state.
EmbeddedProblem parity_game_to_library(const StochasticGame& g, SynthMode mode,
                                       const Rational& eta = Rational(1, 2));

}  // namespace composynth
