#pragma once

#include <string>
#include <vector>

#include "composynth/composition.hpp"
#include "composynth/core.hpp"

namespace composynth {

/// Probabilistic word automaton with a parity index: a probabilistic
/// transducer without outputs and without exits.
struct ProbabilisticAutomaton {
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  int initial = 0;
  std::vector<std::vector<Distribution>> delta;  // [state][letter], total
  IndexFunction priorities;

  int num_states() const { return static_cast<int>(states.size()); }
};

ValidationReport validate_pa(const ProbabilisticAutomaton& a);

/// One single-exit component per input letter: the environment names a
/// state of the automaton, the component replays that state's transition
/// under this component's letter, then exits.
Library pa_to_library(const ProbabilisticAutomaton& a);

/// The monitor tracking the automaton state through the outputs: phase 0
/// checks the environment's guess, phase 1 follows the probabilistic
/// move, phases 2 and 3 consume the exit and start markers. A wrong guess
/// is accepted immediately.
Dpw pa_to_dpw(const ProbabilisticAutomaton& a);

/// Lasso letters name components; the composer is the prefix-plus-cycle
/// walk over them.
Composer lasso_to_composer(const Lasso& w, int num_components);

/// For width-one libraries the transfer map is a functional graph, so the
/// walk from the initial state is eventually periodic.
Lasso composer_to_lasso(const Composer& c);

/// Independent oracle for the acceptance probability of a lasso word:
/// the chain over (state, word position) is classified by its bottom
/// components, no composition machinery involved.
Rational pa_lasso_value(const ProbabilisticAutomaton& a, const Lasso& w);

}  // namespace composynth
