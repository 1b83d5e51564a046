#pragma once

#include <string>
#include <vector>

#include "composynth/core.hpp"
#include "composynth/game.hpp"

namespace composynth {

/// Exitless probabilistic transducer obtained by wiring component
/// instances together: within an instance the component's transitions are
/// copied, and each exit jumps (for every input letter) to the start state
/// of the instance named by the composer.
struct ComposedTransducer {
  std::vector<std::string> input_letters;
  std::vector<std::string> output_letters;
  std::vector<std::string> state_names;
  std::vector<std::pair<int, int>> origin;  // (composer instance, component-local state)
  int initial = 0;
  std::vector<std::vector<Distribution>> delta;  // total, no exits
  std::vector<int> labels;

  int num_states() const { return static_cast<int>(state_names.size()); }
};

ComposedTransducer compose(const Composer& c, const Library& lib);

/// Priority per composed state, read off a per-component index function.
IndexFunction lift_index(const std::vector<IndexFunction>& alpha, const Composer& c,
                         const ComposedTransducer& t);

/// The environment-controlled MDP of a composed transducer, restricted to
/// the reachable fragment. map_back, when given, receives the composed
/// state id per MDP state.
Mdp environment_mdp(const ComposedTransducer& t, const IndexFunction& alpha,
                    std::vector<int>* map_back = nullptr);

/// Minimal probability, over all environment strategies, that the parity
/// objective holds; exact, evaluated at the initial state.
Rational value_embedded(const ComposedTransducer& t, const IndexFunction& alpha);

/// Graph-based check that value_embedded equals one; no numeric
/// probabilities involved.
bool almost_sure_embedded(const ComposedTransducer& t, const IndexFunction& alpha);

/// Synchronous product with a DPW monitor reading the output of the state
/// being left; the product's priorities come from the automaton.
ComposedTransducer dpw_product(const ComposedTransducer& t, const Dpw& a,
                               IndexFunction* alpha_out);

/// Value of the transducer against a DPW monitor: value_embedded on the
/// product.
Rational value_dpw(const ComposedTransducer& t, const Dpw& a);

bool almost_sure_dpw(const ComposedTransducer& t, const Dpw& a);

}  // namespace composynth
