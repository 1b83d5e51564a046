#include "composynth/gen.hpp"

#include <algorithm>

namespace composynth {

Distribution gen_distribution(Rng& rng, int num_targets, int max_support) {
  int size = 1 + rng.upto(std::min(max_support, num_targets));
  std::vector<int> targets;
  while (static_cast<int>(targets.size()) < size) {
    int t = rng.upto(num_targets);
    if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
  }
  std::sort(targets.begin(), targets.end());
  std::vector<int> weights(targets.size());
  int total = 0;
  for (auto& w : weights) {
    w = 1 + rng.upto(3);
    total += w;
  }
  Distribution d;
  for (size_t i = 0; i < targets.size(); ++i)
    d.add(targets[i], Rational(weights[i], total));
  return d;
}

Library gen_library(Rng& rng, int num_components, int max_states, int width, int num_inputs) {
  Library lib;
  for (int x = 0; x < width; ++x) lib.directions.push_back("d" + std::to_string(x));
  std::vector<std::string> inputs, outputs;
  for (int a = 0; a < num_inputs; ++a) inputs.push_back("i" + std::to_string(a));
  for (int i = 0; i < num_components; ++i)
    for (int x = 0; x < width; ++x)
      outputs.push_back("o" + std::to_string(i) + "_" + std::to_string(x));
  outputs.push_back("o_body");
  for (int i = 0; i < num_components; ++i) {
    Component c;
    c.name = "M" + std::to_string(i);
    c.input_letters = inputs;
    c.output_letters = outputs;
    // At least one non-exit state plus the exits.
    int body = 1 + rng.upto(std::max(1, max_states - width));
    for (int q = 0; q < body; ++q) c.states.push_back("q" + std::to_string(q));
    for (int x = 0; x < width; ++x) {
      c.exits.push_back(c.num_states());
      c.states.push_back("e" + std::to_string(x));
    }
    c.initial = 0;
    for (int q = 0; q < body; ++q) c.labels.push_back(static_cast<int>(outputs.size()) - 1);
    for (int x = 0; x < width; ++x) c.labels.push_back(i * width + x);
    c.delta.resize(c.num_states());
    for (int q = 0; q < body; ++q) {
      c.delta[q].resize(num_inputs);
      for (int a = 0; a < num_inputs; ++a)
        c.delta[q][a] = gen_distribution(rng, c.num_states());
    }
    lib.components.push_back(std::move(c));
  }
  return lib;
}

std::vector<IndexFunction> gen_library_index(Rng& rng, const Library& lib, int max_priority) {
  std::vector<IndexFunction> alpha;
  for (const auto& c : lib.components) {
    IndexFunction f;
    for (int q = 0; q < c.num_states(); ++q) f.push_back(rng.upto(max_priority + 1));
    alpha.push_back(std::move(f));
  }
  return alpha;
}

Composer gen_composer(Rng& rng, const Library& lib, int num_states) {
  Composer c;
  c.initial = 0;
  for (int m = 0; m < num_states; ++m) {
    c.state_names.push_back("C" + std::to_string(m));
    c.type_of.push_back(rng.upto(lib.size()));
    std::vector<int> row(lib.width());
    for (auto& t : row) t = rng.upto(num_states);
    c.transfer.push_back(std::move(row));
  }
  return c;
}

ExitControlRelation gen_relation(Rng& rng, int width, int num_components,
                                 const Composer* must_allow) {
  ExitControlRelation r;
  for (int d = 0; d < width; ++d) {
    r.insert(d, rng.upto(num_components));  // non-blocking
    for (int j = 0; j < num_components; ++j)
      if (rng.upto(3) == 0) r.insert(d, j);
  }
  if (must_allow)
    for (int m = 0; m < must_allow->num_states(); ++m)
      for (int d = 0; d < width; ++d)
        r.insert(d, must_allow->type_of[must_allow->transfer[m][d]]);
  return r;
}

StochasticGame gen_game(Rng& rng, int num_states, int num_a1, int num_a2, int max_priority,
                        bool deterministic) {
  StochasticGame g;
  for (int a = 0; a < num_a1; ++a) g.actions1.push_back("a" + std::to_string(a));
  for (int b = 0; b < num_a2; ++b) g.actions2.push_back("b" + std::to_string(b));
  for (int s = 0; s < num_states; ++s) {
    g.state_names.push_back("s" + std::to_string(s));
    g.owner1.push_back(rng.flip());
    g.priorities.push_back(rng.upto(max_priority + 1));
  }
  g.initial = 0;
  g.delta.resize(num_states);
  for (int s = 0; s < num_states; ++s) {
    int acts = g.owner1[s] ? num_a1 : num_a2;
    g.delta[s].resize(acts);
    int enabled = 1 + rng.upto(acts);
    for (int a = 0; a < enabled; ++a)
      g.delta[s][a] = deterministic ? Distribution::point(rng.upto(num_states))
                                    : gen_distribution(rng, num_states);
  }
  return g;
}

StochasticGame gen_alternating_game(Rng& rng, int num_p2, int num_p1, int num_a1, int num_a2,
                                    int max_priority) {
  StochasticGame g;
  for (int a = 0; a < num_a1; ++a) g.actions1.push_back("a" + std::to_string(a));
  for (int b = 0; b < num_a2; ++b) g.actions2.push_back("b" + std::to_string(b));
  // Player-2 states first (the initial one at index 0), then player-1.
  for (int s = 0; s < num_p2; ++s) {
    g.state_names.push_back("u" + std::to_string(s));
    g.owner1.push_back(false);
    g.priorities.push_back(rng.upto(max_priority + 1));
  }
  for (int s = 0; s < num_p1; ++s) {
    g.state_names.push_back("v" + std::to_string(s));
    g.owner1.push_back(true);
    g.priorities.push_back(rng.upto(max_priority + 1));
  }
  g.initial = 0;
  g.delta.resize(g.num_states());
  for (int s = 0; s < num_p2; ++s) {
    g.delta[s].resize(num_a2);
    for (int b = 0; b < num_a2; ++b)
      g.delta[s][b] = Distribution::point(num_p2 + rng.upto(num_p1));
  }
  for (int s = 0; s < num_p1; ++s) {
    g.delta[num_p2 + s].resize(num_a1);
    int enabled = 1 + rng.upto(num_a1);
    for (int a = 0; a < enabled; ++a)
      g.delta[num_p2 + s][a] = Distribution::point(rng.upto(num_p2));
  }
  return g;
}

ObservedGame gen_observed_game(Rng& rng, int num_states, int num_a1, int num_a2,
                               int max_priority, int num_obs) {
  ObservedGame og;
  og.game = gen_game(rng, num_states, num_a1, num_a2, max_priority, false);
  for (int o = 0; o < num_obs; ++o) og.obs_names.push_back("obs" + std::to_string(o));
  for (int s = 0; s < num_states; ++s) og.obs.push_back(rng.upto(num_obs));
  return og;
}

ProbabilisticAutomaton gen_pa(Rng& rng, int num_states, int num_letters, int max_priority) {
  ProbabilisticAutomaton a;
  for (int x = 0; x < num_letters; ++x) a.alphabet.push_back(std::to_string(x));
  for (int q = 0; q < num_states; ++q) {
    a.states.push_back("p" + std::to_string(q));
    a.priorities.push_back(rng.upto(max_priority + 1));
  }
  a.initial = 0;
  a.delta.resize(num_states);
  for (int q = 0; q < num_states; ++q) {
    a.delta[q].resize(num_letters);
    for (int x = 0; x < num_letters; ++x) a.delta[q][x] = gen_distribution(rng, num_states);
  }
  return a;
}

Dpw gen_dpw(Rng& rng, const std::vector<std::string>& alphabet, int num_states,
            int max_priority) {
  Dpw d;
  d.alphabet = alphabet;
  for (int s = 0; s < num_states; ++s) {
    d.states.push_back("z" + std::to_string(s));
    d.priorities.push_back(rng.upto(max_priority + 1));
  }
  d.initial = 0;
  d.delta.assign(num_states, std::vector<int>(alphabet.size(), 0));
  for (int s = 0; s < num_states; ++s)
    for (size_t x = 0; x < alphabet.size(); ++x) d.delta[s][x] = rng.upto(num_states);
  return d;
}

}  // namespace composynth
