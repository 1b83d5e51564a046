#include "composynth/pagadget.hpp"

#include "composynth/chain.hpp"

namespace composynth {

ValidationReport validate_pa(const ProbabilisticAutomaton& a) {
  ValidationReport rep;
  const int n = a.num_states();
  if (n == 0) {
    rep.note("automaton has no states");
    return rep;
  }
  if (a.initial < 0 || a.initial >= n) rep.note("initial out of range");
  if (static_cast<int>(a.priorities.size()) != n) rep.note("priorities not total");
  if (static_cast<int>(a.delta.size()) != n) {
    rep.note("delta rows != states");
    return rep;
  }
  for (int q = 0; q < n; ++q) {
    if (static_cast<int>(a.delta[q].size()) != static_cast<int>(a.alphabet.size())) {
      rep.note("delta not total at " + a.states[q]);
      continue;
    }
    for (const auto& d : a.delta[q])
      if (!d.is_stochastic()) rep.note("non-stochastic distribution at " + a.states[q]);
  }
  return rep;
}

Library pa_to_library(const ProbabilisticAutomaton& a) {
  auto rep = validate_pa(a);
  if (!rep.ok()) throw std::invalid_argument("invalid automaton: " + rep.problems.front());
  const int n = a.num_states();
  const int k1 = static_cast<int>(a.alphabet.size());

  Library lib;
  lib.directions.push_back("d0");
  std::vector<std::string> outs = a.states;
  outs.push_back("$");
  const int dollar = n;

  for (int i = 0; i < k1; ++i) {
    Component c;
    c.name = "M_" + a.alphabet[i];
    c.input_letters = a.states;  // the environment names an automaton state
    c.output_letters = outs;
    // Local layout: 0 = start, 1..n = (q,1), n+1..2n = (q,2), 2n+1 = exit.
    c.states.push_back("in");
    for (int q = 0; q < n; ++q) c.states.push_back(a.states[q] + ".1");
    for (int q = 0; q < n; ++q) c.states.push_back(a.states[q] + ".2");
    c.states.push_back("ex");
    const int ex = 2 * n + 1;
    c.initial = 0;
    c.exits.push_back(ex);
    c.labels.push_back(dollar);
    for (int q = 0; q < n; ++q) c.labels.push_back(q);
    for (int q = 0; q < n; ++q) c.labels.push_back(q);
    c.labels.push_back(dollar);
    c.delta.resize(c.num_states());
    c.delta[0].resize(n);
    for (int q = 0; q < n; ++q) c.delta[0][q] = Distribution::point(1 + q);
    for (int q = 0; q < n; ++q) {
      auto& row = c.delta[1 + q];
      row.resize(n);
      Distribution d;
      for (const auto& [q2, p] : a.delta[q][i].support) d.add(1 + n + q2, p);
      for (int sig = 0; sig < n; ++sig) row[sig] = d;  // input ignored
    }
    for (int q = 0; q < n; ++q) {
      auto& row = c.delta[1 + n + q];
      row.resize(n);
      for (int sig = 0; sig < n; ++sig) row[sig] = Distribution::point(ex);
    }
    lib.components.push_back(std::move(c));
  }
  return lib;
}

Dpw pa_to_dpw(const ProbabilisticAutomaton& a) {
  const int n = a.num_states();
  Dpw d;
  d.alphabet = a.states;
  d.alphabet.push_back("$");
  const int dollar = n;
  // States: (q, phase) with phase 0..3, then the accepting sink. Phase 0
  // reads the guess, phase 1 the probabilistic move, phase 2 the exit
  // marker, phase 3 the start marker.
  auto id = [&](int q, int phase) { return q * 4 + phase; };
  const int top = 4 * n;
  for (int q = 0; q < n; ++q)
    for (int ph = 0; ph < 4; ++ph) {
      d.states.push_back(a.states[q] + ".p" + std::to_string(ph));
      d.priorities.push_back(a.priorities[q]);
    }
  d.states.push_back("T");
  d.priorities.push_back(0);
  d.initial = id(a.initial, 3);
  d.delta.assign(d.num_states(), std::vector<int>(d.alphabet.size(), top));
  for (int q = 0; q < n; ++q) {
    for (int sig = 0; sig <= n; ++sig) {
      d.delta[id(q, 0)][sig] = sig == q ? id(q, 1) : top;
      d.delta[id(q, 1)][sig] = sig < n ? id(sig, 2) : top;
      d.delta[id(q, 2)][sig] = sig == dollar ? id(q, 3) : top;
      d.delta[id(q, 3)][sig] = sig == dollar ? id(q, 0) : top;
    }
  }
  for (int sig = 0; sig <= n; ++sig) d.delta[top][sig] = top;
  return d;
}

Composer lasso_to_composer(const Lasso& w, int num_components) {
  if (w.cycle.empty()) throw std::invalid_argument("lasso cycle is empty");
  for (int x : w.prefix)
    if (x < 0 || x >= num_components) throw AlphabetMismatch("lasso letter out of range");
  for (int x : w.cycle)
    if (x < 0 || x >= num_components) throw AlphabetMismatch("lasso letter out of range");
  Composer c;
  c.initial = 0;
  const int total = static_cast<int>(w.prefix.size() + w.cycle.size());
  for (int t = 0; t < total; ++t) {
    int letter = t < static_cast<int>(w.prefix.size())
                     ? w.prefix[t]
                     : w.cycle[t - static_cast<int>(w.prefix.size())];
    c.state_names.push_back("w" + std::to_string(t));
    c.type_of.push_back(letter);
    c.transfer.push_back(
        {t + 1 < total ? t + 1 : static_cast<int>(w.prefix.size())});
  }
  return c;
}

Lasso composer_to_lasso(const Composer& c) {
  for (const auto& row : c.transfer)
    if (row.size() != 1)
      throw std::invalid_argument("composer is not over a width-one library");
  std::vector<int> seen_at(c.num_states(), -1);
  std::vector<int> walk;
  int cur = c.initial;
  while (seen_at[cur] < 0) {
    seen_at[cur] = static_cast<int>(walk.size());
    walk.push_back(cur);
    cur = c.transfer[cur][0];
  }
  Lasso w;
  for (int i = 0; i < seen_at[cur]; ++i) w.prefix.push_back(c.type_of[walk[i]]);
  for (int i = seen_at[cur]; i < static_cast<int>(walk.size()); ++i)
    w.cycle.push_back(c.type_of[walk[i]]);
  return w;
}

Rational pa_lasso_value(const ProbabilisticAutomaton& a, const Lasso& w) {
  auto rep = validate_pa(a);
  if (!rep.ok()) throw std::invalid_argument("invalid automaton: " + rep.problems.front());
  if (w.cycle.empty()) throw std::invalid_argument("lasso cycle is empty");
  const int letters = static_cast<int>(a.alphabet.size());
  for (int x : w.prefix)
    if (x < 0 || x >= letters) throw AlphabetMismatch("lasso letter out of range");
  for (int x : w.cycle)
    if (x < 0 || x >= letters) throw AlphabetMismatch("lasso letter out of range");

  // Chain over (automaton state, position of the next letter); the prefix
  // flows into the cycle positions, which repeat forever.
  const int n = a.num_states();
  const int plen = static_cast<int>(w.prefix.size());
  const int clen = static_cast<int>(w.cycle.size());
  const int positions = plen + clen;
  auto id = [&](int q, int t) { return q * positions + t; };
  auto letter_at = [&](int t) { return t < plen ? w.prefix[t] : w.cycle[t - plen]; };
  auto next_pos = [&](int t) { return t + 1 < positions ? t + 1 : plen; };
  Chain chain;
  chain.step.resize(static_cast<size_t>(n) * positions);
  IndexFunction prio(static_cast<size_t>(n) * positions, 0);
  for (int q = 0; q < n; ++q)
    for (int t = 0; t < positions; ++t) {
      prio[id(q, t)] = a.priorities[q];
      Distribution d;
      for (const auto& [q2, p] : a.delta[q][letter_at(t)].support) d.add(id(q2, next_pos(t)), p);
      chain.step[id(q, t)] = std::move(d);
    }
  return chain_parity(chain, prio)[id(a.initial, 0)];
}

}  // namespace composynth
