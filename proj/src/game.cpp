#include "composynth/game.hpp"

namespace composynth {

bool StochasticGame::deterministic() const {
  for (int s = 0; s < num_states(); ++s)
    for (const auto& d : delta[s])
      if (!d.empty() && !d.is_point_mass()) return false;
  return true;
}

StochasticGame StochasticGame::swap_players() const {
  StochasticGame g = *this;
  for (int s = 0; s < num_states(); ++s) g.owner1[s] = !owner1[s];
  std::swap(g.actions1, g.actions2);
  for (int& p : g.priorities) ++p;
  return g;
}

ValidationReport validate_game(const StochasticGame& g) {
  ValidationReport rep;
  const int n = g.num_states();
  if (n == 0) {
    rep.note("game has no states");
    return rep;
  }
  if (g.initial < 0 || g.initial >= n) rep.note("initial state out of range");
  if (static_cast<int>(g.owner1.size()) != n) rep.note("owner partition not total");
  if (static_cast<int>(g.priorities.size()) != n) rep.note("priorities not total");
  if (static_cast<int>(g.delta.size()) != n) {
    rep.note("delta rows != states");
    return rep;
  }
  for (int s = 0; s < n; ++s) {
    const int limit = g.owner1[s] ? static_cast<int>(g.actions1.size())
                                  : static_cast<int>(g.actions2.size());
    if (static_cast<int>(g.delta[s].size()) > limit)
      rep.note("state " + g.state_names[s] + " has more actions than its player owns");
    bool any = false;
    for (const auto& d : g.delta[s]) {
      if (d.empty()) continue;
      any = true;
      if (!d.is_stochastic())
        rep.note("state " + g.state_names[s] + " has a non-stochastic action");
      for (const auto& [t, _] : d.support)
        if (t < 0 || t >= n) rep.note("state " + g.state_names[s] + " has transition out of range");
    }
    if (!any) rep.note("state " + g.state_names[s] + " has no enabled action");
  }
  return rep;
}

ValidationReport validate_mdp(const Mdp& m) {
  ValidationReport rep;
  const int n = m.num_states();
  if (n == 0) {
    rep.note("mdp has no states");
    return rep;
  }
  if (static_cast<int>(m.priorities.size()) != n) rep.note("priorities not total");
  for (int s = 0; s < n; ++s) {
    bool any = false;
    for (const auto& d : m.delta[s]) {
      if (d.empty()) continue;
      any = true;
      if (!d.is_stochastic()) rep.note("state " + m.state_names[s] + " has a non-stochastic action");
    }
    if (!any) rep.note("state " + m.state_names[s] + " has no enabled action");
  }
  return rep;
}

StrategyTransducer memoryless_to_transducer(const MemorylessStrategy& s,
                                            const StochasticGame& g) {
  // A memoryless strategy needs one memory cell per state it may stand at;
  // encode it with |S| memory values remembering the current state.
  StrategyTransducer t;
  t.num_memory = g.num_states();
  t.initial_memory = 0;
  t.update.assign(t.num_memory, std::vector<int>(g.num_states(), 0));
  for (int m = 0; m < t.num_memory; ++m)
    for (int st = 0; st < g.num_states(); ++st) t.update[m][st] = st;
  t.next.assign(t.num_memory, 0);
  for (int st = 0; st < g.num_states(); ++st)
    t.next[st] = g.owner1[st] && s.choice[st] >= 0 ? s.choice[st] : 0;
  return t;
}

Mdp apply_strategy(const StochasticGame& g, const StrategyTransducer& sigma) {
  const int n = g.num_states();
  const int mem = sigma.num_memory;
  Mdp out;
  out.state_names.reserve(static_cast<size_t>(n) * mem);
  out.priorities.reserve(static_cast<size_t>(n) * mem);
  out.delta.resize(static_cast<size_t>(n) * mem);
  // Product state (s, m): m is the memory before reading s.
  auto id = [&](int s, int m) { return s * mem + m; };
  for (int s = 0; s < n; ++s)
    for (int m = 0; m < mem; ++m) {
      out.state_names.push_back(g.state_names[s] + "#" + std::to_string(m));
      out.priorities.push_back(g.priorities[s]);
    }
  out.action_names = g.actions2;
  out.initial = id(g.initial, sigma.initial_memory);
  for (int s = 0; s < n; ++s) {
    for (int m = 0; m < mem; ++m) {
      const int m2 = sigma.step(m, s);
      if (g.owner1[s]) {
        const int a = sigma.next[m2];
        if (!g.enabled(s, a))
          throw DisabledAction("strategy plays disabled action " + std::to_string(a) + " at " +
                               g.state_names[s]);
        Distribution d;
        for (const auto& [t, p] : g.delta[s][a].support) d.add(id(t, m2), p);
        out.delta[id(s, m)] = {d};
      } else {
        auto& row = out.delta[id(s, m)];
        row.resize(g.delta[s].size());
        for (int b = 0; b < g.num_actions(s); ++b) {
          if (!g.enabled(s, b)) continue;
          Distribution d;
          for (const auto& [t, p] : g.delta[s][b].support) d.add(id(t, m2), p);
          row[b] = d;
        }
      }
    }
  }
  return out;
}

}  // namespace composynth
