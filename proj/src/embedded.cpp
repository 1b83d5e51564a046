#include "composynth/embedded.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace composynth {

ValidationReport validate_problem(const EmbeddedProblem& p) {
  ValidationReport rep = validate_library(p.library);
  if (!p.relation.non_blocking(p.library.width())) rep.note("exit relation is blocking");
  for (const auto& [d, j] : p.relation.pairs)
    if (d < 0 || d >= p.library.width() || j < 0 || j >= p.library.size())
      rep.note("exit relation pair out of range");
  if (static_cast<int>(p.alpha.size()) != p.library.size()) {
    rep.note("index function missing for some component");
    return rep;
  }
  for (int i = 0; i < p.library.size(); ++i)
    if (static_cast<int>(p.alpha[i].size()) != p.library.components[i].num_states())
      rep.note("index function not total on component " + p.library.components[i].name);
  if (p.mode == SynthMode::Quantitative && (p.eta <= Rational(0) || p.eta >= Rational(1)))
    rep.note("threshold must be in (0,1)");
  return rep;
}

StochasticGame build_game(const EmbeddedProblem& p, GameMap* map) {
  const Library& lib = p.library;
  const int k1 = lib.size();
  StochasticGame g;
  g.actions2 = lib.components.front().input_letters;
  for (const auto& c : lib.components) g.actions1.push_back(c.name);
  const int letters = static_cast<int>(g.actions2.size());

  GameMap local;
  local.state_of.resize(k1);
  for (int i = 0; i < k1; ++i) {
    const Component& c = lib.components[i];
    local.state_of[i].resize(c.num_states());
    for (int q = 0; q < c.num_states(); ++q) {
      local.state_of[i][q] = g.num_states();
      local.origin.emplace_back(i, q);
      g.state_names.push_back(c.states[q] + "@" + c.name);
      g.owner1.push_back(c.is_exit(q));
      g.priorities.push_back(p.alpha[i][q]);
    }
  }
  local.bottom = g.num_states();
  g.state_names.push_back("__bottom");
  g.owner1.push_back(false);
  g.priorities.push_back(1);
  g.initial = local.state_of[0][lib.components[0].initial];

  g.delta.resize(g.num_states());
  for (int i = 0; i < k1; ++i) {
    const Component& c = lib.components[i];
    for (int q = 0; q < c.num_states(); ++q) {
      auto& row = g.delta[local.state_of[i][q]];
      auto dir = c.exit_direction(q);
      if (dir) {
        row.resize(k1);
        for (int j = 0; j < k1; ++j) {
          int target = p.relation.contains(*dir, j)
                           ? local.state_of[j][lib.components[j].initial]
                           : local.bottom;
          row[j] = Distribution::point(target);
        }
      } else {
        row.resize(letters);
        for (int a = 0; a < letters; ++a) {
          Distribution d;
          for (const auto& [q2, pr] : c.delta[q][a].support) d.add(local.state_of[i][q2], pr);
          row[a] = std::move(d);
        }
      }
    }
  }
  g.delta[local.bottom] = {Distribution::point(local.bottom)};
  if (map) *map = local;
  return g;
}

Composer strategy_to_composer(const MemorylessStrategy& sigma, const EmbeddedProblem& p) {
  GameMap map;
  StochasticGame g = build_game(p, &map);
  (void)g;
  const Library& lib = p.library;
  Composer c;
  c.initial = 0;
  for (int i = 0; i < lib.size(); ++i) {
    c.state_names.push_back("M" + std::to_string(i));
    c.type_of.push_back(i);
    std::vector<int> row(lib.width(), 0);
    for (int x = 0; x < lib.width(); ++x) {
      int exit_state = map.state_of[i][lib.components[i].exits[x]];
      int j = sigma.choice[exit_state];
      if (j < 0 || j >= lib.size() || !p.relation.contains(x, j))
        throw InvalidStrategy("strategy maps exit " + std::to_string(x) + " of component " +
                              std::to_string(i) + " outside the exit relation");
      row[x] = j;
    }
    c.transfer.push_back(std::move(row));
  }
  return c;
}

StrategyTransducer composer_to_strategy(const Composer& c, const EmbeddedProblem& p) {
  if (!check_compatibility(c, p.relation))
    throw IncompatibleComposer("composer is not compatible with the exit relation");
  GameMap map;
  StochasticGame g = build_game(p, &map);
  StrategyTransducer t;
  t.num_memory = c.num_states();
  t.initial_memory = c.initial;
  t.update.assign(t.num_memory, std::vector<int>(g.num_states(), 0));
  t.next.assign(t.num_memory, 0);
  for (int m = 0; m < t.num_memory; ++m) {
    t.next[m] = c.type_of[m];
    for (int s = 0; s < g.num_states(); ++s) {
      t.update[m][s] = m;  // memory frozen off the decision points
      if (s == map.bottom) continue;
      auto [i, q] = map.origin[s];
      auto dir = p.library.components[i].exit_direction(q);
      if (dir && c.type_of[m] == i) t.update[m][s] = c.transfer[m][*dir];
    }
  }
  return t;
}

namespace {

// Any choice left invalid by the solver sits at a value-zero exit; every
// allowed successor there is value-zero too, so redirecting into the
// relation never changes the value.
void patch_validity(MemorylessStrategy* sigma, const EmbeddedProblem& p, const GameMap& map) {
  const Library& lib = p.library;
  for (int i = 0; i < lib.size(); ++i)
    for (int x = 0; x < lib.width(); ++x) {
      int es = map.state_of[i][lib.components[i].exits[x]];
      int j = sigma->choice[es];
      if (j >= 0 && j < lib.size() && p.relation.contains(x, j)) continue;
      for (int cand = 0; cand < lib.size(); ++cand)
        if (p.relation.contains(x, cand)) {
          sigma->choice[es] = cand;
          break;
        }
    }
}

}  // namespace

SynthReport synth_embedded(const EmbeddedProblem& p) {
  auto rep = validate_problem(p);
  if (!rep.ok()) throw std::invalid_argument("invalid problem: " + rep.problems.front());
  GameMap map;
  StochasticGame g = build_game(p, &map);
  SynthReport out;
  if (p.mode == SynthMode::Qualitative) {
    out.method = "qualitative game reduction";
    auto asr = almost_sure_parity(g);
    out.value = asr.winning[g.initial] ? Rational(1) : Rational(0);
    if (!asr.winning[g.initial]) return out;
    MemorylessStrategy sigma = asr.witness;
    patch_validity(&sigma, p, map);
    Composer c = strategy_to_composer(sigma, p);
    ComposedTransducer t = compose(c, p.library);
    if (!almost_sure_embedded(t, lift_index(p.alpha, c, t)))
      throw std::logic_error("synth_embedded: composer failed certification");
    out.realizable = true;
    out.certified = Rational(1);
    out.composer = std::move(c);
    return out;
  }
  out.method = "quantitative game reduction";
  auto pv = parity_value(g);
  out.value = pv.value[g.initial];
  if (out.value < p.eta) return out;
  MemorylessStrategy sigma = pv.strategy1;
  patch_validity(&sigma, p, map);
  Composer c = strategy_to_composer(sigma, p);
  ComposedTransducer t = compose(c, p.library);
  out.certified = value_embedded(t, lift_index(p.alpha, c, t));
  if (out.certified != out.value)
    throw std::logic_error("synth_embedded: composer value disagrees with the game value");
  out.realizable = true;
  out.composer = std::move(c);
  return out;
}

SynthReport synth_unrestricted(const Library& lib, const std::vector<IndexFunction>& alpha,
                               SynthMode mode, const Rational& eta) {
  const int k1 = lib.size();
  // The hub game: every exit funnels into a player-1 state that picks the
  // next component; its priority sits above everything else so it never
  // decides the parity.
  int top_prio = 0;
  for (const auto& f : alpha)
    for (int pr : f) top_prio = std::max(top_prio, pr);
  ++top_prio;

  StochasticGame g;
  g.actions2 = lib.components.front().input_letters;
  for (const auto& c : lib.components) g.actions1.push_back(c.name);
  const int letters = static_cast<int>(g.actions2.size());
  std::vector<std::vector<int>> state_of(k1);
  for (int i = 0; i < k1; ++i) {
    const Component& c = lib.components[i];
    state_of[i].resize(c.num_states());
    for (int q = 0; q < c.num_states(); ++q) {
      state_of[i][q] = g.num_states();
      g.state_names.push_back(c.states[q] + "@" + c.name);
      g.owner1.push_back(c.is_exit(q));
      g.priorities.push_back(alpha[i][q]);
    }
  }
  const int hub = g.num_states();
  g.state_names.push_back("__hub");
  g.owner1.push_back(true);
  g.priorities.push_back(top_prio);
  g.initial = state_of[0][lib.components[0].initial];
  g.delta.resize(g.num_states());
  for (int i = 0; i < k1; ++i) {
    const Component& c = lib.components[i];
    for (int q = 0; q < c.num_states(); ++q) {
      auto& row = g.delta[state_of[i][q]];
      if (c.is_exit(q)) {
        row.resize(k1);
        for (int j = 0; j < k1; ++j) row[j] = Distribution::point(hub);
      } else {
        row.resize(letters);
        for (int a = 0; a < letters; ++a) {
          Distribution d;
          for (const auto& [q2, pr] : c.delta[q][a].support) d.add(state_of[i][q2], pr);
          row[a] = std::move(d);
        }
      }
    }
  }
  g.delta[hub].resize(k1);
  for (int j = 0; j < k1; ++j)
    g.delta[hub][j] = Distribution::point(state_of[j][lib.components[j].initial]);

  // One memoryless player-1 strategy per component choice at the hub; the
  // k+1 induced MDPs are independent, so they may be solved in parallel.
  // Results are merged serially, so output is schedule-independent.
  // Exceptions must not escape the parallel region.
  std::vector<Rational> values(k1, Rational(0));
  std::exception_ptr solve_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int j = 0; j < k1; ++j) {
    try {
      MemorylessStrategy sigma;
      sigma.choice.assign(g.num_states(), -1);
      for (int s = 0; s < g.num_states(); ++s)
        if (g.owner1[s]) sigma.choice[s] = s == hub ? j : 0;
      Mdp m = fix_memoryless(g, sigma, true);
      if (mode == SynthMode::Qualitative) {
        values[j] = mdp_min_value_one(m)[g.initial] ? Rational(1) : Rational(0);
      } else {
        auto [v, w] = mdp_min_parity_value(m);
        (void)w;
        values[j] = v[g.initial];
      }
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!solve_error) solve_error = std::current_exception();
    }
  }
  if (solve_error) std::rethrow_exception(solve_error);
  int best = 0;
  for (int j = 1; j < k1; ++j)
    if (values[j] > values[best]) best = j;

  SynthReport out;
  out.method = "unrestricted hub enumeration";
  out.value = values[best];
  bool ok = mode == SynthMode::Qualitative ? values[best].is_one() : values[best] >= eta;
  if (!ok) return out;
  Composer c;
  c.initial = 0;
  for (int i = 0; i < k1; ++i) {
    c.state_names.push_back("M" + std::to_string(i));
    c.type_of.push_back(i);
    c.transfer.emplace_back(lib.width(), best);
  }
  ComposedTransducer t = compose(c, lib);
  out.certified = value_embedded(t, lift_index(alpha, c, t));
  if (out.certified != out.value)
    throw std::logic_error("synth_unrestricted: composer value disagrees with the hub value");
  out.realizable = true;
  out.composer = std::move(c);
  return out;
}

bool is_alternating(const StochasticGame& g) {
  for (int s = 0; s < g.num_states(); ++s)
    for (const auto& row : g.delta[s])
      for (const auto& [t, _] : row.support)
        if (g.owner1[t] == g.owner1[s]) return false;
  return true;
}

StochasticGame make_alternating(const StochasticGame& g) {
  if (!g.deterministic())
    throw std::invalid_argument("make_alternating expects a deterministic game");
  StochasticGame out;
  out.actions1 = g.actions1;
  out.actions2 = g.actions2;
  out.state_names = g.state_names;
  out.owner1 = g.owner1;
  out.priorities = g.priorities;
  out.initial = g.initial;
  out.delta.resize(g.num_states());

  // Totalize player-2 rows first: a disabled action copies the smallest
  // enabled one; duplicating an existing option never changes the winner.
  auto totalized = [&](int s) {
    std::vector<Distribution> row = g.delta[s];
    if (g.owner1[s]) return row;
    row.resize(g.actions2.size());
    int first = -1;
    for (int a = 0; a < static_cast<int>(row.size()); ++a)
      if (!row[a].empty()) {
        first = a;
        break;
      }
    if (first < 0) throw std::logic_error("player-2 state with no action");
    for (auto& d : row)
      if (d.empty()) d = row[first];
    return row;
  };

  for (int s = 0; s < g.num_states(); ++s) {
    auto row = totalized(s);
    out.delta[s].resize(row.size());
    for (int a = 0; a < static_cast<int>(row.size()); ++a) {
      if (row[a].empty()) continue;
      int t = row[a].support.begin()->first;
      if (g.owner1[t] != g.owner1[s]) {
        out.delta[s][a] = Distribution::point(t);
        continue;
      }
      // Insert an opposite-owner relay carrying the source priority.
      int dummy = out.num_states();
      out.state_names.push_back("__alt" + std::to_string(dummy));
      out.owner1.push_back(!g.owner1[s]);
      out.priorities.push_back(g.priorities[s]);
      size_t width = out.owner1.back() ? out.actions1.size() : out.actions2.size();
      if (width == 0)
        throw std::logic_error("cannot insert relay: the opposite player has no actions");
      out.delta.emplace_back(width, Distribution::point(t));
      out.delta[s][a] = Distribution::point(dummy);
    }
  }
  return out;
}

EmbeddedProblem parity_game_to_library(const StochasticGame& g, SynthMode mode,
                                       const Rational& eta) {
  if (!g.deterministic() || !is_alternating(g))
    throw NotAlternating("the hardness gadget needs a deterministic alternating game");
  if (g.owner1[g.initial])
    throw NotAlternating("the hardness gadget starts at a player-2 state");

  // Component order: the initial player-2 state first.
  std::vector<int> p2_states, p1_states;
  p2_states.push_back(g.initial);
  for (int s = 0; s < g.num_states(); ++s) {
    if (g.owner1[s])
      p1_states.push_back(s);
    else if (s != g.initial)
      p2_states.push_back(s);
  }
  const int k1 = static_cast<int>(p2_states.size());
  const int d = static_cast<int>(p1_states.size());
  if (d == 0) throw NotAlternating("the hardness gadget needs at least one player-1 state");
  std::vector<int> p2_index(g.num_states(), -1), p1_index(g.num_states(), -1);
  for (int i = 0; i < k1; ++i) p2_index[p2_states[i]] = i;
  for (int j = 0; j < d; ++j) p1_index[p1_states[j]] = j;

  std::vector<std::string> out_letters;
  for (int i = 0; i < k1; ++i) out_letters.push_back("start_" + std::to_string(i));
  for (int j = 0; j < d; ++j) out_letters.push_back("exit_" + std::to_string(j + 1));

  EmbeddedProblem p;
  p.mode = mode;
  p.eta = eta;
  for (int j = 0; j < d; ++j) p.library.directions.push_back("x" + std::to_string(j + 1));
  for (int i = 0; i < k1; ++i) {
    int s2 = p2_states[i];
    Component c;
    c.name = "M" + std::to_string(i);
    c.input_letters = g.actions2;
    c.output_letters = out_letters;
    c.states.push_back("q0");
    for (int j = 0; j < d; ++j) c.states.push_back("q" + std::to_string(j + 1));
    c.initial = 0;
    c.labels.push_back(i);
    for (int j = 0; j < d; ++j) c.labels.push_back(k1 + j);
    for (int j = 0; j < d; ++j) c.exits.push_back(j + 1);
    c.delta.resize(c.num_states());
    c.delta[0].resize(g.actions2.size());
    for (int a = 0; a < static_cast<int>(g.actions2.size()); ++a) {
      if (!g.enabled(s2, a))
        throw NotAlternating("the hardness gadget needs total player-2 rows");
      int t = g.delta[s2][a].support.begin()->first;
      c.delta[0][a] = Distribution::point(p1_index[t] + 1);
    }
    p.library.components.push_back(std::move(c));
    IndexFunction f;
    f.push_back(g.priorities[s2]);
    for (int j = 0; j < d; ++j) f.push_back(g.priorities[p1_states[j]]);
    p.alpha.push_back(std::move(f));
  }
  for (int j = 0; j < d; ++j) {
    int s1 = p1_states[j];
    for (int a = 0; a < g.num_actions(s1); ++a) {
      if (!g.enabled(s1, a)) continue;
      int t = g.delta[s1][a].support.begin()->first;
      p.relation.insert(j, p2_index[t]);
    }
  }
  if (!p.relation.non_blocking(d))
    throw NotAlternating("some player-1 state has no move");
  return p;
}

}  // namespace composynth
