#include "composynth/posgames.hpp"

#include <algorithm>
#include <array>

namespace composynth {

ValidationReport validate_observed(const ObservedGame& og) {
  ValidationReport rep = validate_game(og.game);
  if (static_cast<int>(og.obs.size()) != og.game.num_states()) rep.note("obs map not total");
  for (int o : og.obs)
    if (o < 0 || o >= og.num_obs()) rep.note("observation id out of range");
  return rep;
}

std::vector<int> collapse(const std::vector<int>& states, const ObservedGame& og) {
  std::vector<int> out;
  for (int s : states) {
    int o = og.obs[s];
    if (out.empty() || out.back() != o) out.push_back(o);
  }
  return out;
}

namespace {

// Successors of a sigma-compatible step from s with post-read memory m:
// player-1 states move by the strategy's action, player-2 states by any
// enabled action.
std::vector<int> compatible_successors(const StochasticGame& g, const StrategyTransducer& sigma,
                                       int m_after, int s) {
  std::vector<int> succ;
  auto push = [&](const Distribution& d) {
    for (const auto& [t, _] : d.support) succ.push_back(t);
  };
  if (g.owner1[s]) {
    int a = sigma.next[m_after];
    if (!g.enabled(s, a))
      throw DisabledAction("strategy plays a disabled action at " + g.state_names[s]);
    push(g.delta[s][a]);
  } else {
    for (int b = 0; b < g.num_actions(s); ++b)
      if (g.enabled(s, b)) push(g.delta[s][b]);
  }
  std::sort(succ.begin(), succ.end());
  succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  return succ;
}

}  // namespace

std::set<StrategyClass> classify_strategy(const StrategyTransducer& sigma,
                                          const ObservedGame& og) {
  const StochasticGame& g = og.game;
  const int s0 = g.initial;
  const int m0 = sigma.update[sigma.initial_memory][s0];

  // Reachable (post-read memory, state) nodes of the sigma product.
  std::set<std::pair<int, int>> nodes;
  std::vector<std::pair<int, int>> work{{m0, s0}};
  nodes.insert({m0, s0});
  while (!work.empty()) {
    auto [m, s] = work.back();
    work.pop_back();
    for (int t : compatible_successors(g, sigma, m, s)) {
      int m2 = sigma.update[m][t];
      if (nodes.insert({m2, t}).second) work.emplace_back(m2, t);
    }
  }

  bool observation_based = true;
  {
    // Pairs of prefixes with identical observation sequences.
    std::set<std::array<int, 4>> seen;
    std::vector<std::array<int, 4>> pw;
    std::array<int, 4> start{m0, s0, m0, s0};
    seen.insert(start);
    pw.push_back(start);
    while (!pw.empty() && observation_based) {
      auto [ma, sa, mb, sb] = pw.back();
      pw.pop_back();
      if (g.owner1[sa] && g.owner1[sb] && sigma.next[ma] != sigma.next[mb]) {
        observation_based = false;
        break;
      }
      auto sucA = compatible_successors(g, sigma, ma, sa);
      auto sucB = compatible_successors(g, sigma, mb, sb);
      for (int ta : sucA)
        for (int tb : sucB) {
          if (og.obs[ta] != og.obs[tb]) continue;
          std::array<int, 4> nx{sigma.update[ma][ta], ta, sigma.update[mb][tb], tb};
          if (std::array<int, 4>{nx[2], nx[3], nx[0], nx[1]} < nx)
            nx = {nx[2], nx[3], nx[0], nx[1]};
          if (seen.insert(nx).second) pw.push_back(nx);
        }
    }
  }

  bool stutter = observation_based;
  bool collapsed_self_loop = true;
  for (const auto& [m, s] : nodes) {
    for (int t : compatible_successors(g, sigma, m, s)) {
      if (og.obs[t] != og.obs[s]) continue;
      if (sigma.update[m][t] != m) collapsed_self_loop = false;
      if (g.owner1[s] && g.owner1[t] && sigma.next[sigma.update[m][t]] != sigma.next[m])
        stutter = false;
    }
  }

  std::set<StrategyClass> out;
  if (observation_based) out.insert(StrategyClass::ObservationBased);
  if (stutter) out.insert(StrategyClass::StutterInvariant);
  if (observation_based && collapsed_self_loop)
    out.insert(StrategyClass::CollapsedStutterInvariant);
  return out;
}

int ReducedGame::encode(int s, int stored_tag, bool is_barred) const {
  return s * (2 * (num_a1 + 1)) + stored_tag * 2 + (is_barred ? 1 : 0);
}

namespace {

ReducedGame reduce_impl(const ObservedGame& og, bool with_sharp) {
  const StochasticGame& g = og.game;
  const int n = g.num_states();
  const int a1 = static_cast<int>(g.actions1.size());
  if (a1 == 0) throw std::invalid_argument("reduction needs at least one player-1 action");
  const int tags = a1 + 1;

  // Under the min-parity convention the barred copies carry the smallest
  // even priority that never beats a real one: stalling there forever is
  // winning for player 1, an ordinary bounce leaves the parity untouched.
  // The losing sink sits just below it with odd parity.
  int stall_prio = 2;
  for (int p : g.priorities)
    while (stall_prio < p) stall_prio += 2;

  ReducedGame rg;
  rg.num_a1 = a1;
  rg.stall_priority = stall_prio;
  ObservedGame& out = rg.og;
  out.game.actions1 = g.actions1;
  out.game.actions2 = g.actions2;
  if (with_sharp) out.game.actions2.push_back("#");
  const int a2 = static_cast<int>(g.actions2.size());
  const int sharp = a2;  // only valid when with_sharp

  for (int s = 0; s < n; ++s)
    for (int x = 0; x < tags; ++x)
      for (int barred = 0; barred < 2; ++barred) {
        std::string tag = x == 0 ? "0" : g.actions1[x - 1];
        if (barred) tag += "~";
        out.game.state_names.push_back(g.state_names[s] + "|" + tag);
        out.game.owner1.push_back(barred ? false : g.owner1[s]);
        out.game.priorities.push_back(barred ? stall_prio : g.priorities[s]);
        out.obs.push_back(og.obs[s]);
        rg.base_state.push_back(s);
        rg.stored.push_back(x);
        rg.barred.push_back(barred == 1);
      }
  rg.bottom = static_cast<int>(out.game.state_names.size());
  out.game.state_names.push_back("__bottom");
  out.game.owner1.push_back(true);
  out.game.priorities.push_back(stall_prio - 1);
  out.obs.push_back(og.num_obs());
  rg.base_state.push_back(-1);
  rg.stored.push_back(-1);
  rg.barred.push_back(false);
  out.obs_names = og.obs_names;
  out.obs_names.push_back("__dead");
  out.game.initial = rg.encode(g.initial, 0, true);

  out.game.delta.resize(out.game.num_states());
  for (int s = 0; s < n; ++s)
    for (int x = 0; x < tags; ++x) {
      // Unbarred copy.
      {
        auto& row = out.game.delta[rg.encode(s, x, false)];
        if (g.owner1[s]) {
          row.resize(a1);
          for (int a = 0; a < a1; ++a) {
            if (!g.enabled(s, a)) continue;
            if (x != 0 && x - 1 != a) {
              row[a] = Distribution::point(rg.bottom);
              continue;
            }
            Distribution d;
            for (const auto& [t, p] : g.delta[s][a].support)
              d.add(rg.encode(t, og.obs[t] == og.obs[s] ? a + 1 : 0, true), p);
            row[a] = std::move(d);
          }
        } else {
          row.resize(g.delta[s].size());
          for (int b = 0; b < g.num_actions(s); ++b) {
            if (!g.enabled(s, b)) continue;
            Distribution d;
            for (const auto& [t, p] : g.delta[s][b].support)
              d.add(rg.encode(t, og.obs[t] == og.obs[s] ? x : 0, true), p);
            row[b] = std::move(d);
          }
        }
      }
      // Barred copy: stall (collapsed variant only) or bounce back.
      {
        auto& row = out.game.delta[rg.encode(s, x, true)];
        row.resize(with_sharp ? a2 + 1 : a2);
        for (int b = 0; b < a2; ++b) row[b] = Distribution::point(rg.encode(s, x, false));
        if (with_sharp) row[sharp] = Distribution::point(rg.encode(s, x, true));
      }
    }
  auto& brow = out.game.delta[rg.bottom];
  brow.resize(a1);
  for (int a = 0; a < a1; ++a) brow[a] = Distribution::point(rg.bottom);
  return rg;
}

}  // namespace

ReducedGame reduce_collapsed(const ObservedGame& og) { return reduce_impl(og, true); }

ReducedGame reduce_stutter(const ObservedGame& og) { return reduce_impl(og, false); }

ObservedGame lower_bound_gadget(const ObservedGame& og) {
  const StochasticGame& g = og.game;
  ObservedGame out;
  out.game.actions1 = g.actions1;
  out.game.actions2 = g.actions2;
  out.game.state_names = g.state_names;
  out.game.owner1 = g.owner1;
  out.game.priorities = g.priorities;
  out.game.initial = g.initial;
  out.obs = og.obs;
  out.obs_names = og.obs_names;
  out.game.delta.resize(g.num_states());
  if (g.actions2.empty()) throw std::invalid_argument("gadget needs a player-2 action");
  for (int s = 0; s < g.num_states(); ++s) {
    out.game.delta[s].resize(g.delta[s].size());
    for (int a = 0; a < g.num_actions(s); ++a) {
      if (!g.enabled(s, a)) continue;
      Distribution d;
      for (const auto& [t, p] : g.delta[s][a].support) {
        int dummy = out.game.num_states();
        out.game.state_names.push_back("relay:" + g.state_names[s] + ":" + std::to_string(a) +
                                       ":" + g.state_names[t]);
        out.game.owner1.push_back(false);
        out.game.priorities.push_back(g.priorities[t]);
        out.game.delta.emplace_back(1, Distribution::point(t));
        out.obs.push_back(out.num_obs());
        out.obs_names.push_back("relay" + std::to_string(dummy));
        d.add(dummy, p);
      }
      out.game.delta[s][a] = std::move(d);
    }
  }
  return out;
}

std::vector<int> project_play(const std::vector<int>& play, const ReducedGame& rg) {
  std::vector<int> out;
  for (int s : play) {
    if (s == rg.bottom) throw ContainsBottom("play visits the losing sink");
    if (rg.barred[s]) continue;
    out.push_back(rg.base_state[s]);
  }
  return out;
}

StrategyTransducer ObsStrategy::to_transducer(const ObservedGame& og) const {
  StrategyTransducer t;
  t.num_memory = num_memory;
  t.initial_memory = initial_memory;
  t.next = next;
  t.update.assign(num_memory, std::vector<int>(og.game.num_states(), 0));
  for (int m = 0; m < num_memory; ++m)
    for (int s = 0; s < og.game.num_states(); ++s) t.update[m][s] = update[m][og.obs[s]];
  return t;
}

namespace {

// Observations whose states form a closed region where no strategy choice
// matters: memory updates there are pinned to self-loops and never
// enumerated.
std::vector<char> inert_observations(const ObservedGame& og) {
  const StochasticGame& g = og.game;
  const int n = g.num_states();
  std::vector<char> inconsequential(n, 0);
  for (int s = 0; s < n; ++s) {
    if (!g.owner1[s]) {
      inconsequential[s] = 1;
      continue;
    }
    const Distribution* first = nullptr;
    bool same = true;
    for (const auto& d : g.delta[s]) {
      if (d.empty()) continue;
      if (!first)
        first = &d;
      else if (!(d == *first))
        same = false;
    }
    inconsequential[s] = same ? 1 : 0;
  }
  std::vector<char> region(inconsequential);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!region[s]) continue;
      for (const auto& d : g.delta[s])
        for (const auto& [t, _] : d.support)
          if (!region[t]) {
            region[s] = 0;
            changed = true;
          }
    }
  }
  std::vector<char> inert(og.num_obs(), 1);
  for (int s = 0; s < n; ++s)
    if (!region[s]) inert[og.obs[s]] = 0;
  return inert;
}

struct Slot {
  enum Kind { None, Update, Next } kind = None;
  int mem = -1;
  int obs = -1;
};

struct Search {
  const ObservedGame& og;
  int n_mem;
  long limit;
  long nodes = 0;
  std::vector<char> inert;
  std::vector<char> hopeless;  // not almost-sure winnable even with full information
  std::vector<std::vector<int>> upd;
  std::vector<int> nxt;
  int used = 1;
  std::optional<ObsStrategy> found;

  Search(const ObservedGame& game, int bound, long node_limit, const std::vector<char>& bad)
      : og(game), n_mem(bound), limit(node_limit), inert(inert_observations(game)),
        hopeless(bad) {
    upd.assign(n_mem, std::vector<int>(og.num_obs(), -1));
    nxt.assign(n_mem, -1);
    for (int m = 0; m < n_mem; ++m)
      for (int o = 0; o < og.num_obs(); ++o)
        if (inert[o]) upd[m][o] = m;
  }

  // Walks the partial product breadth-first and reports the first
  // undefined slot; deterministic, so the enumeration order is fixed. A
  // candidate that reaches a state player 1 could not win from even with
  // full information is dead, whatever the undefined slots become.
  Slot first_slot(bool* dead) {
    const StochasticGame& g = og.game;
    *dead = false;
    if (hopeless[g.initial]) {
      *dead = true;
      return Slot{};
    }
    std::vector<char> seen(static_cast<size_t>(g.num_states()) * used, 0);
    std::vector<std::pair<int, int>> queue;
    int m0 = upd[0][og.obs[g.initial]];
    if (m0 < 0) return Slot{Slot::Update, 0, og.obs[g.initial]};
    queue.emplace_back(g.initial, m0);
    seen[static_cast<size_t>(g.initial) * used + m0] = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      auto [s, m] = queue[qi];
      std::vector<int> succ;
      if (g.owner1[s]) {
        int a = nxt[m];
        if (a < 0) return Slot{Slot::Next, m, -1};
        if (!g.enabled(s, a)) {
          *dead = true;  // this candidate plays a disabled action
          return Slot{};
        }
        for (const auto& [t, _] : g.delta[s][a].support) succ.push_back(t);
      } else {
        for (int b = 0; b < g.num_actions(s); ++b)
          if (g.enabled(s, b))
            for (const auto& [t, _] : g.delta[s][b].support) succ.push_back(t);
      }
      for (int t : succ) {
        if (hopeless[t]) {
          *dead = true;
          return Slot{};
        }
        int m2 = upd[m][og.obs[t]];
        if (m2 < 0) return Slot{Slot::Update, m, og.obs[t]};
        size_t key = static_cast<size_t>(t) * used + m2;
        if (!seen[key]) {
          seen[key] = 1;
          queue.emplace_back(t, m2);
        }
      }
    }
    return Slot{};
  }

  bool verify_complete() {
    ObsStrategy s;
    s.num_memory = n_mem;
    s.initial_memory = 0;
    s.update = upd;
    s.next = nxt;
    for (int m = 0; m < n_mem; ++m) {
      if (s.next[m] < 0) s.next[m] = 0;
      for (int o = 0; o < og.num_obs(); ++o)
        if (s.update[m][o] < 0) s.update[m][o] = m;
    }
    Mdp fixed = apply_strategy(og.game, s.to_transducer(og));
    if (!mdp_min_value_one(fixed)[fixed.initial]) return false;
    found = s;
    return true;
  }

  // Over-approximation used for pruning: unresolved memory hops become
  // per-visit player-1 choices, so if even this relaxed game is lost from
  // the initial state no completion of the current partial table wins.
  bool prune_hopeless() {
    const StochasticGame& g = og.game;
    const int n = g.num_states();
    const int mem_slots = used + 1;  // last slot: fully free memory
    const int free_mem = used;
    StochasticGame pg;
    pg.actions1 = g.actions1;
    for (int m = 0; m <= used; ++m) pg.actions1.push_back("mem" + std::to_string(m));
    pg.actions2 = g.actions2;
    const int pick_base = static_cast<int>(g.actions1.size());
    auto node = [&](int s, int m) { return s * mem_slots + m; };
    const int angel_base = n * mem_slots;
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < mem_slots; ++m) {
        pg.state_names.push_back("n" + std::to_string(s) + "_" + std::to_string(m));
        pg.owner1.push_back(g.owner1[s]);
        pg.priorities.push_back(g.priorities[s]);
      }
    for (int s = 0; s < n; ++s) {
      pg.state_names.push_back("angel" + std::to_string(s));
      pg.owner1.push_back(true);
      pg.priorities.push_back(g.priorities[s]);
    }
    pg.delta.resize(pg.num_states());
    auto hop = [&](int t, Distribution* d, const Rational& p, int m_known) {
      if (m_known >= 0)
        d->add(node(t, m_known), p);
      else
        d->add(angel_base + t, p);
    };
    auto memory_after = [&](int m, int t) -> int {
      if (m == free_mem) return -1;
      return upd[m][og.obs[t]];  // may be -1: unresolved
    };
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < mem_slots; ++m) {
        auto& row = pg.delta[node(s, m)];
        if (g.owner1[s]) {
          int forced = m == free_mem ? -1 : nxt[m];
          row.resize(g.delta[s].size());
          for (int a = 0; a < g.num_actions(s); ++a) {
            if (!g.enabled(s, a)) continue;
            if (forced >= 0 && a != forced) continue;
            Distribution d;
            for (const auto& [t, p] : g.delta[s][a].support)
              hop(t, &d, p, memory_after(m, t));
            row[a] = std::move(d);
          }
          if (forced >= 0 && !g.enabled(s, forced)) {
            // Dead: the stored action is disabled here. Model as a loss.
            row.assign(g.delta[s].size(), Distribution());
            row.resize(std::max<size_t>(1, row.size()));
            row[0] = Distribution::point(node(s, m));
            pg.priorities[node(s, m)] = 1;
            pg.owner1[node(s, m)] = true;
          }
        } else {
          row.resize(g.delta[s].size());
          for (int b = 0; b < g.num_actions(s); ++b) {
            if (!g.enabled(s, b)) continue;
            Distribution d;
            for (const auto& [t, p] : g.delta[s][b].support)
              hop(t, &d, p, memory_after(m, t));
            row[b] = std::move(d);
          }
        }
      }
    for (int t = 0; t < n; ++t) {
      auto& row = pg.delta[angel_base + t];
      row.resize(pick_base + mem_slots);
      for (int m = 0; m <= used; ++m) {
        int mm = m == used ? free_mem : m;
        row[pick_base + m] = Distribution::point(node(t, mm));
      }
    }
    pg.initial = angel_base + g.initial;
    int m0 = upd[0][og.obs[g.initial]];
    if (m0 >= 0) pg.initial = node(g.initial, m0);
    auto asr = almost_sure_parity(pg);
    return !asr.winning[pg.initial];
  }

  bool dfs(int depth) {
    if (++nodes > limit)
      throw BoundTooLargeForEnumeration("enumeration exceeded " + std::to_string(limit) +
                                        " nodes");
    bool dead = false;
    Slot slot = first_slot(&dead);
    if (dead) return false;
    if (slot.kind == Slot::None) {
      if (used < n_mem) return false;  // already enumerated at a lower bound
      return verify_complete();
    }
    if (depth < 6 && slot.kind == Slot::Update && prune_hopeless()) return false;
    if (slot.kind == Slot::Next) {
      for (int a = 0; a < static_cast<int>(og.game.actions1.size()); ++a) {
        nxt[slot.mem] = a;
        if (dfs(depth + 1)) return true;
        nxt[slot.mem] = -1;
      }
      return false;
    }
    int cands = std::min(used + 1, n_mem);
    for (int m2 = 0; m2 < cands; ++m2) {
      bool fresh = m2 == used;
      if (fresh) ++used;
      upd[slot.mem][slot.obs] = m2;
      if (dfs(depth + 1)) return true;
      upd[slot.mem][slot.obs] = -1;
      if (fresh) --used;
    }
    return false;
  }
};

}  // namespace

SearchResult bounded_memory_search(const ObservedGame& og, int mem_bound, long node_limit) {
  if (mem_bound < 1) throw std::invalid_argument("memory bound must be at least 1");
  auto rep = validate_observed(og);
  if (!rep.ok()) throw std::invalid_argument("invalid observed game: " + rep.problems.front());
  // Full-information losers prune the enumeration: a candidate whose play
  // graph touches one cannot be almost-sure winning.
  auto full_info = almost_sure_parity(og.game);
  std::vector<char> hopeless(og.game.num_states(), 0);
  for (int s = 0; s < og.game.num_states(); ++s) hopeless[s] = full_info.winning[s] ? 0 : 1;
  SearchResult out;
  out.bound = mem_bound;
  long spent = 0;
  for (int n = 1; n <= mem_bound; ++n) {
    Search s(og, n, node_limit - spent, hopeless);
    if (s.dfs(0)) {
      out.strategy = s.found;
      out.explored = spent + s.nodes;
      return out;
    }
    spent += s.nodes;
  }
  out.explored = spent;
  return out;
}

}  // namespace composynth
