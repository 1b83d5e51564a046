#include <algorithm>
#include <stdexcept>

#include "composynth/solve.hpp"

namespace composynth {

namespace {

int smallest_enabled_g(const StochasticGame& g, int s) {
  for (int a = 0; a < g.num_actions(s); ++a)
    if (g.enabled(s, a)) return a;
  throw std::logic_error("game state without enabled action: " + g.state_names[s]);
}

// Positive-probability attractor for `player1` toward X. The attracting
// player needs one action with positive mass toward the set; the opponent
// joins only when every action makes positive progress. Records the
// attracting player's action at join time.
std::vector<bool> attr_pos(const StochasticGame& g, const std::vector<bool>& x, bool player1,
                           std::vector<int>* strat) {
  const int n = g.num_states();
  std::vector<bool> in(x);
  bool changed = true;
  auto touches = [&](int s, int a) {
    if (!g.enabled(s, a)) return false;
    for (const auto& [t, _] : g.delta[s][a].support)
      if (in[t]) return true;
    return false;
  };
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (in[s]) continue;
      if (g.owner1[s] == player1) {
        for (int a = 0; a < g.num_actions(s); ++a)
          if (touches(s, a)) {
            in[s] = true;
            if (strat) (*strat)[s] = a;
            changed = true;
            break;
          }
      } else {
        bool all = true, any = false;
        for (int a = 0; a < g.num_actions(s); ++a) {
          if (!g.enabled(s, a)) continue;
          any = true;
          if (!touches(s, a)) all = false;
        }
        if (any && all) {
          in[s] = true;
          changed = true;
        }
      }
    }
  }
  return in;
}

// Almost-sure attractor for `player1` toward X: the greatest set Y such
// that the player can force, staying inside Y, positive progress toward X
// at every step; from Y the target is reached with probability one.
std::vector<bool> attr_as(const StochasticGame& g, const std::vector<bool>& x, bool player1,
                          std::vector<int>* strat) {
  const int n = g.num_states();
  std::vector<bool> y(n, true);
  auto ok = [&](int s, int a, const std::vector<bool>& yy, const std::vector<bool>& zz) {
    if (!g.enabled(s, a)) return false;
    bool hit = false;
    for (const auto& [t, _] : g.delta[s][a].support) {
      if (!yy[t]) return false;
      if (zz[t]) hit = true;
    }
    return hit;
  };
  auto mu = [&](const std::vector<bool>& yy, std::vector<int>* record) {
    std::vector<bool> z(x);
    bool grew = true;
    while (grew) {
      grew = false;
      for (int s = 0; s < n; ++s) {
        if (z[s]) continue;
        if (g.owner1[s] == player1) {
          for (int a = 0; a < g.num_actions(s); ++a)
            if (ok(s, a, yy, z)) {
              z[s] = true;
              if (record) (*record)[s] = a;
              grew = true;
              break;
            }
        } else {
          bool all = true, any = false;
          for (int a = 0; a < g.num_actions(s); ++a) {
            if (!g.enabled(s, a)) continue;
            any = true;
            if (!ok(s, a, yy, z)) all = false;
          }
          if (any && all) {
            z[s] = true;
            grew = true;
          }
        }
      }
    }
    return z;
  };
  while (true) {
    auto z = mu(y, nullptr);
    if (z == y) break;
    y = z;
  }
  if (strat) mu(y, strat);
  return y;
}

struct QGame {
  StochasticGame g;
  int top = -1;  // absorbing even sink, if present
  int bot = -1;  // absorbing odd sink, if present
};

struct QResult {
  std::vector<bool> p1;
  std::vector<int> s1, s2;  // partial memoryless choices, -1 where unset
};

// Subgame induced on `alive`. The restricted player keeps only actions
// whose support stays alive; the other player's enabled actions must
// already be clean, which the attractor complements guarantee.
QGame induced_sub(const QGame& q, const std::vector<bool>& alive, bool restrict_player1,
                  std::vector<int>* back) {
  const StochasticGame& g = q.g;
  const int n = g.num_states();
  std::vector<int> to_new(n, -1);
  QGame sub;
  for (int s = 0; s < n; ++s)
    if (alive[s]) {
      to_new[s] = sub.g.num_states();
      back->push_back(s);
      sub.g.state_names.push_back(g.state_names[s]);
      sub.g.owner1.push_back(g.owner1[s]);
      sub.g.priorities.push_back(g.priorities[s]);
    }
  sub.g.actions1 = g.actions1;
  sub.g.actions2 = g.actions2;
  sub.g.initial = 0;
  sub.g.delta.resize(sub.g.num_states());
  if (q.top >= 0 && alive[q.top]) sub.top = to_new[q.top];
  if (q.bot >= 0 && alive[q.bot]) sub.bot = to_new[q.bot];
  for (int s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    auto& row = sub.g.delta[to_new[s]];
    row.resize(g.delta[s].size());
    bool restricted = g.owner1[s] == restrict_player1;
    bool any = false;
    for (int a = 0; a < g.num_actions(s); ++a) {
      if (!g.enabled(s, a)) continue;
      bool clean = true;
      for (const auto& [t, _] : g.delta[s][a].support)
        if (!alive[t]) clean = false;
      if (!clean) {
        if (!restricted)
          throw std::logic_error("attractor complement not closed for the unrestricted player");
        continue;
      }
      Distribution d;
      for (const auto& [t, p] : g.delta[s][a].support) d.add(to_new[t], p);
      row[a] = std::move(d);
      any = true;
    }
    if (!any) throw std::logic_error("subgame state lost all actions");
  }
  return sub;
}

// Subgame with rerouting: every action survives, mass into removed states
// is redirected to the even paradise sink (the removed region is already
// classified for player 1).
QGame routed_sub_top(const QGame& q, const std::vector<bool>& alive, std::vector<int>* back) {
  const StochasticGame& g = q.g;
  const int n = g.num_states();
  std::vector<int> to_new(n, -1);
  QGame sub;
  for (int s = 0; s < n; ++s)
    if (alive[s]) {
      to_new[s] = sub.g.num_states();
      back->push_back(s);
      sub.g.state_names.push_back(g.state_names[s]);
      sub.g.owner1.push_back(g.owner1[s]);
      sub.g.priorities.push_back(g.priorities[s]);
    }
  sub.g.actions1 = g.actions1;
  sub.g.actions2 = g.actions2;
  sub.g.initial = 0;
  if (q.top >= 0 && alive[q.top]) sub.top = to_new[q.top];
  if (q.bot >= 0 && alive[q.bot]) sub.bot = to_new[q.bot];
  int sink = sub.top;
  auto ensure_sink = [&]() {
    if (sink >= 0) return;
    sink = sub.g.num_states();
    sub.top = sink;
    back->push_back(-1);
    sub.g.state_names.push_back("__top");
    sub.g.owner1.push_back(!sub.g.actions2.empty() ? false : true);
    sub.g.priorities.push_back(0);
  };
  std::vector<std::vector<Distribution>> rows(sub.g.num_states());
  for (int s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    auto& row = rows[to_new[s]];
    row.resize(g.delta[s].size());
    for (int a = 0; a < g.num_actions(s); ++a) {
      if (!g.enabled(s, a)) continue;
      Distribution d;
      for (const auto& [t, p] : g.delta[s][a].support) {
        if (alive[t]) {
          d.add(to_new[t], p);
        } else {
          ensure_sink();
          d.add(sink, p);
        }
      }
      row[a] = std::move(d);
    }
  }
  sub.g.delta = std::move(rows);
  if (sink >= 0 && sink >= static_cast<int>(sub.g.delta.size())) {
    sub.g.delta.resize(sink + 1);
    sub.g.delta[sink] = {Distribution::point(sink)};
  }
  return sub;
}

QResult qual_rec(const QGame& q) {
  const StochasticGame& g = q.g;
  const int n = g.num_states();
  QResult r{std::vector<bool>(n, false), std::vector<int>(n, -1), std::vector<int>(n, -1)};
  if (n == 0) return r;

  int d = g.priorities[0];
  for (int p : g.priorities) d = std::min(d, p);
  std::vector<bool> pset(n, false);
  for (int s = 0; s < n; ++s) pset[s] = g.priorities[s] == d;

  if (d % 2 == 0) {
    std::vector<int> attr1(n, -1);
    auto a = attr_pos(g, pset, true, &attr1);
    std::vector<bool> c(n, false);
    bool c_empty = true;
    for (int s = 0; s < n; ++s) {
      c[s] = !a[s];
      if (c[s]) c_empty = false;
    }
    auto fill_attr_side1 = [&]() {
      for (int s = 0; s < n; ++s) {
        if (!a[s] || !g.owner1[s]) continue;
        r.s1[s] = pset[s] ? smallest_enabled_g(g, s) : attr1[s];
        if (r.s1[s] < 0) r.s1[s] = smallest_enabled_g(g, s);
      }
    };
    if (c_empty) {
      r.p1.assign(n, true);
      fill_attr_side1();
      return r;
    }
    std::vector<int> back;
    QGame sub = induced_sub(q, c, /*restrict_player1=*/false, &back);
    QResult rs = qual_rec(sub);
    std::vector<bool> w2(n, false);
    bool w2_empty = true;
    for (int i = 0; i < sub.g.num_states(); ++i)
      if (!rs.p1[i]) {
        w2[back[i]] = true;
        w2_empty = false;
      }
    if (w2_empty) {
      r.p1.assign(n, true);
      for (int i = 0; i < sub.g.num_states(); ++i)
        if (rs.s1[i] >= 0) r.s1[back[i]] = rs.s1[i];
      fill_attr_side1();
      return r;
    }
    std::vector<int> attr2(n, -1);
    auto b = attr_pos(g, w2, false, &attr2);
    std::vector<bool> alive(n, false);
    for (int s = 0; s < n; ++s) alive[s] = !b[s];
    std::vector<int> back2;
    QGame sub2 = induced_sub(q, alive, /*restrict_player1=*/true, &back2);
    QResult r2 = qual_rec(sub2);
    for (int i = 0; i < sub2.g.num_states(); ++i) {
      r.p1[back2[i]] = r2.p1[i];
      if (r2.s1[i] >= 0) r.s1[back2[i]] = r2.s1[i];
      if (r2.s2[i] >= 0) r.s2[back2[i]] = r2.s2[i];
    }
    for (int s = 0; s < n; ++s)
      if (b[s]) r.p1[s] = false;
    for (int i = 0; i < sub.g.num_states(); ++i)
      if (!rs.p1[i] && rs.s2[i] >= 0) r.s2[back[i]] = rs.s2[i];
    for (int s = 0; s < n; ++s)
      if (b[s] && !w2[s] && !g.owner1[s]) r.s2[s] = attr2[s] >= 0 ? attr2[s] : smallest_enabled_g(g, s);
    return r;
  }

  // Odd minimum: the mirror case.
  std::vector<int> attr2(n, -1);
  auto a = attr_pos(g, pset, false, &attr2);
  std::vector<bool> c(n, false);
  bool c_empty = true;
  for (int s = 0; s < n; ++s) {
    c[s] = !a[s];
    if (c[s]) c_empty = false;
  }
  auto fill_attr_side2 = [&]() {
    for (int s = 0; s < n; ++s) {
      if (!a[s] || g.owner1[s]) continue;
      r.s2[s] = pset[s] ? smallest_enabled_g(g, s) : attr2[s];
      if (r.s2[s] < 0) r.s2[s] = smallest_enabled_g(g, s);
    }
  };
  if (c_empty) {
    r.p1.assign(n, false);
    fill_attr_side2();
    return r;
  }
  std::vector<int> back;
  QGame sub = induced_sub(q, c, /*restrict_player1=*/true, &back);
  QResult rs = qual_rec(sub);
  std::vector<bool> w1(n, false);
  bool w1_empty = true;
  for (int i = 0; i < sub.g.num_states(); ++i)
    if (rs.p1[i]) {
      w1[back[i]] = true;
      w1_empty = false;
    }
  if (w1_empty) {
    r.p1.assign(n, false);
    for (int i = 0; i < sub.g.num_states(); ++i)
      if (rs.s2[i] >= 0) r.s2[back[i]] = rs.s2[i];
    fill_attr_side2();
    return r;
  }
  std::vector<int> asattr(n, -1);
  auto b = attr_as(g, w1, true, &asattr);
  std::vector<bool> alive(n, false);
  for (int s = 0; s < n; ++s) alive[s] = !b[s];
  std::vector<int> back2;
  QGame sub2 = routed_sub_top(q, alive, &back2);
  QResult r2 = qual_rec(sub2);
  for (int i = 0; i < sub2.g.num_states(); ++i) {
    if (back2[i] < 0) continue;  // fresh sink
    r.p1[back2[i]] = r2.p1[i];
    if (r2.s1[i] >= 0) r.s1[back2[i]] = r2.s1[i];
    if (r2.s2[i] >= 0) r.s2[back2[i]] = r2.s2[i];
  }
  for (int s = 0; s < n; ++s)
    if (b[s]) r.p1[s] = true;
  for (int i = 0; i < sub.g.num_states(); ++i)
    if (rs.p1[i] && rs.s1[i] >= 0) r.s1[back[i]] = rs.s1[i];
  for (int s = 0; s < n; ++s)
    if (b[s] && !w1[s] && g.owner1[s]) r.s1[s] = asattr[s] >= 0 ? asattr[s] : smallest_enabled_g(g, s);
  return r;
}

}  // namespace

Mdp fix_memoryless(const StochasticGame& g, const MemorylessStrategy& s, bool fix_player1) {
  Mdp m;
  m.state_names = g.state_names;
  m.priorities = g.priorities;
  m.initial = g.initial;
  // Action slots keep the per-owner numbering of the game; names are only
  // for the free player.
  m.action_names = fix_player1 ? g.actions2 : g.actions1;
  m.delta.resize(g.num_states());
  for (int st = 0; st < g.num_states(); ++st) {
    if (g.owner1[st] == fix_player1) {
      int a = s.choice[st];
      if (a < 0 || !g.enabled(st, a))
        throw DisabledAction("fixed strategy has no enabled choice at " + g.state_names[st]);
      m.delta[st].resize(a + 1);
      m.delta[st][a] = g.delta[st][a];
    } else {
      m.delta[st] = g.delta[st];
    }
  }
  return m;
}

AlmostSureResult almost_sure_parity(const StochasticGame& g) {
  QGame q{g, -1, -1};
  QResult r = qual_rec(q);
  AlmostSureResult out;
  out.winning.assign(g.num_states(), false);
  out.witness.choice.assign(g.num_states(), -1);
  for (int s = 0; s < g.num_states(); ++s) {
    out.winning[s] = r.p1[s];
    if (g.owner1[s]) out.witness.choice[s] = r.s1[s] >= 0 ? r.s1[s] : smallest_enabled_g(g, s);
  }
  // Certification: with the witness fixed, the opponent must be unable to
  // reach a spoiling end component from any winning state.
  Mdp opp = fix_memoryless(g, out.witness, true);
  auto ok = mdp_min_value_one(opp);
  for (int s = 0; s < g.num_states(); ++s)
    if (out.winning[s] && !ok[s])
      throw std::logic_error("almost_sure_parity: witness failed certification at " +
                             g.state_names[s]);
  return out;
}

ReachGameResult reach_game_value(const StochasticGame& g, const std::vector<bool>& target) {
  const int n = g.num_states();
  ReachGameResult out;
  out.strategy1.choice.assign(n, -1);
  out.strategy2.choice.assign(n, -1);

  MemorylessStrategy sigma;
  sigma.choice.assign(n, -1);
  for (int s = 0; s < n; ++s)
    if (g.owner1[s]) sigma.choice[s] = smallest_enabled_g(g, s);

  std::vector<Rational> v;
  MemorylessStrategy response;
  while (true) {
    Mdp fixed = fix_memoryless(g, sigma, true);
    v = mdp_min_reach(fixed, target, &response);
    bool improved = false;
    for (int s = 0; s < n; ++s) {
      if (!g.owner1[s] || target[s]) continue;
      Rational best = v[s];
      int best_a = sigma.choice[s];
      for (int a = 0; a < g.num_actions(s); ++a) {
        if (!g.enabled(s, a)) continue;
        Rational look(0);
        for (const auto& [t, p] : g.delta[s][a].support) look += p * v[t];
        if (look > best) {
          best = look;
          best_a = a;
        }
      }
      if (best > v[s]) {
        sigma.choice[s] = best_a;
        improved = true;
      }
    }
    if (!improved) break;
  }
  out.value = v;
  out.strategy1 = sigma;
  for (int s = 0; s < n; ++s)
    if (!g.owner1[s]) out.strategy2.choice[s] = response.choice[s];
  return out;
}

namespace {

// Exact value of a fixed player-1 strategy: the opponent's best response,
// solved on the induced MDP.
std::vector<Rational> eval_strategy(const StochasticGame& g, const MemorylessStrategy& s) {
  return mdp_min_parity_value(fix_memoryless(g, s, true)).first;
}

// One pass of strict-improvement switches against the evaluation v.
bool improve_strict(const StochasticGame& g, const std::vector<Rational>& v,
                    MemorylessStrategy* sigma) {
  bool improved = false;
  for (int s = 0; s < g.num_states(); ++s) {
    if (!g.owner1[s]) continue;
    Rational best = v[s];
    int best_a = (*sigma).choice[s];
    for (int a = 0; a < g.num_actions(s); ++a) {
      if (!g.enabled(s, a)) continue;
      Rational look(0);
      for (const auto& [t, p] : g.delta[s][a].support) look += p * v[t];
      if (look > best) {
        best = look;
        best_a = a;
      }
    }
    if (best > v[s]) {
      sigma->choice[s] = best_a;
      improved = true;
    }
  }
  return improved;
}

// Value-preserving plateau games: within a class of equal evaluation,
// re-select player-1 choices by the qualitative parity analysis, with
// class exits absorbed by their value side. Upward deviations of the
// opponent only help player 1, so they are absorbed as even paradise.
bool plateau_correct(const StochasticGame& g, const std::vector<Rational>& v,
                     MemorylessStrategy* sigma) {
  const int n = g.num_states();
  std::vector<Rational> classes;
  for (int s = 0; s < n; ++s)
    if (!v[s].is_one() &&
        std::find(classes.begin(), classes.end(), v[s]) == classes.end())
      classes.push_back(v[s]);
  auto lookahead = [&](int s, int a) {
    Rational look(0);
    for (const auto& [t, p] : g.delta[s][a].support) look += p * v[t];
    return look;
  };
  bool changed = false;
  for (const Rational& r : classes) {
    std::vector<int> members;
    for (int s = 0; s < n; ++s)
      if (v[s] == r) members.push_back(s);
    StochasticGame pg;
    pg.actions1 = g.actions1;
    pg.actions2 = g.actions2;
    std::vector<int> local(n, -1);
    for (size_t i = 0; i < members.size(); ++i) {
      local[members[i]] = static_cast<int>(i);
      pg.state_names.push_back(g.state_names[members[i]]);
      pg.owner1.push_back(g.owner1[members[i]]);
      pg.priorities.push_back(g.priorities[members[i]]);
    }
    const int top = static_cast<int>(members.size());
    const int bot = top + 1;
    pg.state_names.push_back("__up");
    pg.owner1.push_back(false);
    pg.priorities.push_back(0);
    pg.state_names.push_back("__down");
    pg.owner1.push_back(false);
    pg.priorities.push_back(1);
    pg.initial = 0;
    pg.delta.resize(pg.num_states());
    if (pg.actions2.empty()) pg.actions2.push_back("stay");
    pg.delta[top] = {Distribution::point(top)};
    pg.delta[bot] = {Distribution::point(bot)};
    for (int s : members) {
      auto& row = pg.delta[local[s]];
      row.resize(g.delta[s].size());
      bool any = false;
      for (int a = 0; a < g.num_actions(s); ++a) {
        if (!g.enabled(s, a) || lookahead(s, a) != r) continue;
        Distribution d;
        for (const auto& [t, p] : g.delta[s][a].support) {
          if (local[t] >= 0)
            d.add(local[t], p);
          else
            d.add(v[t] > r ? top : bot, p);
        }
        row[a] = std::move(d);
        any = true;
      }
      if (!any) {
        // No value-preserving action: leave the state inert for this pass.
        row.clear();
        row.push_back(Distribution::point(g.owner1[s] ? bot : top));
      }
    }
    auto asr = almost_sure_parity(pg);
    for (int s : members) {
      if (!g.owner1[s] || !asr.winning[local[s]]) continue;
      int pick = asr.witness.choice[local[s]];
      if (pick >= 0 && g.enabled(s, pick) && lookahead(s, pick) == r &&
          sigma->choice[s] != pick) {
        sigma->choice[s] = pick;
        changed = true;
      }
    }
  }
  return changed;
}

// Strategy iteration with plateau correction; stops at a candidate that
// may still be conservative, so callers must close the primal/dual gap.
std::pair<std::vector<Rational>, MemorylessStrategy> iterate_side(const StochasticGame& g) {
  MemorylessStrategy sigma;
  sigma.choice.assign(g.num_states(), -1);
  for (int s = 0; s < g.num_states(); ++s)
    if (g.owner1[s]) sigma.choice[s] = smallest_enabled_g(g, s);
  std::vector<Rational> v = eval_strategy(g, sigma);
  for (int round = 0; round < 60; ++round) {
    if (improve_strict(g, v, &sigma)) {
      v = eval_strategy(g, sigma);
      continue;
    }
    MemorylessStrategy before = sigma;
    if (!plateau_correct(g, v, &sigma)) break;
    auto v2 = eval_strategy(g, sigma);
    bool dropped = false;
    for (int s = 0; s < g.num_states(); ++s)
      if (v2[s] < v[s]) dropped = true;
    if (dropped) {
      sigma = before;  // heuristic step rejected
      break;
    }
    bool moved = false;
    for (int s = 0; s < g.num_states(); ++s)
      if (v2[s] != v[s]) moved = true;
    v = v2;
    if (!moved) break;
  }
  return {v, sigma};
}

// Complete fallback: the pointwise maximum over all pure memoryless
// player-1 strategies, each evaluated exactly. Sound by memoryless
// determinacy; exponential, so reserved for games the iteration cannot
// certify.
std::pair<std::vector<Rational>, MemorylessStrategy> enumerate_side(const StochasticGame& g) {
  const int n = g.num_states();
  std::vector<int> owned;
  for (int s = 0; s < n; ++s)
    if (g.owner1[s]) owned.push_back(s);
  std::vector<std::vector<int>> options(owned.size());
  long double count = 1;
  for (size_t i = 0; i < owned.size(); ++i) {
    for (int a = 0; a < g.num_actions(owned[i]); ++a)
      if (g.enabled(owned[i], a)) options[i].push_back(a);
    count *= options[i].size();
    if (count > 4e6)
      throw std::logic_error("parity_value: exact fallback enumeration is too large");
  }
  MemorylessStrategy sigma;
  sigma.choice.assign(n, -1);
  std::vector<int> pick(owned.size(), 0);
  std::vector<Rational> best(n, Rational(0));
  MemorylessStrategy best_sigma;
  bool have_best = false;
  while (true) {
    for (size_t i = 0; i < owned.size(); ++i) sigma.choice[owned[i]] = options[i][pick[i]];
    auto v = eval_strategy(g, sigma);
    bool dominates = true, improves_any = false;
    for (int s = 0; s < n; ++s) {
      if (v[s] > best[s]) {
        best[s] = v[s];
        improves_any = true;
      }
      if (v[s] < best[s]) dominates = false;
    }
    if (!have_best || (dominates && improves_any)) {
      best_sigma = sigma;
      have_best = true;
    }
    size_t i = 0;
    while (i < owned.size() && pick[i] + 1 == static_cast<int>(options[i].size()))
      pick[i++] = 0;
    if (i == owned.size()) break;
    ++pick[i];
  }
  // An optimal memoryless strategy attains the value everywhere at once;
  // re-scan for one matching the pointwise maximum.
  auto attained = eval_strategy(g, best_sigma);
  if (attained != best) {
    std::fill(pick.begin(), pick.end(), 0);
    bool found = false;
    while (!found) {
      for (size_t i = 0; i < owned.size(); ++i) sigma.choice[owned[i]] = options[i][pick[i]];
      if (eval_strategy(g, sigma) == best) {
        best_sigma = sigma;
        found = true;
        break;
      }
      size_t i = 0;
      while (i < owned.size() && pick[i] + 1 == static_cast<int>(options[i].size()))
        pick[i++] = 0;
      if (i == owned.size()) break;
      ++pick[i];
    }
    if (!found)
      throw std::logic_error("parity_value: no single memoryless strategy attains the maximum");
  }
  return {best, best_sigma};
}

}  // namespace

ParityValueResult parity_value(const StochasticGame& g) {
  const int n = g.num_states();
  StochasticGame swapped = g.swap_players();

  auto [v, sigma] = iterate_side(g);
  auto [dual, tau] = iterate_side(swapped);

  bool closed = true;
  for (int s = 0; s < n; ++s)
    if (v[s] + dual[s] != Rational(1)) closed = false;
  if (!closed) {
    // The iteration left a gap; fall back to the complete enumeration on
    // both sides.
    std::tie(v, sigma) = enumerate_side(g);
    std::tie(dual, tau) = enumerate_side(swapped);
    for (int s = 0; s < n; ++s)
      if (v[s] + dual[s] != Rational(1))
        throw std::logic_error("parity_value: exact enumeration failed to close the gap at " +
                               g.state_names[s]);
  }

  ParityValueResult out;
  out.value = v;
  out.strategy1.choice.assign(n, -1);
  out.strategy2.choice.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    if (g.owner1[s]) out.strategy1.choice[s] = sigma.choice[s];
    else out.strategy2.choice[s] = tau.choice[s];
  }

  // Certification is unconditional: each strategy's exact best response
  // meets the reported value, which sandwiches the true value.
  auto lo = eval_strategy(g, out.strategy1);
  auto hi = eval_strategy(swapped, tau);
  for (int s = 0; s < n; ++s)
    if (lo[s] != v[s] || hi[s] != dual[s])
      throw std::logic_error("parity_value: witness certification failed at " +
                             g.state_names[s]);
  // The value-one states must coincide with the graph-based qualitative
  // analysis; a disagreement is a hard internal error.
  auto qual = almost_sure_parity(g);
  for (int s = 0; s < n; ++s)
    if (qual.winning[s] != v[s].is_one())
      throw std::logic_error("parity_value: quantitative and qualitative analyses disagree at " +
                             g.state_names[s]);
  return out;
}

}  // namespace composynth
