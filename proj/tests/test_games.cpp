#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "composynth/chain.hpp"
#include "composynth/gen.hpp"
#include "composynth/solve.hpp"

using namespace composynth;

namespace {

std::vector<int> enabled_actions(const StochasticGame& g, int s) {
  std::vector<int> out;
  for (int a = 0; a < g.num_actions(s); ++a)
    if (g.enabled(s, a)) out.push_back(a);
  return out;
}

// All pure memoryless strategies of one player.
std::vector<MemorylessStrategy> all_strategies(const StochasticGame& g, bool player1) {
  std::vector<int> owned;
  for (int s = 0; s < g.num_states(); ++s)
    if (g.owner1[s] == player1) owned.push_back(s);
  std::vector<MemorylessStrategy> out;
  MemorylessStrategy cur;
  cur.choice.assign(g.num_states(), -1);
  std::vector<int> pick(owned.size(), 0);
  while (true) {
    for (size_t i = 0; i < owned.size(); ++i)
      cur.choice[owned[i]] = enabled_actions(g, owned[i])[pick[i]];
    out.push_back(cur);
    size_t i = 0;
    while (i < owned.size() &&
           pick[i] + 1 == static_cast<int>(enabled_actions(g, owned[i]).size()))
      pick[i++] = 0;
    if (i == owned.size()) break;
    ++pick[i];
  }
  return out;
}

Chain chain_of(const StochasticGame& g, const MemorylessStrategy& s1,
               const MemorylessStrategy& s2) {
  Chain c;
  c.step.resize(g.num_states());
  for (int s = 0; s < g.num_states(); ++s)
    c.step[s] = g.delta[s][g.owner1[s] ? s1.choice[s] : s2.choice[s]];
  return c;
}

// Double-enumeration oracle over pure memoryless strategy pairs; checks
// that max-min meets min-max and returns the common value, per state.
std::vector<Rational> enumeration_value(const StochasticGame& g) {
  auto s1s = all_strategies(g, true);
  auto s2s = all_strategies(g, false);
  const int n = g.num_states();
  std::vector<std::vector<std::vector<Rational>>> table(s1s.size());
  for (size_t i = 0; i < s1s.size(); ++i) {
    table[i].resize(s2s.size());
    for (size_t j = 0; j < s2s.size(); ++j)
      table[i][j] = chain_parity(chain_of(g, s1s[i], s2s[j]), g.priorities);
  }
  std::vector<Rational> value(n);
  for (int s = 0; s < n; ++s) {
    Rational maxmin(0);
    for (size_t i = 0; i < s1s.size(); ++i) {
      Rational worst(1);
      for (size_t j = 0; j < s2s.size(); ++j)
        if (table[i][j][s] < worst) worst = table[i][j][s];
      if (worst > maxmin) maxmin = worst;
    }
    Rational minmax(1);
    for (size_t j = 0; j < s2s.size(); ++j) {
      Rational best(0);
      for (size_t i = 0; i < s1s.size(); ++i)
        if (table[i][j][s] > best) best = table[i][j][s];
      if (best < minmax) minmax = best;
    }
    REQUIRE(maxmin == minmax);
    value[s] = maxmin;
  }
  return value;
}

// Qualitative oracle: some player-1 memoryless strategy wins almost
// surely, evaluated by the (separately tested) MDP analysis.
std::vector<bool> enumeration_almost_sure(const StochasticGame& g) {
  std::vector<bool> win(g.num_states(), false);
  for (const auto& s1 : all_strategies(g, true)) {
    auto one = mdp_min_value_one(fix_memoryless(g, s1, true));
    for (int s = 0; s < g.num_states(); ++s)
      if (one[s]) win[s] = true;
  }
  return win;
}

}  // namespace

TEST_CASE("almost_sure_parity trivial cases") {
  StochasticGame g;
  g.actions1 = {"a"};
  g.actions2 = {"b"};
  g.state_names = {"s0", "s1"};
  g.owner1 = {true, false};
  g.priorities = {0, 2};
  g.initial = 0;
  g.delta = {{Distribution::point(1)}, {Distribution::point(0)}};
  auto r = almost_sure_parity(g);
  CHECK(r.winning == std::vector<bool>{true, true});

  g.priorities = {1, 1};
  auto r2 = almost_sure_parity(g);
  CHECK(r2.winning == std::vector<bool>{false, false});
}

TEST_CASE("almost_sure_parity matches strategy enumeration on small games") {
  Rng rng(101);
  for (int i = 0; i < 120; ++i) {
    StochasticGame g = gen_game(rng, 2 + rng.upto(5), 1 + rng.upto(3), 1 + rng.upto(2), 3,
                                rng.flip());
    auto solver = almost_sure_parity(g);
    auto oracle = enumeration_almost_sure(g);
    for (int s = 0; s < g.num_states(); ++s) CHECK(solver.winning[s] == oracle[s]);
  }
}

TEST_CASE("parity_value matches double enumeration on small games") {
  Rng rng(103);
  for (int i = 0; i < 60; ++i) {
    StochasticGame g = gen_game(rng, 2 + rng.upto(4), 1 + rng.upto(2), 1 + rng.upto(2), 3,
                                rng.flip());
    auto solver = parity_value(g);
    auto oracle = enumeration_value(g);
    for (int s = 0; s < g.num_states(); ++s) CHECK(solver.value[s] == oracle[s]);
  }
}

TEST_CASE("deterministic games have zero-one values") {
  Rng rng(107);
  for (int i = 0; i < 40; ++i) {
    StochasticGame g = gen_game(rng, 2 + rng.upto(6), 2, 2, 3, true);
    auto solver = parity_value(g);
    auto qual = almost_sure_parity(g);
    for (int s = 0; s < g.num_states(); ++s) {
      CHECK((solver.value[s].is_zero() || solver.value[s].is_one()));
      CHECK(qual.winning[s] == solver.value[s].is_one());
    }
  }
}

TEST_CASE("MDP special case equals the dedicated MDP solver") {
  Rng rng(109);
  for (int i = 0; i < 40; ++i) {
    StochasticGame g = gen_game(rng, 2 + rng.upto(5), 2, 2, 3, false);
    for (int s = 0; s < g.num_states(); ++s) g.owner1[s] = true;  // one player only
    auto solver = parity_value(g);
    Mdp m;
    m.state_names = g.state_names;
    m.action_names = g.actions1;
    m.priorities = g.priorities;
    m.initial = g.initial;
    m.delta = g.delta;
    auto [v, w] = mdp_parity_value(m);
    for (int s = 0; s < g.num_states(); ++s) CHECK(solver.value[s] == v[s]);
  }
}

TEST_CASE("duality: swapping players and shifting parity flips the value") {
  Rng rng(113);
  for (int i = 0; i < 30; ++i) {
    StochasticGame g = gen_game(rng, 2 + rng.upto(4), 2, 2, 3, rng.flip());
    auto v = parity_value(g).value;
    auto vs = parity_value(g.swap_players()).value;
    for (int s = 0; s < g.num_states(); ++s) CHECK(v[s] + vs[s] == Rational(1));
  }
}

TEST_CASE("parity_value satisfies the local optimality equations") {
  Rng rng(127);
  for (int i = 0; i < 30; ++i) {
    StochasticGame g = gen_game(rng, 2 + rng.upto(5), 2, 2, 3, false);
    auto v = parity_value(g).value;
    for (int s = 0; s < g.num_states(); ++s) {
      CHECK(Rational(0) <= v[s]);
      CHECK(v[s] <= Rational(1));
      Rational best = g.owner1[s] ? Rational(0) : Rational(1);
      for (int a : enabled_actions(g, s)) {
        Rational look(0);
        for (const auto& [t, p] : g.delta[s][a].support) look += p * v[t];
        if (g.owner1[s] ? look > best : look < best) best = look;
      }
      CHECK(v[s] == best);
    }
  }
}

TEST_CASE("apply_strategy with a memoryless strategy prunes player-1 edges") {
  Rng rng(131);
  StochasticGame g = gen_game(rng, 4, 2, 2, 2, false);
  MemorylessStrategy s;
  s.choice.assign(4, -1);
  for (int st = 0; st < 4; ++st)
    if (g.owner1[st]) s.choice[st] = enabled_actions(g, st).front();
  auto t = memoryless_to_transducer(s, g);
  Mdp m = apply_strategy(g, t);
  CHECK(m.num_states() == 4 * t.num_memory);

  StrategyTransducer two;
  two.num_memory = 2;
  two.initial_memory = 0;
  two.update.assign(2, std::vector<int>(3, 0));
  two.update[0][1] = 1;
  two.next = {0, 0};
  StochasticGame g3 = gen_game(rng, 3, 1, 2, 2, false);
  Mdp m3 = apply_strategy(g3, two);
  CHECK(m3.num_states() == 6);
}

TEST_CASE("almost-sure witnesses certify through apply_strategy") {
  Rng rng(137);
  for (int i = 0; i < 30; ++i) {
    StochasticGame g = gen_game(rng, 2 + rng.upto(5), 2, 2, 3, false);
    auto r = almost_sure_parity(g);
    auto t = memoryless_to_transducer(r.witness, g);
    Mdp m = apply_strategy(g, t);
    auto one = mdp_min_value_one(m);
    for (int s = 0; s < g.num_states(); ++s)
      if (r.winning[s]) CHECK(one[s * t.num_memory + s]);
  }
}

TEST_CASE("plateau stalls are priced correctly") {
  // A player-2 state whose even self-loop hands the parity to player 1:
  // staying is free for reachability but fatal for parity, so the value
  // comes from the forced exit.
  StochasticGame g;
  g.actions1 = {"a"};
  g.actions2 = {"stay", "go"};
  g.state_names = {"m", "flip", "good", "bad"};
  g.owner1 = {false, false, true, false};
  g.priorities = {0, 1, 0, 1};
  g.initial = 0;
  Distribution coin;
  coin.add(2, Rational(1, 2));
  coin.add(3, Rational(1, 2));
  g.delta.resize(4);
  g.delta[0] = {Distribution::point(0), Distribution::point(1)};
  g.delta[1] = {coin};
  g.delta[2] = {Distribution::point(2)};
  g.delta[3] = {Distribution::point(3), Distribution::point(3)};
  auto r = parity_value(g);
  CHECK(r.value[0] == Rational(1, 2));

  // The mirror: a player-1 state whose odd self-loop wastes the play.
  StochasticGame h;
  h.actions1 = {"stay", "go"};
  h.actions2 = {"b"};
  h.state_names = {"m", "flip", "good", "bad"};
  h.owner1 = {true, false, true, false};
  h.priorities = {1, 1, 0, 1};
  h.initial = 0;
  h.delta.resize(4);
  h.delta[0] = {Distribution::point(0), Distribution::point(1)};
  h.delta[1] = {coin};
  h.delta[2] = {Distribution::point(2), Distribution::point(2)};
  h.delta[3] = {Distribution::point(3)};
  auto r2 = parity_value(h);
  CHECK(r2.value[0] == Rational(1, 2));
}

TEST_CASE("reach_game_value on a handmade race") {
  // Player 1 wants the target; player 2 may divert the coin.
  StochasticGame g;
  g.actions1 = {"go", "loop"};
  g.actions2 = {"left", "right"};
  g.state_names = {"p1", "p2", "target", "sink"};
  g.owner1 = {true, false, true, false};
  g.priorities = {1, 1, 0, 1};
  g.initial = 0;
  Distribution coin;
  coin.add(2, Rational(1, 2));
  coin.add(3, Rational(1, 2));
  g.delta.resize(4);
  g.delta[0] = {Distribution::point(1), Distribution::point(0)};
  g.delta[1] = {coin, Distribution::point(2)};
  g.delta[2] = {Distribution::point(2)};
  g.delta[3] = {Distribution::point(3)};
  std::vector<bool> target = {false, false, true, false};
  auto r = reach_game_value(g, target);
  CHECK(r.value[0] == Rational(1, 2));
  CHECK(r.value[1] == Rational(1, 2));
  CHECK(r.value[2] == Rational(1));
  CHECK(r.value[3] == Rational(0));
}
