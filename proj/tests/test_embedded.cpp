#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "composynth/embedded.hpp"
#include "composynth/gen.hpp"

using namespace composynth;

namespace {

EmbeddedProblem random_problem(Rng& rng, int comps, int states, int width, SynthMode mode) {
  EmbeddedProblem p;
  p.library = gen_library(rng, comps, states, width, 2);
  p.alpha = gen_library_index(rng, p.library, 3);
  p.relation = gen_relation(rng, width, comps);
  p.mode = mode;
  p.eta = Rational(1, 2);
  return p;
}

Rational strategy_game_value(const EmbeddedProblem& p, const Composer& c) {
  StochasticGame g = build_game(p);
  StrategyTransducer sigma = composer_to_strategy(c, p);
  Mdp m = apply_strategy(g, sigma);
  auto [v, w] = mdp_min_parity_value(m);
  return v[m.initial];
}

Rational composition_value(const EmbeddedProblem& p, const Composer& c) {
  ComposedTransducer t = compose(c, p.library);
  return value_embedded(t, lift_index(p.alpha, c, t));
}

}  // namespace

TEST_CASE("build_game on an exitless component is its MDP plus an unreachable sink") {
  EmbeddedProblem p;
  Component c;
  c.name = "M0";
  c.input_letters = {"a", "b"};
  c.output_letters = {"o"};
  c.states = {"q0", "q1"};
  c.initial = 0;
  c.labels = {0, 0};
  c.delta.resize(2);
  Distribution d;
  d.add(0, Rational(1, 3));
  d.add(1, Rational(2, 3));
  c.delta[0] = {d, Distribution::point(1)};
  c.delta[1] = {Distribution::point(0), d};
  p.library.components = {c};
  p.alpha = {{1, 2}};
  GameMap map;
  StochasticGame g = build_game(p, &map);
  CHECK(g.num_states() == 3);
  CHECK_FALSE(g.owner1[0]);
  CHECK_FALSE(g.owner1[1]);
  CHECK(g.priorities[map.bottom] % 2 == 1);
  for (int q = 0; q < 2; ++q)
    for (int a = 0; a < 2; ++a) CHECK(g.delta[q][a] == c.delta[q][a]);
  // Nothing reaches the sink.
  for (int s = 0; s < 2; ++s)
    for (const auto& row : g.delta[s]) CHECK(row.prob(map.bottom).is_zero());
}

TEST_CASE("disallowed exits route to the sink") {
  Rng rng(201);
  EmbeddedProblem p = random_problem(rng, 2, 3, 2, SynthMode::Qualitative);
  // Allow direction 0 only into component 0; leave direction 1 as is.
  ExitControlRelation r;
  r.insert(0, 0);
  for (int j = 0; j < 2; ++j) r.insert(1, j);
  p.relation = r;
  GameMap map;
  StochasticGame g = build_game(p, &map);
  for (int i = 0; i < p.library.size(); ++i) {
    int exit0 = map.state_of[i][p.library.components[i].exits[0]];
    CHECK(g.delta[exit0][0].prob(map.state_of[0][p.library.components[0].initial]).is_one());
    CHECK(g.delta[exit0][1].prob(map.bottom).is_one());
  }
}

TEST_CASE("build_game matches a clause-by-clause reconstruction") {
  Rng rng(203);
  for (int round = 0; round < 20; ++round) {
    EmbeddedProblem p = random_problem(rng, 2, 3, 1, SynthMode::Qualitative);
    GameMap map;
    StochasticGame g = build_game(p, &map);
    int expected = 1;  // the sink
    for (const auto& c : p.library.components) expected += c.num_states();
    CHECK(g.num_states() == expected);
    for (int i = 0; i < p.library.size(); ++i) {
      const Component& c = p.library.components[i];
      for (int q = 0; q < c.num_states(); ++q) {
        int s = map.state_of[i][q];
        CHECK(g.priorities[s] == p.alpha[i][q]);
        auto dir = c.exit_direction(q);
        CHECK(g.owner1[s] == dir.has_value());
        if (dir) {
          for (int j = 0; j < p.library.size(); ++j) {
            int want = p.relation.contains(*dir, j)
                           ? map.state_of[j][p.library.components[j].initial]
                           : map.bottom;
            CHECK(g.delta[s][j].prob(want).is_one());
          }
        } else {
          for (size_t a = 0; a < c.delta[q].size(); ++a)
            for (const auto& [q2, pr] : c.delta[q][a].support)
              CHECK(g.delta[s][a].prob(map.state_of[i][q2]) == pr);
        }
      }
    }
  }
}

TEST_CASE("a constant strategy yields the all-to-one composer") {
  Rng rng(207);
  EmbeddedProblem p = random_problem(rng, 2, 3, 2, SynthMode::Qualitative);
  p.relation = ExitControlRelation::unrestricted(2, 2);
  StochasticGame g = build_game(p);
  MemorylessStrategy sigma;
  sigma.choice.assign(g.num_states(), -1);
  for (int s = 0; s < g.num_states(); ++s)
    if (g.owner1[s]) sigma.choice[s] = 0;
  Composer c = strategy_to_composer(sigma, p);
  CHECK(c.num_states() == 2);
  CHECK(c.initial == 0);
  for (int m = 0; m < 2; ++m) {
    CHECK(c.type_of[m] == m);
    for (int d = 0; d < 2; ++d) CHECK(c.transfer[m][d] == 0);
  }
}

TEST_CASE("strategy/composer round trips agree at every exit") {
  Rng rng(211);
  for (int round = 0; round < 20; ++round) {
    EmbeddedProblem p = random_problem(rng, 1 + rng.upto(3), 3, 1 + rng.upto(2),
                                       SynthMode::Qualitative);
    p.relation = ExitControlRelation::unrestricted(p.library.width(), p.library.size());
    GameMap map;
    StochasticGame g = build_game(p, &map);
    MemorylessStrategy sigma;
    sigma.choice.assign(g.num_states(), -1);
    for (int s = 0; s < g.num_states(); ++s)
      if (g.owner1[s]) sigma.choice[s] = rng.upto(p.library.size());
    Composer c = strategy_to_composer(sigma, p);
    StrategyTransducer t = composer_to_strategy(c, p);
    // Replaying the transducer at any exit reproduces the strategy.
    for (int i = 0; i < p.library.size(); ++i)
      for (int x = 0; x < p.library.width(); ++x) {
        int es = map.state_of[i][p.library.components[i].exits[x]];
        int mem = t.step(i, es);  // memory i = sitting in component i
        CHECK(t.next[mem] == sigma.choice[es]);
      }
    // And back: the composer rebuilt from the transducer's behavior.
    Composer c2 = strategy_to_composer(sigma, p);
    CHECK(c2.transfer == c.transfer);
  }
}

TEST_CASE("single-state composers induce one-memory strategies") {
  Rng rng(213);
  EmbeddedProblem p = random_problem(rng, 2, 3, 1, SynthMode::Qualitative);
  p.relation = ExitControlRelation::unrestricted(1, 2);
  Composer c;
  c.state_names = {"C0"};
  c.initial = 0;
  c.type_of = {0};
  c.transfer = {{0}};
  StrategyTransducer t = composer_to_strategy(c, p);
  CHECK(t.num_memory == 1);
}

TEST_CASE("the game value of a composer strategy equals its composition value") {
  Rng rng(217);
  for (int round = 0; round < 30; ++round) {
    int comps = 1 + rng.upto(3);
    EmbeddedProblem p = random_problem(rng, comps, 4, 1 + rng.upto(2),
                                       SynthMode::Qualitative);
    Composer c = gen_composer(rng, p.library, 1 + rng.upto(3));
    c.type_of[c.initial] = 0;  // the composer starts with the first component
    p.relation = gen_relation(rng, p.library.width(), comps, &c);
    CHECK(composition_value(p, c) == strategy_game_value(p, c));
  }
}

TEST_CASE("invalid choices are dominated by valid ones") {
  Rng rng(219);
  for (int round = 0; round < 6; ++round) {
    EmbeddedProblem p = random_problem(rng, 2, 3, 1, SynthMode::Qualitative);
    GameMap map;
    StochasticGame g = build_game(p, &map);
    std::vector<int> exits;
    for (int s = 0; s < g.num_states(); ++s)
      if (g.owner1[s]) exits.push_back(s);
    // Enumerate all memoryless strategies at the exits.
    std::vector<int> pick(exits.size(), 0);
    std::vector<std::pair<std::vector<int>, Rational>> table;
    while (true) {
      MemorylessStrategy sigma;
      sigma.choice.assign(g.num_states(), -1);
      for (size_t i = 0; i < exits.size(); ++i) sigma.choice[exits[i]] = pick[i];
      auto v = mdp_min_parity_value(fix_memoryless(g, sigma, true)).first;
      table.emplace_back(pick, v[g.initial]);
      size_t i = 0;
      while (i < exits.size() && pick[i] + 1 == p.library.size()) pick[i++] = 0;
      if (i == exits.size()) break;
      ++pick[i];
    }
    auto valid = [&](const std::vector<int>& choice) {
      for (size_t i = 0; i < exits.size(); ++i) {
        auto [comp, q] = map.origin[exits[i]];
        int dir = *p.library.components[comp].exit_direction(q);
        if (!p.relation.contains(dir, choice[i])) return false;
      }
      return true;
    };
    for (const auto& [choice, value] : table) {
      if (valid(choice)) continue;
      bool dominated = false;
      for (const auto& [choice2, value2] : table)
        if (valid(choice2) && value2 >= value) dominated = true;
      CHECK(dominated);
    }
  }
}

TEST_CASE("synth_embedded qualitative verdicts on forced instances") {
  Rng rng(223);
  EmbeddedProblem p = random_problem(rng, 2, 3, 1, SynthMode::Qualitative);
  for (auto& f : p.alpha)
    for (int& x : f) x = 0;
  auto rep = synth_embedded(p);
  CHECK(rep.realizable);
  CHECK(rep.value == Rational(1));
  REQUIRE(rep.composer.has_value());
  CHECK(check_compatibility(*rep.composer, p.relation));

  // An absorbing odd trap at the start component loses outright.
  EmbeddedProblem q;
  Component c;
  c.name = "M0";
  c.input_letters = {"a"};
  c.output_letters = {"o"};
  c.states = {"q0", "trap", "e0"};
  c.initial = 0;
  c.labels = {0, 0, 0};
  c.delta.resize(3);
  c.delta[0] = {Distribution::point(1)};
  c.delta[1] = {Distribution::point(1)};
  c.exits = {2};
  q.library.components = {c};
  q.library.directions = {"d0"};
  q.alpha = {{0, 1, 0}};
  q.relation = ExitControlRelation::unrestricted(1, 1);
  auto rep2 = synth_embedded(q);
  CHECK_FALSE(rep2.realizable);
  CHECK(rep2.value == Rational(0));
}

TEST_CASE("synth_unrestricted agrees with the general path on unrestricted relations") {
  Rng rng(227);
  for (int round = 0; round < 25; ++round) {
    int comps = 1 + rng.upto(3);
    SynthMode mode = rng.flip() ? SynthMode::Qualitative : SynthMode::Quantitative;
    EmbeddedProblem p = random_problem(rng, comps, 4, 1 + rng.upto(2), mode);
    p.relation = ExitControlRelation::unrestricted(p.library.width(), comps);
    auto general = synth_embedded(p);
    auto fast = synth_unrestricted(p.library, p.alpha, mode, p.eta);
    CHECK(general.realizable == fast.realizable);
    if (mode == SynthMode::Quantitative) CHECK(general.value == fast.value);
    if (fast.realizable) {
      REQUIRE(fast.composer.has_value());
      Rational certified = composition_value(p, *fast.composer);
      CHECK(certified == fast.value);
    }
  }
}

TEST_CASE("the hub routes every exit to the only good component") {
  // Components 0 and 1 trap the play on odd priorities; component 2 has an
  // even body. Every exit must transfer to component 2.
  Library lib;
  lib.directions = {"d0"};
  std::vector<std::string> outs = {"o"};
  for (int i = 0; i < 3; ++i) {
    Component c;
    c.name = "M" + std::to_string(i);
    c.input_letters = {"go", "leave"};
    c.output_letters = outs;
    c.states = {"body", "exit"};
    c.initial = 0;
    c.labels = {0, 0};
    c.exits = {1};
    c.delta.resize(2);
    // Components 0 and 1 fall straight through; only component 2 lets the
    // environment linger on its even body.
    c.delta[0] = i == 2 ? std::vector<Distribution>{Distribution::point(0),
                                                    Distribution::point(1)}
                        : std::vector<Distribution>{Distribution::point(1),
                                                    Distribution::point(1)};
    lib.components.push_back(std::move(c));
  }
  std::vector<IndexFunction> alpha = {{1, 2}, {1, 2}, {2, 2}};
  auto rep = synth_unrestricted(lib, alpha, SynthMode::Qualitative);
  // The environment can stall inside any body; only component 2's body is
  // worth stalling in, and exits must funnel back into it.
  REQUIRE(rep.realizable);
  REQUIRE(rep.composer.has_value());
  for (int m = 0; m < rep.composer->num_states(); ++m)
    CHECK(rep.composer->type_of[rep.composer->transfer[m][0]] == 2);
  auto general = synth_embedded([&] {
    EmbeddedProblem p;
    p.library = lib;
    p.alpha = alpha;
    p.relation = ExitControlRelation::unrestricted(1, 3);
    return p;
  }());
  CHECK(general.realizable);
}

TEST_CASE("make_alternating preserves winners and inserts relays") {
  Rng rng(229);
  for (int round = 0; round < 25; ++round) {
    StochasticGame g = gen_game(rng, 2 + rng.upto(5), 2, 2, 3, true);
    StochasticGame alt = make_alternating(g);
    CHECK(is_alternating(alt));
    auto before = almost_sure_parity(g);
    auto after = almost_sure_parity(alt);
    for (int s = 0; s < g.num_states(); ++s) CHECK(before.winning[s] == after.winning[s]);
  }
  // Already alternating games come back with the same state count.
  for (int round = 0; round < 10; ++round) {
    StochasticGame g = gen_alternating_game(rng, 2, 2, 2, 2, 3);
    StochasticGame same = make_alternating(g);
    CHECK(same.num_states() == g.num_states());
  }
}

TEST_CASE("the hardness gadget on a two-state alternating game") {
  StochasticGame g;
  g.actions1 = {"a"};
  g.actions2 = {"b"};
  g.state_names = {"u", "v"};
  g.owner1 = {false, true};
  g.priorities = {0, 0};
  g.initial = 0;
  g.delta = {{Distribution::point(1)}, {Distribution::point(0)}};
  EmbeddedProblem p = parity_game_to_library(g, SynthMode::Qualitative);
  CHECK(p.library.size() == 1);
  CHECK(p.library.width() == 1);
  CHECK(p.library.components[0].num_states() == 2);
  auto rep = synth_embedded(p);
  CHECK(rep.realizable);  // all priorities even
}

TEST_CASE("hardness round-trip: gadget verdict equals the direct solve") {
  Rng rng(233);
  for (int round = 0; round < 30; ++round) {
    StochasticGame g = gen_alternating_game(rng, 1 + rng.upto(4), 1 + rng.upto(4), 2, 2, 3);
    auto direct = almost_sure_parity(g);
    EmbeddedProblem p = parity_game_to_library(g, SynthMode::Qualitative);
    auto rep = synth_embedded(p);
    CHECK(rep.realizable == direct.winning[g.initial]);
  }
}
