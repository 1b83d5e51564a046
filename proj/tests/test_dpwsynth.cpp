#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "composynth/dpwsynth.hpp"
#include "composynth/embedded.hpp"
#include "composynth/gen.hpp"
#include "composynth/io.hpp"

using namespace composynth;

namespace {

Dpw constant_monitor(const Library& lib, int priority) {
  Dpw d;
  d.alphabet = lib.components.front().output_letters;
  d.states = {"z"};
  d.initial = 0;
  d.delta = {std::vector<int>(d.alphabet.size(), 0)};
  d.priorities = {priority};
  return d;
}

// A library whose states all emit distinct letters, plus the monitor that
// tracks the emitted state and replays the embedded priorities. Used to
// compare the DPW pipeline against the embedded-parity solver.
struct LiftedInstance {
  Library lib;
  std::vector<IndexFunction> alpha;
  Dpw monitor;
};

LiftedInstance lifted_instance(Rng& rng, int comps, int states) {
  LiftedInstance out;
  out.lib = gen_library(rng, comps, states, 1, 2);
  // Unique output letter per (component, state).
  std::vector<std::string> letters;
  for (int i = 0; i < out.lib.size(); ++i)
    for (int q = 0; q < out.lib.components[i].num_states(); ++q)
      letters.push_back("u" + std::to_string(i) + "_" + std::to_string(q));
  for (int i = 0; i < out.lib.size(); ++i) {
    Component& c = out.lib.components[i];
    c.output_letters = letters;
    int base = 0;
    for (int j = 0; j < i; ++j) base += out.lib.components[j].num_states();
    for (int q = 0; q < c.num_states(); ++q) c.labels[q] = base + q;
  }
  out.alpha = gen_library_index(rng, out.lib, 2);
  Dpw& d = out.monitor;
  d.alphabet = letters;
  d.states = {"init"};
  d.priorities = {1};
  for (int i = 0; i < out.lib.size(); ++i)
    for (int q = 0; q < out.lib.components[i].num_states(); ++q) {
      d.states.push_back(letters[d.num_states() - 1]);
      d.priorities.push_back(out.alpha[i][q]);
    }
  d.initial = 0;
  d.delta.assign(d.num_states(), std::vector<int>(letters.size(), 0));
  for (int p = 0; p < d.num_states(); ++p)
    for (size_t x = 0; x < letters.size(); ++x) d.delta[p][x] = static_cast<int>(x) + 1;
  return out;
}

// Probabilistic bisimulation keyed by component-local states: instances
// are paired on first contact and must stay consistent.
bool compositions_equivalent(const ComposedTransducer& a, const Composer& ca,
                             const ComposedTransducer& b, const Composer& cb) {
  if (a.input_letters != b.input_letters) return false;
  std::map<int, int> inst_pair;
  std::vector<std::pair<int, int>> work;
  auto pair_states = [&](int sa, int sb) -> bool {
    auto [ia, qa] = a.origin[sa];
    auto [ib, qb] = b.origin[sb];
    if (qa != qb || ca.type_of[ia] != cb.type_of[ib]) return false;
    auto it = inst_pair.find(ia);
    if (it == inst_pair.end()) {
      inst_pair.emplace(ia, ib);
      work.emplace_back(sa, sb);
      return true;
    }
    return it->second == ib;
  };
  if (!pair_states(a.initial, b.initial)) return false;
  std::set<std::pair<int, int>> seen{{a.initial, b.initial}};
  while (!work.empty()) {
    auto [sa, sb] = work.back();
    work.pop_back();
    if (a.labels[sa] != b.labels[sb]) return false;
    for (size_t x = 0; x < a.input_letters.size(); ++x) {
      const auto& da = a.delta[sa][x];
      const auto& db = b.delta[sb][x];
      if (da.support.size() != db.support.size()) return false;
      for (const auto& [ta, p] : da.support) {
        auto [ia2, qa2] = a.origin[ta];
        bool matched = false;
        for (const auto& [tb, p2] : db.support) {
          auto [ib2, qb2] = b.origin[tb];
          if (qa2 == qb2 && p == p2) {
            if (!pair_states(ta, tb)) return false;
            if (seen.insert({ta, tb}).second) work.emplace_back(ta, tb);
            matched = true;
            break;
          }
        }
        if (!matched) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("the product of a one-state monitor is the library game with flat priorities") {
  Rng rng(401);
  Library lib = gen_library(rng, 2, 3, 1, 2);
  DpwProblem p{lib, constant_monitor(lib, 0), 2};
  ProductMap map;
  ObservedGame og = build_product_game(p, &map);
  EmbeddedProblem ep;
  ep.library = lib;
  ep.alpha = gen_library_index(rng, lib, 0);
  ep.relation = ExitControlRelation::unrestricted(lib.width(), lib.size());
  GameMap gmap;
  StochasticGame base = build_game(ep, &gmap);
  // Same reachable shape: every product state has a flat priority and the
  // automaton component never splits states.
  int reachable = 0;
  for (int i = 0; i < lib.size(); ++i) reachable += lib.components[i].num_states();
  CHECK(og.game.num_states() == reachable);
  CHECK(og.game.num_states() <= (base.num_states() - 1) * p.monitor.num_states());
  for (int s = 0; s < og.game.num_states(); ++s) CHECK(og.game.priorities[s] == 0);
}

TEST_CASE("product transitions follow the displayed rule") {
  Rng rng(403);
  for (int round = 0; round < 15; ++round) {
    Library lib = gen_library(rng, 2, 3, 1 + rng.upto(2), 2);
    Dpw mon = gen_dpw(rng, lib.components.front().output_letters, 2, 3);
    DpwProblem p{lib, mon, 2};
    ProductMap map;
    ObservedGame og = build_product_game(p, &map);
    for (int s = 0; s < og.game.num_states(); ++s) {
      auto [i, q, pp] = map.origin[s];
      const Component& c = lib.components[i];
      CHECK(og.game.priorities[s] == mon.priorities[pp]);
      int p2 = mon.delta[pp][mon.letter_id(c.output_letters[c.labels[q]])];
      auto dir = c.exit_direction(q);
      CHECK(og.game.owner1[s] == dir.has_value());
      if (dir) {
        CHECK(og.obs[s] == map.obs_of_exit[i][*dir]);
        for (int j = 0; j < lib.size(); ++j) {
          REQUIRE(og.game.delta[s][j].is_point_mass());
          auto [i2, q2, pp2] = map.origin[og.game.delta[s][j].support.begin()->first];
          CHECK(i2 == j);
          CHECK(q2 == lib.components[j].initial);
          CHECK(pp2 == p2);
        }
      } else {
        CHECK(og.obs[s] == map.obs_of_component[i]);
        for (size_t a = 0; a < c.delta[q].size(); ++a)
          for (const auto& [q2, pr] : c.delta[q][a].support) {
            bool found = false;
            for (const auto& [t, pr2] : og.game.delta[s][a].support) {
              auto [i3, q3, pp3] = map.origin[t];
              if (i3 == i && q3 == q2 && pp3 == p2 && pr2 == pr) found = true;
            }
            CHECK(found);
          }
      }
    }
  }
}

TEST_CASE("all states of one component are observation-equivalent unless exits") {
  Rng rng(407);
  Library lib = gen_library(rng, 2, 4, 2, 2);
  Dpw mon = gen_dpw(rng, lib.components.front().output_letters, 3, 3);
  DpwProblem p{lib, mon, 2};
  ProductMap map;
  ObservedGame og = build_product_game(p, &map);
  for (int s = 0; s < og.game.num_states(); ++s)
    for (int t = 0; t < og.game.num_states(); ++t) {
      auto [i1, q1, pa] = map.origin[s];
      auto [i2, q2, pb] = map.origin[t];
      bool exit1 = lib.components[i1].exit_direction(q1).has_value();
      bool exit2 = lib.components[i2].exit_direction(q2).has_value();
      if (i1 == i2 && !exit1 && !exit2) CHECK(og.obs[s] == og.obs[t]);
    }
}

TEST_CASE("the always-accepting monitor is realizable, the rejecting one is not") {
  Rng rng(409);
  Library lib = gen_library(rng, 2, 3, 1, 2);
  DpwProblem yes{lib, constant_monitor(lib, 0), 2};
  auto r1 = synth_dpw_qualitative(yes);
  CHECK(r1.realizable);
  REQUIRE(r1.composer.has_value());
  ComposedTransducer t = compose(*r1.composer, lib);
  CHECK(value_dpw(t, yes.monitor) == Rational(1));

  DpwProblem no{lib, constant_monitor(lib, 1), 2};
  auto r2 = synth_dpw_qualitative(no);
  CHECK_FALSE(r2.realizable);
  CHECK(r2.mem_bound == 2);
  CHECK(r2.note == "not realizable within memory 2");
}

TEST_CASE("the DPW pipeline agrees with the embedded solver on lifted instances") {
  Rng rng(411);
  int checked = 0;
  for (int round = 0; round < 10; ++round) {
    LiftedInstance inst = lifted_instance(rng, 1 + rng.upto(2), 2);
    EmbeddedProblem ep;
    ep.library = inst.lib;
    ep.alpha = inst.alpha;
    ep.relation = ExitControlRelation::unrestricted(inst.lib.width(), inst.lib.size());
    auto embedded = synth_embedded(ep);
    DpwProblem dp{inst.lib, inst.monitor, 4};
    auto dpw = synth_dpw_qualitative(dp);
    if (embedded.realizable) {
      CHECK(dpw.realizable);
    } else {
      CHECK_FALSE(dpw.realizable);
    }
    if (dpw.realizable) {
      REQUIRE(dpw.composer.has_value());
      ComposedTransducer t = compose(*dpw.composer, inst.lib);
      CHECK(value_dpw(t, inst.monitor) == Rational(1));
      ++checked;
    }
  }
  CHECK(checked > 0);  // the suite must exercise the positive path
}

TEST_CASE("a constant one-memory winner extracts to a one-state composer") {
  Rng rng(419);
  Library lib = gen_library(rng, 1, 3, 1, 2);
  DpwProblem p{lib, constant_monitor(lib, 0), 1};
  ObservedGame product = build_product_game(p);
  auto sr = bounded_memory_search(reduce_collapsed(product).og, 1);
  REQUIRE(sr.strategy.has_value());
  ObsStrategy collapsed = collapse_obs_strategy(*sr.strategy, product);
  StrategyTransducer sigma = collapsed.to_transducer(product);
  auto classes = classify_strategy(sigma, product);
  CHECK(classes.count(StrategyClass::CollapsedStutterInvariant));
  Composer c = composer_from_strategy(sigma, p);
  CHECK(c.num_states() == 1);
  CHECK(c.type_of[0] == 0);
}

TEST_CASE("composer -> strategy -> composer round-trips to an equivalent composition") {
  Rng rng(421);
  for (int round = 0; round < 15; ++round) {
    Library lib = gen_library(rng, 1 + rng.upto(2), 3, 1, 2);
    DpwProblem p{lib, constant_monitor(lib, 0), 3};
    Composer c = gen_composer(rng, lib, 1 + rng.upto(2));
    c.type_of[c.initial] = 0;
    // The first proof direction: the composer as a strategy on the product.
    ProductMap map;
    ObservedGame product = build_product_game(p, &map);
    ObsStrategy s;
    s.num_memory = c.num_states();
    s.initial_memory = c.initial;
    s.update.assign(s.num_memory, std::vector<int>(product.num_obs(), 0));
    s.next.assign(s.num_memory, 0);
    for (int m = 0; m < s.num_memory; ++m) {
      s.next[m] = c.type_of[m];
      for (int o = 0; o < product.num_obs(); ++o) s.update[m][o] = m;
      for (int i = 0; i < lib.size(); ++i)
        for (int x = 0; x < lib.width(); ++x)
          if (c.type_of[m] == i) s.update[m][map.obs_of_exit[i][x]] = c.transfer[m][x];
    }
    StrategyTransducer sigma = s.to_transducer(product);
    auto classes = classify_strategy(sigma, product);
    REQUIRE(classes.count(StrategyClass::CollapsedStutterInvariant));
    Composer c2 = composer_from_strategy(sigma, p);
    CHECK(compositions_equivalent(compose(c, lib), c, compose(c2, lib), c2));
  }
}

TEST_CASE("search results are monotone in the memory bound") {
  Rng rng(431);
  Library lib = gen_library(rng, 2, 2, 1, 2);
  DpwProblem p{lib, constant_monitor(lib, 0), 1};
  auto r1 = synth_dpw_qualitative(p);
  REQUIRE(r1.realizable);
  p.mem_bound = 3;
  auto r3 = synth_dpw_qualitative(p);
  CHECK(r3.realizable);
  REQUIRE(r3.composer.has_value());
  // the same witness appears first at every larger bound
  CHECK(composer_to_json(*r1.composer, lib) == composer_to_json(*r3.composer, lib));
}
