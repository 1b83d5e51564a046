#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "composynth/gen.hpp"
#include "composynth/io.hpp"
#include "composynth/pagadget.hpp"
#include "composynth/solve.hpp"

using namespace composynth;

namespace {

ProbabilisticAutomaton coin_pa() {
  // One letter; from the start, 2/3 into an absorbing even state, 1/3 into
  // an absorbing odd state.
  ProbabilisticAutomaton a;
  a.alphabet = {"0"};
  a.states = {"s", "even", "odd"};
  a.initial = 0;
  a.priorities = {1, 0, 1};
  a.delta.resize(3);
  Distribution d;
  d.add(1, Rational(2, 3));
  d.add(2, Rational(1, 3));
  a.delta[0] = {d};
  a.delta[1] = {Distribution::point(1)};
  a.delta[2] = {Distribution::point(2)};
  return a;
}

int letter_at(const Lasso& w, int t) {
  if (t < static_cast<int>(w.prefix.size())) return w.prefix[t];
  return w.cycle[(t - w.prefix.size()) % w.cycle.size()];
}

}  // namespace

TEST_CASE("pa_to_library produces the four-state single-exit components") {
  Rng rng(501);
  ProbabilisticAutomaton a = gen_pa(rng, 1, 1, 2);
  Library lib = pa_to_library(a);
  CHECK(lib.size() == 1);
  CHECK(lib.width() == 1);
  CHECK(lib.components[0].num_states() == 4);  // in, (q,1), (q,2), ex
  CHECK(validate_library(lib).ok());

  ProbabilisticAutomaton b = gen_pa(rng, 3, 2, 3);
  Library lib2 = pa_to_library(b);
  CHECK(lib2.size() == 2);
  for (const auto& c : lib2.components) {
    CHECK(c.num_states() == 2 + 2 * b.num_states());
    CHECK(c.exits.size() == 1);
    // The guessing phase reads a state letter; the probabilistic phase
    // ignores the input entirely.
    for (int q = 0; q < b.num_states(); ++q) {
      const auto& row = c.delta[1 + q];
      for (size_t sig = 1; sig < row.size(); ++sig) CHECK(row[sig] == row[0]);
    }
  }
}

TEST_CASE("pa_to_library replays the automaton distribution") {
  ProbabilisticAutomaton a;
  a.alphabet = {"0"};
  a.states = {"q0", "q1"};
  a.initial = 0;
  a.priorities = {0, 1};
  a.delta.resize(2);
  Distribution d;
  d.add(0, Rational(1, 2));
  d.add(1, Rational(1, 2));
  a.delta[0] = {d};
  a.delta[1] = {Distribution::point(0)};
  Library lib = pa_to_library(a);
  const Component& m0 = lib.components[0];
  // (q0,1) -> (q0,2) and (q1,2), half each, on every input.
  const int n = 2;
  for (int sig = 0; sig < n; ++sig) {
    CHECK(m0.delta[1][sig].prob(1 + n + 0) == Rational(1, 2));
    CHECK(m0.delta[1][sig].prob(1 + n + 1) == Rational(1, 2));
  }
}

TEST_CASE("pa_to_dpw phases and the accepting sink") {
  Rng rng(503);
  ProbabilisticAutomaton a = gen_pa(rng, 2, 2, 3);
  Dpw d = pa_to_dpw(a);
  const int n = a.num_states();
  const int dollar = n;
  const int top = 4 * n;
  CHECK(d.num_states() == 4 * n + 1);
  CHECK(d.priorities[top] == 0);
  auto id = [&](int q, int ph) { return q * 4 + ph; };
  for (int q = 0; q < n; ++q) {
    CHECK(d.delta[id(q, 0)][q] == id(q, 1));
    for (int sig = 0; sig <= n; ++sig)
      if (sig != q) CHECK(d.delta[id(q, 0)][sig] == top);
    for (int sig = 0; sig < n; ++sig) CHECK(d.delta[id(q, 1)][sig] == id(sig, 2));
    CHECK(d.delta[id(q, 1)][dollar] == top);
    CHECK(d.delta[id(q, 2)][dollar] == id(q, 3));
    CHECK(d.delta[id(q, 3)][dollar] == id(q, 0));
    for (int sig = 0; sig < n; ++sig) {
      CHECK(d.delta[id(q, 2)][sig] == top);
      CHECK(d.delta[id(q, 3)][sig] == top);
    }
    for (int ph = 0; ph < 4; ++ph) CHECK(d.priorities[id(q, ph)] == a.priorities[q]);
  }
  for (int sig = 0; sig <= n; ++sig) CHECK(d.delta[top][sig] == top);
  CHECK(d.initial == id(a.initial, 3));
}

TEST_CASE("lasso and composer round trips") {
  Lasso w;
  w.cycle = {0};
  Composer c = lasso_to_composer(w, 1);
  CHECK(c.num_states() == 1);
  CHECK(c.transfer[0][0] == 0);
  Lasso back = composer_to_lasso(c);
  CHECK(back.prefix.empty());
  CHECK(back.cycle == std::vector<int>{0});

  Rng rng(509);
  for (int i = 0; i < 40; ++i) {
    Lasso v;
    int plen = rng.upto(4), clen = 1 + rng.upto(4);
    for (int t = 0; t < plen; ++t) v.prefix.push_back(rng.upto(3));
    for (int t = 0; t < clen; ++t) v.cycle.push_back(rng.upto(3));
    Lasso rt = composer_to_lasso(lasso_to_composer(v, 3));
    for (int t = 0; t < 48; ++t) CHECK(letter_at(rt, t) == letter_at(v, t));
  }
}

TEST_CASE("composer_to_lasso reads only the reachable walk") {
  Rng rng(511);
  for (int i = 0; i < 20; ++i) {
    // A composer over a width-one library with unreachable states.
    int n = 2 + rng.upto(4);
    Composer c;
    c.initial = 0;
    for (int m = 0; m < n; ++m) {
      c.state_names.push_back("W" + std::to_string(m));
      c.type_of.push_back(rng.upto(3));
      c.transfer.push_back({rng.upto(n)});
    }
    Lasso w = composer_to_lasso(c);
    // Oracle: simulate the transfer walk directly.
    std::vector<int> expect;
    int cur = c.initial;
    for (int t = 0; t < 40; ++t) {
      expect.push_back(c.type_of[cur]);
      cur = c.transfer[cur][0];
    }
    for (int t = 0; t < 40; ++t) CHECK(letter_at(w, t) == expect[t]);
    CHECK(static_cast<int>(w.prefix.size() + w.cycle.size()) <= n);
  }
}

TEST_CASE("pa_lasso_value on forced instances") {
  Rng rng(513);
  // Deterministic automaton, all priorities even: accepted surely.
  ProbabilisticAutomaton a = gen_pa(rng, 3, 2, 3);
  for (int q = 0; q < a.num_states(); ++q) {
    a.priorities[q] = 2 * (a.priorities[q] / 2);
    for (auto& row : a.delta)
      for (auto& d : row) d = Distribution::point(d.support.begin()->first);
  }
  Lasso w;
  w.prefix = {0};
  w.cycle = {1, 0};
  CHECK(pa_lasso_value(a, w) == Rational(1));

  // The coin automaton accepts with 2/3 whatever the word.
  ProbabilisticAutomaton coin = coin_pa();
  for (int plen = 0; plen < 3; ++plen) {
    Lasso v;
    for (int t = 0; t < plen; ++t) v.prefix.push_back(0);
    v.cycle = {0};
    CHECK(pa_lasso_value(coin, v) == Rational(2, 3));
  }
}

TEST_CASE("the reduction equality: word probability equals composition value") {
  Rng rng(521);
  for (int round = 0; round < 12; ++round) {
    ProbabilisticAutomaton a = gen_pa(rng, 1 + rng.upto(3), 1 + rng.upto(2), 2);
    Library lib = pa_to_library(a);
    Dpw mon = pa_to_dpw(a);
    Lasso w;
    int plen = rng.upto(3), clen = 1 + rng.upto(3);
    for (int t = 0; t < plen; ++t) w.prefix.push_back(rng.upto(a.alphabet.size()));
    for (int t = 0; t < clen; ++t) w.cycle.push_back(rng.upto(a.alphabet.size()));
    Composer c = lasso_to_composer(w, lib.size());
    ComposedTransducer t = compose(c, lib);
    CHECK(value_dpw(t, mon) == pa_lasso_value(a, w));
  }
}

TEST_CASE("the honest environment replays the automaton distribution") {
  Rng rng(523);
  ProbabilisticAutomaton a = gen_pa(rng, 2, 2, 2);
  Library lib = pa_to_library(a);
  Dpw mon = pa_to_dpw(a);
  Lasso w;
  w.cycle = {0, 1};
  Composer cw = lasso_to_composer(w, lib.size());
  ComposedTransducer t = compose(cw, lib);

  // Joint chain over (composition state, monitor state) where the
  // environment always inputs the state the monitor tracks.
  std::map<std::pair<int, int>, Rational> dist;
  dist[{t.initial, mon.initial}] = Rational(1);
  const int n = a.num_states();
  auto tracked = [&](int p) { return p / 4; };  // monitor layout: (q, phase)
  for (int step = 0; step < 12; ++step) {
    // Compare the (q,1)-layer marginal with the direct automaton run.
    if (step % 4 == 1) {
      int letters_read = step / 4;
      std::vector<Rational> direct(n, Rational(0));
      direct[a.initial] = Rational(1);
      for (int i = 0; i < letters_read; ++i) {
        std::vector<Rational> next(n, Rational(0));
        for (int q = 0; q < n; ++q)
          for (const auto& [q2, p] : a.delta[q][letter_at(w, i)].support)
            next[q2] += direct[q] * p;
        direct = next;
      }
      std::vector<Rational> marginal(n, Rational(0));
      for (const auto& [key, pr] : dist) {
        auto [s, p] = key;
        auto [inst, q] = t.origin[s];
        if (q >= 1 && q <= n) marginal[q - 1] += pr;  // the (q,1) layer
      }
      for (int q = 0; q < n; ++q) CHECK(marginal[q] == direct[q]);
    }
    std::map<std::pair<int, int>, Rational> next;
    for (const auto& [key, pr] : dist) {
      auto [s, p] = key;
      int input = tracked(p);  // honest: guess the tracked state
      int p2 = mon.delta[p][mon.letter_id(t.output_letters[t.labels[s]])];
      for (const auto& [s2, q] : t.delta[s][input].support) next[{s2, p2}] += pr * q;
    }
    dist = std::move(next);
  }
  // The monitor never reached the accepting sink under honest play.
  for (const auto& [key, pr] : dist) CHECK(key.second != 4 * n);
}

TEST_CASE("off-script guesses are accepted immediately") {
  Rng rng(527);
  ProbabilisticAutomaton a = gen_pa(rng, 2, 2, 2);
  for (int& p : a.priorities) p = 1;  // the honest run is worthless
  Library lib = pa_to_library(a);
  Dpw mon = pa_to_dpw(a);
  Lasso w;
  w.cycle = {0};
  ComposedTransducer t = compose(lasso_to_composer(w, lib.size()), lib);
  IndexFunction alpha;
  ComposedTransducer prod = dpw_product(t, mon, &alpha);
  // A deviation at the very first guess: any input that is not the
  // tracked initial state leads into the sink, which accepts everything.
  Mdp m = environment_mdp(prod, alpha);
  MemorylessStrategy dishonest;
  dishonest.choice.assign(m.num_states(), 0);
  for (int s = 0; s < m.num_states(); ++s)
    if (m.state_names[s].find("in@") == 0) dishonest.choice[s] = (a.initial + 1) % 2;
  auto v = mdp_policy_parity(m, dishonest);
  CHECK(v[m.initial] == Rational(1));
  // While the value over all environments equals the honest outcome, zero.
  CHECK(value_dpw(t, mon) == Rational(0));
}
