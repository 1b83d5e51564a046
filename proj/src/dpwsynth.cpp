#include "composynth/dpwsynth.hpp"

#include <algorithm>
#include <map>

namespace composynth {

ValidationReport validate_dpw_problem(const DpwProblem& p) {
  ValidationReport rep = validate_library(p.library);
  for (const auto& letter : p.library.components.front().output_letters)
    if (p.monitor.letter_id(letter) < 0)
      rep.note("output letter '" + letter + "' missing from the monitor alphabet");
  if (p.mem_bound < 1) rep.note("memory bound must be at least 1");
  if (p.monitor.num_states() == 0) rep.note("monitor has no states");
  return rep;
}

ObservedGame build_product_game(const DpwProblem& p, ProductMap* map) {
  auto rep = validate_dpw_problem(p);
  if (!rep.ok()) throw std::invalid_argument("invalid dpw problem: " + rep.problems.front());
  const Library& lib = p.library;
  const Dpw& a = p.monitor;
  const int k1 = lib.size();
  std::vector<int> letter_map(lib.components.front().output_letters.size());
  for (size_t i = 0; i < letter_map.size(); ++i)
    letter_map[i] = a.letter_id(lib.components.front().output_letters[i]);

  ObservedGame og;
  og.game.actions2 = lib.components.front().input_letters;
  for (const auto& c : lib.components) og.game.actions1.push_back(c.name);
  const int letters = static_cast<int>(og.game.actions2.size());

  ProductMap local;
  for (int i = 0; i < k1; ++i) {
    local.obs_of_component.push_back(static_cast<int>(og.obs_names.size()));
    og.obs_names.push_back("c" + std::to_string(i));
  }
  local.obs_of_exit.resize(k1);
  for (int i = 0; i < k1; ++i)
    for (int x = 0; x < lib.width(); ++x) {
      local.obs_of_exit[i].push_back(static_cast<int>(og.obs_names.size()));
      og.obs_names.push_back("x" + std::to_string(x) + "@c" + std::to_string(i));
    }

  // Reachable product states (q, i, p).
  std::map<std::tuple<int, int, int>, int> ids;
  std::vector<std::tuple<int, int, int>> order;
  auto intern = [&](int i, int q, int pp) {
    auto key = std::make_tuple(i, q, pp);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(order.size());
    ids.emplace(key, id);
    order.push_back(key);
    return id;
  };
  intern(0, lib.components[0].initial, a.initial);
  og.game.initial = 0;
  for (size_t idx = 0; idx < order.size(); ++idx) {
    auto [i, q, pp] = order[idx];
    const Component& c = lib.components[i];
    og.game.state_names.push_back(c.states[q] + "@c" + std::to_string(i) + "|" + a.states[pp]);
    og.game.priorities.push_back(a.priorities[pp]);
    auto dir = c.exit_direction(q);
    og.game.owner1.push_back(dir.has_value());
    og.obs.push_back(dir ? local.obs_of_exit[i][*dir] : local.obs_of_component[i]);
    const int p2 = a.delta[pp][letter_map[c.labels[q]]];
    og.game.delta.emplace_back();
    auto& row = og.game.delta.back();
    if (dir) {
      row.resize(k1);
      for (int j = 0; j < k1; ++j)
        row[j] = Distribution::point(intern(j, lib.components[j].initial, p2));
    } else {
      row.resize(letters);
      for (int x = 0; x < letters; ++x) {
        Distribution d;
        for (const auto& [q2, pr] : c.delta[q][x].support) d.add(intern(i, q2, p2), pr);
        row[x] = std::move(d);
      }
    }
  }
  if (map) {
    local.origin = order;
    *map = local;
  }
  return og;
}

ObsStrategy collapse_obs_strategy(const ObsStrategy& s, const ObservedGame& product) {
  const int num_obs = product.num_obs();
  // The value hit infinitely often when an observation repeats: iterate
  // the update on that observation until the cycle shows up, then take its
  // smallest member.
  auto recurrent = [&](int m, int o) {
    std::vector<int> seen_at(s.num_memory, -1);
    int cur = m, step = 0;
    while (true) {
      cur = s.update[cur][o];
      if (seen_at[cur] >= 0) break;
      seen_at[cur] = step++;
    }
    int best = cur, walk = s.update[cur][o];
    while (walk != cur) {
      best = std::min(best, walk);
      walk = s.update[walk][o];
    }
    return std::min(best, cur);
  };

  ObsStrategy out;
  const int sentinel = num_obs;  // "no observation yet"
  out.num_memory = s.num_memory * (num_obs + 1);
  auto pair_id = [&](int m, int o) { return m * (num_obs + 1) + o; };
  out.initial_memory = pair_id(s.initial_memory, sentinel);
  out.update.assign(out.num_memory, std::vector<int>(num_obs, 0));
  out.next.assign(out.num_memory, 0);
  for (int m = 0; m < s.num_memory; ++m)
    for (int o = 0; o <= num_obs; ++o) {
      int id = pair_id(m, o);
      out.next[id] = s.next[m];
      for (int o2 = 0; o2 < num_obs; ++o2)
        out.update[id][o2] = o2 == o ? id : pair_id(recurrent(m, o2), o2);
    }
  return out;
}

Composer composer_from_strategy(const StrategyTransducer& sigma, const DpwProblem& p) {
  ProductMap map;
  ObservedGame product = build_product_game(p, &map);
  const StochasticGame& g = product.game;
  const Library& lib = p.library;
  const int k1 = lib.size();

  // Factor the update through observations, verifying observation
  // independence and the within-block self-loop on the way.
  std::vector<std::vector<int>> states_of_obs(product.num_obs());
  for (int st = 0; st < g.num_states(); ++st) states_of_obs[product.obs[st]].push_back(st);
  auto realized = [&](int o) { return !states_of_obs[o].empty(); };
  auto upd_obs = [&](int m, int o) {
    if (!realized(o))
      throw NotCollapsedStutterInvariant("observation never realized in the product");
    int r = sigma.update[m][states_of_obs[o].front()];
    for (int st : states_of_obs[o])
      if (sigma.update[m][st] != r)
        throw NotCollapsedStutterInvariant("memory update depends on more than the observation");
    return r;
  };
  auto check_stable = [&](int m, int o) {
    if (upd_obs(m, o) != m)
      throw NotCollapsedStutterInvariant("memory moves while the observation repeats");
  };

  Composer c;
  std::map<std::pair<int, int>, int> ids;  // (stable memory, component) -> composer state
  std::vector<std::pair<int, int>> order;
  auto intern = [&](int m, int comp) {
    auto key = std::make_pair(m, comp);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(order.size());
    ids.emplace(key, id);
    order.push_back(key);
    return id;
  };
  int m_first = sigma.update[sigma.initial_memory][g.initial];
  intern(m_first, 0);
  c.initial = 0;
  for (size_t idx = 0; idx < order.size(); ++idx) {
    auto [m, comp] = order[idx];
    check_stable(m, map.obs_of_component[comp]);
    c.state_names.push_back("m" + std::to_string(m) + "@c" + std::to_string(comp));
    c.type_of.push_back(comp);
    std::vector<int> row(lib.width(), 0);
    for (int x = 0; x < lib.width(); ++x) {
      if (!realized(map.obs_of_exit[comp][x])) {
        row[x] = static_cast<int>(idx);  // the exit is unreachable; stay put
        continue;
      }
      int m_exit = upd_obs(m, map.obs_of_exit[comp][x]);
      int j = sigma.next[m_exit];
      if (j < 0 || j >= k1)
        throw NotCollapsedStutterInvariant("strategy picks a non-component action at an exit");
      int m_block = upd_obs(m_exit, map.obs_of_component[j]);
      row[x] = intern(m_block, j);
    }
    c.transfer.push_back(std::move(row));
  }
  return c;
}

DpwSynthReport synth_dpw_qualitative(const DpwProblem& p) {
  DpwSynthReport out;
  out.mem_bound = p.mem_bound;
  ObservedGame product = build_product_game(p);
  ReducedGame reduced = reduce_collapsed(product);
  SearchResult sr = bounded_memory_search(reduced.og, p.mem_bound);
  out.explored = sr.explored;
  if (!sr.strategy) {
    out.note = "not realizable within memory " + std::to_string(p.mem_bound);
    return out;
  }
  // The winner reads observations of the reduced game; its observation ids
  // coincide with the product's (the reduction appends only the sink's).
  ObsStrategy collapsed = collapse_obs_strategy(*sr.strategy, product);
  StrategyTransducer sigma = collapsed.to_transducer(product);
  Composer c = composer_from_strategy(sigma, p);
  ComposedTransducer t = compose(c, p.library);
  if (!almost_sure_dpw(t, p.monitor))
    throw std::logic_error("synth_dpw_qualitative: extracted composer failed certification");
  out.realizable = true;
  out.composer = std::move(c);
  out.note = "realizable";
  return out;
}

}  // namespace composynth
