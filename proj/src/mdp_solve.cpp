#include <algorithm>
#include <stdexcept>

#include "composynth/solve.hpp"

namespace composynth {

namespace {

// Generic Tarjan over an explicit adjacency structure.
std::vector<int> graph_sccs(int n, const std::vector<std::vector<int>>& adj, int* count) {
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int next_index = 0, next_comp = 0;
  struct Frame {
    int v;
    size_t i;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> frames;
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    frames.push_back({root, 0});
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.i < adj[f.v].size()) {
        int w = adj[f.v][f.i++];
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = next_comp;
            if (w == v) break;
          }
          ++next_comp;
        }
      }
    }
  }
  if (count) *count = next_comp;
  return comp;
}

// Restriction of an MDP: a set of states with, per state, the actions that
// may still be used.
struct SubMdp {
  std::vector<int> states;
  std::vector<std::vector<int>> actions;  // aligned with states
};

std::vector<EndComponent> mec_of_restriction(const Mdp& m, SubMdp sub) {
  const int n = m.num_states();
  std::vector<int> local(n, -1);
  while (true) {
    const int k = static_cast<int>(sub.states.size());
    std::fill(local.begin(), local.end(), -1);
    for (int i = 0; i < k; ++i) local[sub.states[i]] = i;
    std::vector<std::vector<int>> adj(k);
    for (int i = 0; i < k; ++i)
      for (int a : sub.actions[i])
        for (const auto& [t, _] : m.delta[sub.states[i]][a].support) adj[i].push_back(local[t]);
    int num_comp = 0;
    auto comp = graph_sccs(k, adj, &num_comp);
    bool changed = false;
    SubMdp next;
    for (int i = 0; i < k; ++i) {
      std::vector<int> keep;
      for (int a : sub.actions[i]) {
        bool inside = true;
        for (const auto& [t, _] : m.delta[sub.states[i]][a].support)
          if (local[t] < 0 || comp[local[t]] != comp[i]) {
            inside = false;
            break;
          }
        if (inside)
          keep.push_back(a);
        else
          changed = true;
      }
      if (!keep.empty()) {
        next.states.push_back(sub.states[i]);
        next.actions.push_back(std::move(keep));
      } else {
        changed = true;
      }
    }
    if (!changed) {
      // Group by SCC; every remaining action stays inside its component.
      std::vector<EndComponent> out(num_comp);
      for (int i = 0; i < k; ++i) {
        out[comp[i]].states.push_back(sub.states[i]);
        out[comp[i]].actions.push_back(sub.actions[i]);
      }
      std::vector<EndComponent> filtered;
      for (auto& ec : out)
        if (!ec.states.empty()) filtered.push_back(std::move(ec));
      return filtered;
    }
    sub = std::move(next);
  }
}

SubMdp full_restriction(const Mdp& m) {
  SubMdp sub;
  for (int s = 0; s < m.num_states(); ++s) {
    std::vector<int> acts;
    for (int a = 0; a < static_cast<int>(m.delta[s].size()); ++a)
      if (!m.delta[s][a].empty()) acts.push_back(a);
    if (!acts.empty()) {
      sub.states.push_back(s);
      sub.actions.push_back(std::move(acts));
    }
  }
  return sub;
}

int smallest_enabled(const Mdp& m, int s) {
  for (int a = 0; a < static_cast<int>(m.delta[s].size()); ++a)
    if (!m.delta[s][a].empty()) return a;
  throw std::logic_error("state without enabled action: " + m.state_names[s]);
}

// Inside an end component, direct the policy toward the component's
// minimum-priority states; the induced recurrent class then contains one
// of them, so the minimum priority seen forever is the component minimum.
void ec_witness(const Mdp& m, const EndComponent& ec, MemorylessStrategy* witness) {
  if (!witness) return;
  int minp = m.priorities[ec.states[0]];
  for (int s : ec.states) minp = std::min(minp, m.priorities[s]);
  const int k = static_cast<int>(ec.states.size());
  std::vector<int> rank(k, -1);
  for (int i = 0; i < k; ++i)
    if (m.priorities[ec.states[i]] == minp) {
      rank[i] = 0;
      witness->choice[ec.states[i]] = ec.actions[i].front();
    }
  std::vector<int> local(m.num_states(), -1);
  for (int i = 0; i < k; ++i) local[ec.states[i]] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < k; ++i) {
      if (rank[i] >= 0) continue;
      for (int a : ec.actions[i]) {
        bool progress = false;
        for (const auto& [t, _] : m.delta[ec.states[i]][a].support)
          if (rank[local[t]] >= 0) progress = true;
        if (progress) {
          rank[i] = 1;
          witness->choice[ec.states[i]] = a;
          changed = true;
          break;
        }
      }
    }
  }
}

void winning_rec(const Mdp& m, SubMdp sub, std::vector<bool>* result,
                 MemorylessStrategy* witness) {
  for (const auto& ec : mec_of_restriction(m, std::move(sub))) {
    int minp = m.priorities[ec.states[0]];
    for (int s : ec.states) minp = std::min(minp, m.priorities[s]);
    if (minp % 2 == 0) {
      for (int s : ec.states) (*result)[s] = true;
      ec_witness(m, ec, witness);
    } else {
      SubMdp inner;
      std::vector<bool> keep(m.num_states(), false);
      for (int s : ec.states)
        if (m.priorities[s] != minp) keep[s] = true;
      for (int i = 0; i < static_cast<int>(ec.states.size()); ++i) {
        int s = ec.states[i];
        if (!keep[s]) continue;
        std::vector<int> acts;
        for (int a : ec.actions[i]) {
          bool inside = true;
          for (const auto& [t, _] : m.delta[s][a].support)
            if (!keep[t]) inside = false;
          if (inside) acts.push_back(a);
        }
        if (!acts.empty()) {
          inner.states.push_back(s);
          inner.actions.push_back(std::move(acts));
        }
      }
      if (!inner.states.empty()) winning_rec(m, std::move(inner), result, witness);
    }
  }
}

Chain induced_chain(const Mdp& m, const MemorylessStrategy& policy,
                    const std::vector<bool>* absorbing) {
  Chain c;
  c.step.resize(m.num_states());
  for (int s = 0; s < m.num_states(); ++s) {
    if (absorbing && (*absorbing)[s]) {
      c.step[s] = Distribution::point(s);
      continue;
    }
    c.step[s] = m.delta[s][policy.choice[s]];
  }
  return c;
}

}  // namespace

std::vector<EndComponent> mec_decomposition(const Mdp& m) {
  return mec_of_restriction(m, full_restriction(m));
}

std::vector<bool> winning_ec_union(const Mdp& m, MemorylessStrategy* witness) {
  std::vector<bool> result(m.num_states(), false);
  winning_rec(m, full_restriction(m), &result, witness);
  return result;
}

std::vector<bool> mdp_prob1(const Mdp& m, const std::vector<bool>& target,
                            MemorylessStrategy* witness) {
  const int n = m.num_states();
  std::vector<bool> y(n, true);
  std::vector<bool> z(n, false);
  auto pre_ok = [&](int s, int a, const std::vector<bool>& yy, const std::vector<bool>& zz) {
    if (m.delta[s][a].empty()) return false;
    bool hit = false;
    for (const auto& [t, _] : m.delta[s][a].support) {
      if (!yy[t]) return false;
      if (zz[t]) hit = true;
    }
    return hit;
  };
  while (true) {
    std::fill(z.begin(), z.end(), false);
    for (int s = 0; s < n; ++s) z[s] = target[s];
    bool grew = true;
    while (grew) {
      grew = false;
      for (int s = 0; s < n; ++s) {
        if (z[s]) continue;
        for (int a = 0; a < static_cast<int>(m.delta[s].size()); ++a)
          if (pre_ok(s, a, y, z)) {
            z[s] = true;
            grew = true;
            break;
          }
      }
    }
    if (z == y) break;
    y = z;
  }
  if (witness) {
    // Rank pass on the final set records one progressing action per state.
    std::vector<bool> zz(n, false);
    for (int s = 0; s < n; ++s) zz[s] = target[s];
    bool grew = true;
    while (grew) {
      grew = false;
      for (int s = 0; s < n; ++s) {
        if (zz[s] || !y[s]) continue;
        for (int a = 0; a < static_cast<int>(m.delta[s].size()); ++a)
          if (pre_ok(s, a, y, zz)) {
            zz[s] = true;
            witness->choice[s] = a;
            grew = true;
            break;
          }
      }
    }
  }
  return y;
}

std::vector<Rational> mdp_max_reach(const Mdp& m, const std::vector<bool>& target,
                                    MemorylessStrategy* witness) {
  const int n = m.num_states();
  // States with no path at all to the target have value zero under any
  // policy; pinning them keeps the policy evaluation systems non-singular.
  std::vector<std::vector<int>> preds(n);
  for (int s = 0; s < n; ++s)
    for (const auto& row : m.delta[s])
      for (const auto& [t, _] : row.support) preds[t].push_back(s);
  std::vector<bool> can(n, false);
  std::vector<int> work;
  for (int s = 0; s < n; ++s)
    if (target[s]) {
      can[s] = true;
      work.push_back(s);
    }
  while (!work.empty()) {
    int s = work.back();
    work.pop_back();
    for (int p : preds[s])
      if (!can[p]) {
        can[p] = true;
        work.push_back(p);
      }
  }

  MemorylessStrategy policy;
  policy.choice.assign(n, -1);
  for (int s = 0; s < n; ++s) policy.choice[s] = smallest_enabled(m, s);

  std::vector<bool> absorbing(n, false);
  for (int s = 0; s < n; ++s) absorbing[s] = target[s] || !can[s];

  std::vector<Rational> v;
  while (true) {
    Chain c = induced_chain(m, policy, &absorbing);
    v = chain_reach(c, target);
    bool improved = false;
    for (int s = 0; s < n; ++s) {
      if (absorbing[s]) continue;
      Rational best = v[s];
      int best_a = policy.choice[s];
      for (int a = 0; a < static_cast<int>(m.delta[s].size()); ++a) {
        if (m.delta[s][a].empty()) continue;
        Rational look(0);
        for (const auto& [t, p] : m.delta[s][a].support) look += p * v[t];
        if (look > best) {
          best = look;
          best_a = a;
        }
      }
      if (best > v[s]) {
        policy.choice[s] = best_a;
        improved = true;
      }
    }
    if (!improved) break;
  }
  if (witness) *witness = policy;
  return v;
}

std::vector<Rational> mdp_min_reach(const Mdp& m, const std::vector<bool>& target,
                                    MemorylessStrategy* witness) {
  const int n = m.num_states();
  // Largest closed set avoiding the target: minimal reach value 0.
  std::vector<bool> avoid(n, false);
  for (int s = 0; s < n; ++s) avoid[s] = !target[s];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!avoid[s]) continue;
      bool has_stay = false;
      for (const auto& row : m.delta[s]) {
        if (row.empty()) continue;
        bool stays = true;
        for (const auto& [t, _] : row.support)
          if (!avoid[t]) stays = false;
        if (stays) {
          has_stay = true;
          break;
        }
      }
      if (!has_stay) {
        avoid[s] = false;
        changed = true;
      }
    }
  }

  MemorylessStrategy policy;
  policy.choice.assign(n, -1);
  std::vector<bool> absorbing(n, false);
  for (int s = 0; s < n; ++s) {
    absorbing[s] = target[s] || avoid[s];
    policy.choice[s] = smallest_enabled(m, s);
    if (avoid[s]) {
      // Stay inside the avoiding set; this choice attains value 0.
      for (int a = 0; a < static_cast<int>(m.delta[s].size()); ++a) {
        if (m.delta[s][a].empty()) continue;
        bool stays = true;
        for (const auto& [t, _] : m.delta[s][a].support)
          if (!avoid[t]) stays = false;
        if (stays) {
          policy.choice[s] = a;
          break;
        }
      }
    }
  }

  std::vector<Rational> v;
  while (true) {
    Chain c = induced_chain(m, policy, &absorbing);
    v = chain_reach(c, target);
    bool improved = false;
    for (int s = 0; s < n; ++s) {
      if (absorbing[s]) continue;
      Rational best = v[s];
      int best_a = policy.choice[s];
      for (int a = 0; a < static_cast<int>(m.delta[s].size()); ++a) {
        if (m.delta[s][a].empty()) continue;
        Rational look(0);
        for (const auto& [t, p] : m.delta[s][a].support) look += p * v[t];
        if (look < best) {
          best = look;
          best_a = a;
        }
      }
      if (best < v[s]) {
        policy.choice[s] = best_a;
        improved = true;
      }
    }
    if (!improved) break;
  }
  if (witness) *witness = policy;
  return v;
}

std::pair<std::vector<bool>, MemorylessStrategy> mdp_almost_sure_parity(const Mdp& m) {
  const int n = m.num_states();
  MemorylessStrategy wit;
  wit.choice.assign(n, -1);
  for (int s = 0; s < n; ++s) wit.choice[s] = smallest_enabled(m, s);
  auto good = winning_ec_union(m, &wit);
  auto win = mdp_prob1(m, good, &wit);

  // The witness must be self-certifying: under the fixed policy every
  // recurrent class reachable from the winning set has even minimum.
  Chain c = induced_chain(m, wit, nullptr);
  int num_comp = 0;
  auto comp = chain_sccs(c, &num_comp);
  std::vector<bool> bottom(num_comp, true);
  std::vector<int> minp(num_comp, -1);
  for (int s = 0; s < n; ++s) {
    for (const auto& [t, _] : c.step[s].support)
      if (comp[t] != comp[s]) bottom[comp[s]] = false;
    if (minp[comp[s]] < 0 || m.priorities[s] < minp[comp[s]]) minp[comp[s]] = m.priorities[s];
  }
  std::vector<bool> bad(n, false);
  for (int s = 0; s < n; ++s) bad[s] = bottom[comp[s]] && minp[comp[s]] % 2 != 0;
  // Forward closure from the winning set must avoid odd recurrent classes.
  std::vector<bool> seen(n, false);
  std::vector<int> work;
  for (int s = 0; s < n; ++s)
    if (win[s]) {
      seen[s] = true;
      work.push_back(s);
    }
  while (!work.empty()) {
    int s = work.back();
    work.pop_back();
    if (bad[s]) throw std::logic_error("mdp_almost_sure_parity: witness failed certification");
    for (const auto& [t, _] : c.step[s].support)
      if (!seen[t]) {
        seen[t] = true;
        work.push_back(t);
      }
  }
  return {win, wit};
}

std::pair<std::vector<Rational>, MemorylessStrategy> mdp_parity_value(const Mdp& m) {
  const int n = m.num_states();
  MemorylessStrategy wit;
  wit.choice.assign(n, -1);
  for (int s = 0; s < n; ++s) wit.choice[s] = smallest_enabled(m, s);
  auto good = winning_ec_union(m, &wit);
  MemorylessStrategy reach_pol;
  auto v = mdp_max_reach(m, good, &reach_pol);
  for (int s = 0; s < n; ++s)
    if (!good[s]) wit.choice[s] = reach_pol.choice[s];
  // Exact self-check: the witness chain attains the reported values.
  auto attained = chain_parity(induced_chain(m, wit, nullptr), m.priorities);
  for (int s = 0; s < n; ++s)
    if (attained[s] != v[s])
      throw std::logic_error("mdp_parity_value: witness does not attain the value");
  return {v, wit};
}

std::pair<std::vector<Rational>, MemorylessStrategy> mdp_min_parity_value(const Mdp& m) {
  Mdp comp = m;
  for (int& p : comp.priorities) ++p;
  auto [v, wit] = mdp_parity_value(comp);
  for (auto& r : v) r = Rational(1) - r;
  return {v, wit};
}

std::vector<bool> mdp_min_value_one(const Mdp& m) {
  Mdp comp = m;
  for (int& p : comp.priorities) ++p;
  auto bad = winning_ec_union(comp, nullptr);
  // Value 1 iff no spoiling end component is reachable at all.
  const int n = m.num_states();
  std::vector<bool> can(n, false);
  std::vector<std::vector<int>> preds(n);
  for (int s = 0; s < n; ++s)
    for (const auto& row : m.delta[s])
      for (const auto& [t, _] : row.support) preds[t].push_back(s);
  std::vector<int> work;
  for (int s = 0; s < n; ++s)
    if (bad[s]) {
      can[s] = true;
      work.push_back(s);
    }
  while (!work.empty()) {
    int s = work.back();
    work.pop_back();
    for (int p : preds[s])
      if (!can[p]) {
        can[p] = true;
        work.push_back(p);
      }
  }
  std::vector<bool> one(n, false);
  for (int s = 0; s < n; ++s) one[s] = !can[s];
  return one;
}

std::vector<Rational> mdp_policy_parity(const Mdp& m, const MemorylessStrategy& policy) {
  return chain_parity(induced_chain(m, policy, nullptr), m.priorities);
}

}  // namespace composynth
