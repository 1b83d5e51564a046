#include "composynth/composition.hpp"

#include <stdexcept>

#include "composynth/solve.hpp"

namespace composynth {

ComposedTransducer compose(const Composer& c, const Library& lib) {
  for (int m = 0; m < c.num_states(); ++m)
    if (c.type_of[m] < 0 || c.type_of[m] >= lib.size())
      throw TypeMismatch("composer state " + c.state_names[m] + " references missing component");

  ComposedTransducer t;
  t.input_letters = lib.components.front().input_letters;
  t.output_letters = lib.components.front().output_letters;
  const int letters = static_cast<int>(t.input_letters.size());

  // State space: for every instance m, a copy of its component's states.
  std::vector<int> base(c.num_states(), 0);
  for (int m = 0; m < c.num_states(); ++m) {
    base[m] = t.num_states();
    const Component& comp = lib.components[c.type_of[m]];
    for (int q = 0; q < comp.num_states(); ++q) {
      t.state_names.push_back(comp.states[q] + "@" + c.state_names[m]);
      t.origin.emplace_back(m, q);
      t.labels.push_back(comp.labels[q]);
    }
  }
  t.initial = base[c.initial] + lib.components[c.type_of[c.initial]].initial;
  t.delta.resize(t.num_states());
  for (int m = 0; m < c.num_states(); ++m) {
    const Component& comp = lib.components[c.type_of[m]];
    for (int q = 0; q < comp.num_states(); ++q) {
      auto& row = t.delta[base[m] + q];
      row.resize(letters);
      auto dir = comp.exit_direction(q);
      if (dir) {
        // Control transfer: the input letter is ignored.
        int m2 = c.transfer[m][*dir];
        int target = base[m2] + lib.components[c.type_of[m2]].initial;
        for (int a = 0; a < letters; ++a) row[a] = Distribution::point(target);
      } else {
        for (int a = 0; a < letters; ++a) {
          Distribution d;
          for (const auto& [q2, p] : comp.delta[q][a].support) d.add(base[m] + q2, p);
          row[a] = std::move(d);
        }
      }
    }
  }
  return t;
}

IndexFunction lift_index(const std::vector<IndexFunction>& alpha, const Composer& c,
                         const ComposedTransducer& t) {
  IndexFunction out(t.num_states(), 0);
  for (int s = 0; s < t.num_states(); ++s) {
    auto [m, q] = t.origin[s];
    out[s] = alpha[c.type_of[m]][q];
  }
  return out;
}

Mdp environment_mdp(const ComposedTransducer& t, const IndexFunction& alpha,
                    std::vector<int>* map_back) {
  if (static_cast<int>(alpha.size()) != t.num_states())
    throw std::invalid_argument("index function not total on the composition");
  const int letters = static_cast<int>(t.input_letters.size());
  std::vector<int> to_new(t.num_states(), -1);
  std::vector<int> order;
  order.push_back(t.initial);
  to_new[t.initial] = 0;
  for (size_t i = 0; i < order.size(); ++i) {
    int s = order[i];
    for (int a = 0; a < letters; ++a)
      for (const auto& [u, _] : t.delta[s][a].support)
        if (to_new[u] < 0) {
          to_new[u] = static_cast<int>(order.size());
          order.push_back(u);
        }
  }
  Mdp m;
  m.action_names = t.input_letters;
  m.initial = 0;
  m.delta.resize(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    int s = order[i];
    m.state_names.push_back(t.state_names[s]);
    m.priorities.push_back(alpha[s]);
    auto& row = m.delta[i];
    row.resize(letters);
    for (int a = 0; a < letters; ++a) {
      Distribution d;
      for (const auto& [u, p] : t.delta[s][a].support) d.add(to_new[u], p);
      row[a] = std::move(d);
    }
  }
  if (map_back) *map_back = order;
  return m;
}

Rational value_embedded(const ComposedTransducer& t, const IndexFunction& alpha) {
  Mdp m = environment_mdp(t, alpha);
  auto [v, w] = mdp_min_parity_value(m);
  (void)w;
  return v[m.initial];
}

bool almost_sure_embedded(const ComposedTransducer& t, const IndexFunction& alpha) {
  Mdp m = environment_mdp(t, alpha);
  return mdp_min_value_one(m)[m.initial];
}

ComposedTransducer dpw_product(const ComposedTransducer& t, const Dpw& a,
                               IndexFunction* alpha_out) {
  // Letter translation by name; every output of the transducer must be in
  // the monitor's input alphabet.
  std::vector<int> to_dpw(t.output_letters.size(), -1);
  for (size_t i = 0; i < t.output_letters.size(); ++i) {
    to_dpw[i] = a.letter_id(t.output_letters[i]);
    if (to_dpw[i] < 0)
      throw AlphabetMismatch("output letter '" + t.output_letters[i] +
                             "' is not in the monitor alphabet");
  }
  const int letters = static_cast<int>(t.input_letters.size());
  const int np = a.num_states();

  ComposedTransducer out;
  out.input_letters = t.input_letters;
  out.output_letters = t.output_letters;
  IndexFunction prios;

  // Reachable product exploration from (initial, automaton initial).
  std::vector<int> to_new(static_cast<size_t>(t.num_states()) * np, -1);
  std::vector<std::pair<int, int>> order;
  auto intern = [&](int s, int p) {
    int key = s * np + p;
    if (to_new[key] < 0) {
      to_new[key] = static_cast<int>(order.size());
      order.emplace_back(s, p);
    }
    return to_new[key];
  };
  out.initial = intern(t.initial, a.initial);
  for (size_t i = 0; i < order.size(); ++i) {
    auto [s, p] = order[i];
    out.state_names.push_back(t.state_names[s] + "|" + a.states[p]);
    out.origin.push_back(t.origin[s]);
    out.labels.push_back(t.labels[s]);
    prios.push_back(a.priorities[p]);
    out.delta.emplace_back();
    auto& row = out.delta.back();
    row.resize(letters);
    const int p2 = a.delta[p][to_dpw[t.labels[s]]];  // advance on the letter being emitted
    for (int x = 0; x < letters; ++x) {
      Distribution d;
      for (const auto& [u, pr] : t.delta[s][x].support) d.add(intern(u, p2), pr);
      row[x] = std::move(d);
    }
  }
  if (alpha_out) *alpha_out = prios;
  return out;
}

Rational value_dpw(const ComposedTransducer& t, const Dpw& a) {
  IndexFunction alpha;
  ComposedTransducer prod = dpw_product(t, a, &alpha);
  return value_embedded(prod, alpha);
}

bool almost_sure_dpw(const ComposedTransducer& t, const Dpw& a) {
  IndexFunction alpha;
  ComposedTransducer prod = dpw_product(t, a, &alpha);
  return almost_sure_embedded(prod, alpha);
}

}  // namespace composynth
