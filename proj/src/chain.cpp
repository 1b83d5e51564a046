#include "composynth/chain.hpp"

#include <algorithm>

namespace composynth {

namespace {

// Iterative Tarjan. Components are numbered so that every edge goes from a
// higher component id to a lower one (or stays inside).
struct Tarjan {
  const Chain& c;
  std::vector<int> index, low, comp;
  std::vector<bool> on_stack;
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;

  explicit Tarjan(const Chain& chain)
      : c(chain),
        index(chain.num_states(), -1),
        low(chain.num_states(), 0),
        comp(chain.num_states(), -1),
        on_stack(chain.num_states(), false) {}

  void run(int root) {
    struct Frame {
      int v;
      std::map<int, Rational>::const_iterator it;
    };
    std::vector<Frame> frames;
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    frames.push_back({root, c.step[root].support.begin()});
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.it != c.step[f.v].support.end()) {
        int w = f.it->first;
        ++f.it;
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, c.step[w].support.begin()});
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
};

// Dense exact Gaussian elimination for (I - P) v = b restricted to one SCC.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> m, std::vector<Rational> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::logic_error("singular linear system in chain analysis");
    std::swap(m[pivot], m[col]);
    std::swap(b[pivot], b[col]);
    Rational inv = Rational(1) / m[col][col];
    for (int k = col; k < n; ++k) m[col][k] *= inv;
    b[col] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (int k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      b[r] -= f * b[col];
    }
  }
  return b;
}

}  // namespace

std::vector<int> chain_sccs(const Chain& c, int* num_components) {
  Tarjan t(c);
  for (int s = 0; s < c.num_states(); ++s)
    if (t.index[s] < 0) t.run(s);
  if (num_components) *num_components = t.next_comp;
  return t.comp;
}

std::vector<Rational> chain_reach(const Chain& c, const std::vector<bool>& target) {
  const int n = c.num_states();
  // Backward reachability: states with no path to the target have value 0.
  std::vector<std::vector<int>> preds(n);
  for (int s = 0; s < n; ++s)
    for (const auto& [t, _] : c.step[s].support) preds[t].push_back(s);
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

  std::vector<Rational> v(n, Rational(0));
  for (int s = 0; s < n; ++s)
    if (target[s]) v[s] = Rational(1);

  // Transient states, solved one SCC at a time in reverse topological
  // order so that all cross-SCC successors are already known.
  std::vector<bool> transient(n, false);
  for (int s = 0; s < n; ++s) transient[s] = can[s] && !target[s];
  int num_comp = 0;
  auto comp = chain_sccs(c, &num_comp);
  std::vector<std::vector<int>> members(num_comp);
  for (int s = 0; s < n; ++s)
    if (transient[s]) members[comp[s]].push_back(s);
  for (int cc = 0; cc < num_comp; ++cc) {
    const auto& ms = members[cc];
    if (ms.empty()) continue;
    const int k = static_cast<int>(ms.size());
    std::vector<int> local(n, -1);
    for (int i = 0; i < k; ++i) local[ms[i]] = i;
    std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k, Rational(0)));
    std::vector<Rational> b(k, Rational(0));
    for (int i = 0; i < k; ++i) {
      m[i][i] = Rational(1);
      for (const auto& [t, p] : c.step[ms[i]].support) {
        if (local[t] >= 0)
          m[i][local[t]] -= p;
        else
          b[i] += p * v[t];  // solved earlier (lower component) or absorbing
      }
    }
    auto sol = solve_linear(std::move(m), std::move(b));
    for (int i = 0; i < k; ++i) v[ms[i]] = sol[i];
  }
  return v;
}

std::vector<Rational> chain_parity(const Chain& c, const IndexFunction& prio) {
  const int n = c.num_states();
  int num_comp = 0;
  auto comp = chain_sccs(c, &num_comp);
  // A component is bottom iff no edge leaves it.
  std::vector<bool> bottom(num_comp, true);
  for (int s = 0; s < n; ++s)
    for (const auto& [t, _] : c.step[s].support)
      if (comp[t] != comp[s]) bottom[comp[s]] = false;
  std::vector<int> min_prio(num_comp, -1);
  for (int s = 0; s < n; ++s) {
    int cc = comp[s];
    if (min_prio[cc] < 0 || prio[s] < min_prio[cc]) min_prio[cc] = prio[s];
  }
  std::vector<bool> target(n, false);
  for (int s = 0; s < n; ++s) target[s] = bottom[comp[s]] && min_prio[comp[s]] % 2 == 0;
  return chain_reach(c, target);
}

}  // namespace composynth
