#include "composynth/core.hpp"

#include <algorithm>
#include <set>

namespace composynth {

namespace {
const Rational kZero(0);
const std::string kDummyLetter = "__unreachable";
}  // namespace

void Distribution::add(int target, const Rational& p) {
  if (p.is_zero()) return;
  auto it = support.find(target);
  if (it == support.end()) {
    support.emplace(target, p);
  } else {
    it->second += p;
    if (it->second.is_zero()) support.erase(it);
  }
}

const Rational& Distribution::prob(int target) const {
  auto it = support.find(target);
  return it == support.end() ? kZero : it->second;
}

Rational Distribution::total() const {
  Rational s(0);
  for (const auto& [_, p] : support) s += p;
  return s;
}

bool Distribution::is_stochastic() const {
  if (support.empty()) return false;
  for (const auto& [_, p] : support)
    if (p <= Rational(0) || p > Rational(1)) return false;
  return total().is_one();
}

Distribution Distribution::point(int target) {
  Distribution d;
  d.support.emplace(target, Rational(1));
  return d;
}

bool Component::is_exit(int q) const {
  return std::find(exits.begin(), exits.end(), q) != exits.end();
}

std::optional<int> Component::exit_direction(int q) const {
  for (int d = 0; d < static_cast<int>(exits.size()); ++d)
    if (exits[d] == q) return d;
  return std::nullopt;
}

int Dpw::letter_id(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(alphabet.size()); ++i)
    if (alphabet[i] == name) return i;
  return -1;
}

ValidationReport validate_component(const Component& c) {
  ValidationReport rep;
  const int n = c.num_states();
  const int in = static_cast<int>(c.input_letters.size());
  if (n == 0) {
    rep.note(c.name + ": no states");
    return rep;
  }
  if (c.initial < 0 || c.initial >= n) rep.note(c.name + ": initial state out of range");
  if (static_cast<int>(c.delta.size()) != n) rep.note(c.name + ": delta rows != states");
  if (static_cast<int>(c.labels.size()) != n) rep.note(c.name + ": labels not total");
  for (int q = 0; q < n && q < static_cast<int>(c.labels.size()); ++q)
    if (c.labels[q] < 0 || c.labels[q] >= static_cast<int>(c.output_letters.size()))
      rep.note(c.name + ": state " + c.states[q] + " has invalid output letter");
  std::set<int> seen_exits;
  for (int x : c.exits) {
    if (x < 0 || x >= n) rep.note(c.name + ": exit id out of range");
    if (!seen_exits.insert(x).second)
      rep.note(c.name + ": exit " + c.states[x] + " listed for two directions");
  }
  for (int q = 0; q < n && q < static_cast<int>(c.delta.size()); ++q) {
    const bool exit = c.is_exit(q);
    if (exit) {
      for (const auto& dist : c.delta[q])
        if (!dist.empty()) {
          rep.note(c.name + ": exit " + c.states[q] + " has outgoing transition");
          break;
        }
      continue;
    }
    if (static_cast<int>(c.delta[q].size()) != in) {
      rep.note(c.name + ": delta not total at " + c.states[q]);
      continue;
    }
    for (int a = 0; a < in; ++a) {
      const Distribution& dist = c.delta[q][a];
      if (dist.empty()) {
        rep.note(c.name + ": delta undefined at (" + c.states[q] + ", " + c.input_letters[a] + ")");
        continue;
      }
      if (!dist.is_stochastic())
        rep.note(c.name + ": distribution not stochastic at (" + c.states[q] + ", " +
                 c.input_letters[a] + ")");
      for (const auto& [t, _] : dist.support)
        if (t < 0 || t >= n) rep.note(c.name + ": transition target out of range");
    }
  }
  return rep;
}

ValidationReport validate_library(const Library& lib) {
  ValidationReport rep;
  if (lib.components.empty()) {
    rep.note("library has no components");
    return rep;
  }
  const auto& in0 = lib.components.front().input_letters;
  const auto& out0 = lib.components.front().output_letters;
  for (const auto& c : lib.components) {
    auto sub = validate_component(c);
    for (auto& p : sub.problems) rep.note(p);
    if (c.input_letters != in0) rep.note(c.name + ": input alphabet differs across library");
    if (c.output_letters != out0) rep.note(c.name + ": output alphabet differs across library");
    if (static_cast<int>(c.exits.size()) != lib.width())
      rep.note(c.name + ": has " + std::to_string(c.exits.size()) + " exits, width is " +
               std::to_string(lib.width()));
  }
  return rep;
}

ValidationReport validate_composer(const Composer& c, const Library& lib) {
  ValidationReport rep;
  const int n = c.num_states();
  if (n == 0) {
    rep.note("composer has no states");
    return rep;
  }
  if (c.initial < 0 || c.initial >= n) rep.note("composer initial out of range");
  if (static_cast<int>(c.type_of.size()) != n) rep.note("composer typing not total");
  if (static_cast<int>(c.transfer.size()) != n) rep.note("composer transfer not total");
  for (int m = 0; m < n; ++m) {
    if (m < static_cast<int>(c.type_of.size()) &&
        (c.type_of[m] < 0 || c.type_of[m] >= lib.size()))
      rep.note("composer state " + c.state_names[m] + " references missing component");
    if (m < static_cast<int>(c.transfer.size())) {
      if (static_cast<int>(c.transfer[m].size()) != lib.width()) {
        rep.note("composer transfer not total at " + c.state_names[m]);
        continue;
      }
      for (int d = 0; d < lib.width(); ++d)
        if (c.transfer[m][d] < 0 || c.transfer[m][d] >= n)
          rep.note("composer transfer target out of range at " + c.state_names[m]);
    }
  }
  return rep;
}

Library normalize_width(const Library& lib, const std::vector<std::string>& directions,
                        std::vector<IndexFunction>* alpha) {
  const int width = static_cast<int>(directions.size());
  for (const auto& c : lib.components)
    if (static_cast<int>(c.exits.size()) > width)
      throw WidthExceeded(c.name + " has " + std::to_string(c.exits.size()) +
                          " exits, requested width " + std::to_string(width));

  bool needs_padding = false;
  for (const auto& c : lib.components)
    if (static_cast<int>(c.exits.size()) < width) needs_padding = true;

  Library out = lib;
  out.directions = directions;
  if (!needs_padding) return out;

  int max_odd = 1;
  if (alpha) {
    for (const auto& f : *alpha)
      for (int p : f) max_odd = std::max(max_odd, p);
    if (max_odd % 2 == 0) ++max_odd;
  }

  // The reserved letter is shared, so every component's alphabet gains it.
  int dummy_letter = -1;
  for (int i = 0; i < static_cast<int>(out.components.front().output_letters.size()); ++i)
    if (out.components.front().output_letters[i] == kDummyLetter) dummy_letter = i;
  if (dummy_letter < 0) {
    dummy_letter = static_cast<int>(out.components.front().output_letters.size());
    for (auto& c : out.components) c.output_letters.push_back(kDummyLetter);
  }

  for (int i = 0; i < out.size(); ++i) {
    Component& c = out.components[i];
    int pad = 0;
    while (static_cast<int>(c.exits.size()) < width) {
      int q = c.num_states();
      c.states.push_back("__pad" + std::to_string(pad++));
      c.delta.emplace_back();  // exit: no transitions
      c.labels.push_back(dummy_letter);
      c.exits.push_back(q);
      if (alpha) (*alpha)[i].push_back(max_odd);
    }
  }
  return out;
}

bool dpw_lasso_accepts(const Dpw& a, const Lasso& w) {
  if (w.cycle.empty()) throw std::invalid_argument("lasso cycle is empty");
  const int letters = static_cast<int>(a.alphabet.size());
  for (int x : w.prefix)
    if (x < 0 || x >= letters) throw AlphabetMismatch("lasso letter outside DPW alphabet");
  for (int x : w.cycle)
    if (x < 0 || x >= letters) throw AlphabetMismatch("lasso letter outside DPW alphabet");

  int p = a.initial;
  for (int x : w.prefix) p = a.delta[p][x];

  // Iterate w2 until a (state, position) pair repeats, then take the
  // minimum priority among the states on the detected cycle.
  const int period = static_cast<int>(w.cycle.size());
  std::vector<int> first_seen(static_cast<size_t>(a.num_states()) * period, -1);
  std::vector<int> trace;
  int pos = 0;
  while (true) {
    int key = p * period + pos;
    if (first_seen[key] >= 0) {
      int min_prio = a.priorities[p];
      for (int i = first_seen[key]; i < static_cast<int>(trace.size()); ++i)
        min_prio = std::min(min_prio, a.priorities[trace[i]]);
      return min_prio % 2 == 0;
    }
    first_seen[key] = static_cast<int>(trace.size());
    trace.push_back(p);
    p = a.delta[p][w.cycle[pos]];
    pos = (pos + 1) % period;
  }
}

void ExitControlRelation::insert(int direction, int component) {
  auto p = std::make_pair(direction, component);
  auto it = std::lower_bound(pairs.begin(), pairs.end(), p);
  if (it == pairs.end() || *it != p) pairs.insert(it, p);
}

bool ExitControlRelation::contains(int direction, int component) const {
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(direction, component));
}

bool ExitControlRelation::non_blocking(int width) const {
  std::vector<bool> covered(width, false);
  for (const auto& [d, _] : pairs)
    if (d >= 0 && d < width) covered[d] = true;
  return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

ExitControlRelation ExitControlRelation::unrestricted(int width, int num_components) {
  ExitControlRelation r;
  for (int d = 0; d < width; ++d)
    for (int j = 0; j < num_components; ++j) r.pairs.emplace_back(d, j);
  return r;
}

bool check_compatibility(const Composer& c, const ExitControlRelation& r) {
  for (int m = 0; m < c.num_states(); ++m)
    for (int d = 0; d < static_cast<int>(c.transfer[m].size()); ++d)
      if (!r.contains(d, c.type_of[c.transfer[m][d]])) return false;
  return true;
}

}  // namespace composynth
