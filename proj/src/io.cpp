#include "composynth/io.hpp"

#include <fstream>
#include <sstream>

namespace composynth {

using nlohmann::ordered_json;

namespace {

void expect_schema(const ordered_json& j, const std::string& tag) {
  if (!j.is_object() || !j.contains("schema") || j["schema"] != tag)
    throw ParseError("expected a '" + tag + "' document");
}

int name_id(const std::vector<std::string>& names, const std::string& name,
            const std::string& what) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw ParseError("unknown " + what + " '" + name + "'");
}

std::vector<std::string> string_list(const ordered_json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_array())
    throw ParseError("missing list field '" + field + "'");
  std::vector<std::string> out;
  for (const auto& e : j[field]) out.push_back(e.get<std::string>());
  return out;
}

ordered_json dist_to_json(const Distribution& d, const std::vector<std::string>& names) {
  ordered_json out = ordered_json::object();
  for (const auto& [t, p] : d.support) out[names[t]] = p.str();
  return out;
}

Distribution dist_from_json(const ordered_json& j, const std::vector<std::string>& names) {
  Distribution d;
  for (auto it = j.begin(); it != j.end(); ++it)
    d.add(name_id(names, it.key(), "state"), Rational::parse(it.value().get<std::string>()));
  return d;
}

}  // namespace

ordered_json library_to_json(const Library& lib) {
  ordered_json j;
  j["schema"] = "library-v1";
  j["directions"] = lib.directions;
  j["input_alphabet"] = lib.components.empty() ? std::vector<std::string>{}
                                               : lib.components.front().input_letters;
  j["output_alphabet"] = lib.components.empty() ? std::vector<std::string>{}
                                                : lib.components.front().output_letters;
  ordered_json comps = ordered_json::array();
  for (const auto& c : lib.components) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["states"] = c.states;
    jc["initial"] = c.states[c.initial];
    ordered_json exits = ordered_json::array();
    for (int x : c.exits) exits.push_back(c.states[x]);
    jc["exits"] = exits;
    ordered_json labels = ordered_json::array();
    for (int q = 0; q < c.num_states(); ++q) labels.push_back(c.output_letters[c.labels[q]]);
    jc["labels"] = labels;
    ordered_json delta = ordered_json::array();
    for (int q = 0; q < c.num_states(); ++q) {
      if (c.is_exit(q)) continue;
      for (size_t a = 0; a < c.delta[q].size(); ++a) {
        ordered_json e;
        e["from"] = c.states[q];
        e["letter"] = c.input_letters[a];
        e["to"] = dist_to_json(c.delta[q][a], c.states);
        delta.push_back(e);
      }
    }
    jc["delta"] = delta;
    comps.push_back(jc);
  }
  j["components"] = comps;
  return j;
}

Library library_from_json(const ordered_json& j) {
  expect_schema(j, "library-v1");
  Library lib;
  lib.directions = string_list(j, "directions");
  auto inputs = string_list(j, "input_alphabet");
  auto outputs = string_list(j, "output_alphabet");
  if (!j.contains("components") || !j["components"].is_array())
    throw ParseError("library: missing components");
  for (const auto& jc : j["components"]) {
    Component c;
    c.name = jc.at("name").get<std::string>();
    c.input_letters = inputs;
    c.output_letters = outputs;
    c.states = string_list(jc, "states");
    c.initial = name_id(c.states, jc.at("initial").get<std::string>(), "state");
    for (const auto& e : jc.at("exits"))
      c.exits.push_back(name_id(c.states, e.get<std::string>(), "state"));
    for (const auto& l : jc.at("labels"))
      c.labels.push_back(name_id(outputs, l.get<std::string>(), "output letter"));
    c.delta.resize(c.num_states());
    for (int q = 0; q < c.num_states(); ++q)
      if (!c.is_exit(q)) c.delta[q].resize(inputs.size());
    for (const auto& e : jc.at("delta")) {
      int q = name_id(c.states, e.at("from").get<std::string>(), "state");
      int a = name_id(inputs, e.at("letter").get<std::string>(), "input letter");
      if (c.is_exit(q)) throw ParseError("library: transition out of exit state");
      c.delta[q][a] = dist_from_json(e.at("to"), c.states);
    }
    lib.components.push_back(std::move(c));
  }
  return lib;
}

ordered_json composer_to_json(const Composer& c, const Library& lib) {
  ordered_json j;
  j["schema"] = "composer-v1";
  j["states"] = c.state_names;
  j["initial"] = c.state_names[c.initial];
  ordered_json types = ordered_json::array();
  for (int m = 0; m < c.num_states(); ++m) types.push_back(lib.components[c.type_of[m]].name);
  j["types"] = types;
  ordered_json transfer = ordered_json::array();
  for (int m = 0; m < c.num_states(); ++m)
    for (int d = 0; d < static_cast<int>(c.transfer[m].size()); ++d) {
      ordered_json e;
      e["from"] = c.state_names[m];
      e["direction"] = lib.directions[d];
      e["to"] = c.state_names[c.transfer[m][d]];
      transfer.push_back(e);
    }
  j["transfer"] = transfer;
  return j;
}

Composer composer_from_json(const ordered_json& j, const Library& lib) {
  expect_schema(j, "composer-v1");
  Composer c;
  c.state_names = string_list(j, "states");
  c.initial = name_id(c.state_names, j.at("initial").get<std::string>(), "composer state");
  std::vector<std::string> comp_names;
  for (const auto& comp : lib.components) comp_names.push_back(comp.name);
  for (const auto& t : j.at("types"))
    c.type_of.push_back(name_id(comp_names, t.get<std::string>(), "component"));
  c.transfer.assign(c.num_states(), std::vector<int>(lib.width(), -1));
  for (const auto& e : j.at("transfer")) {
    int m = name_id(c.state_names, e.at("from").get<std::string>(), "composer state");
    int d = name_id(lib.directions, e.at("direction").get<std::string>(), "direction");
    c.transfer[m][d] = name_id(c.state_names, e.at("to").get<std::string>(), "composer state");
  }
  for (const auto& row : c.transfer)
    for (int t : row)
      if (t < 0) throw ParseError("composer: transfer function not total");
  return c;
}

ordered_json dpw_to_json(const Dpw& d) {
  ordered_json j;
  j["schema"] = "dpw-v1";
  j["alphabet"] = d.alphabet;
  j["states"] = d.states;
  j["initial"] = d.states[d.initial];
  j["priorities"] = d.priorities;
  ordered_json delta = ordered_json::array();
  for (int s = 0; s < d.num_states(); ++s)
    for (size_t x = 0; x < d.alphabet.size(); ++x) {
      ordered_json e;
      e["from"] = d.states[s];
      e["letter"] = d.alphabet[x];
      e["to"] = d.states[d.delta[s][x]];
      delta.push_back(e);
    }
  j["delta"] = delta;
  return j;
}

Dpw dpw_from_json(const ordered_json& j) {
  expect_schema(j, "dpw-v1");
  Dpw d;
  d.alphabet = string_list(j, "alphabet");
  d.states = string_list(j, "states");
  d.initial = name_id(d.states, j.at("initial").get<std::string>(), "state");
  for (const auto& p : j.at("priorities")) d.priorities.push_back(p.get<int>());
  if (d.priorities.size() != d.states.size()) throw ParseError("dpw: priorities not total");
  d.delta.assign(d.num_states(), std::vector<int>(d.alphabet.size(), -1));
  for (const auto& e : j.at("delta")) {
    int s = name_id(d.states, e.at("from").get<std::string>(), "state");
    int x = name_id(d.alphabet, e.at("letter").get<std::string>(), "letter");
    d.delta[s][x] = name_id(d.states, e.at("to").get<std::string>(), "state");
  }
  for (const auto& row : d.delta)
    for (int t : row)
      if (t < 0) throw ParseError("dpw: transition function not total");
  return d;
}

ordered_json game_to_json(const StochasticGame& g) {
  ordered_json j;
  j["schema"] = "game-v1";
  j["actions1"] = g.actions1;
  j["actions2"] = g.actions2;
  ordered_json states = ordered_json::array();
  for (int s = 0; s < g.num_states(); ++s) {
    ordered_json e;
    e["name"] = g.state_names[s];
    e["owner"] = g.owner1[s] ? 1 : 2;
    e["priority"] = g.priorities[s];
    states.push_back(e);
  }
  j["states"] = states;
  j["initial"] = g.state_names[g.initial];
  ordered_json delta = ordered_json::array();
  for (int s = 0; s < g.num_states(); ++s) {
    const auto& names = g.owner1[s] ? g.actions1 : g.actions2;
    for (size_t a = 0; a < g.delta[s].size(); ++a) {
      if (g.delta[s][a].empty()) continue;
      ordered_json e;
      e["from"] = g.state_names[s];
      e["action"] = names[a];
      e["to"] = dist_to_json(g.delta[s][a], g.state_names);
      delta.push_back(e);
    }
  }
  j["delta"] = delta;
  return j;
}

StochasticGame game_from_json(const ordered_json& j) {
  expect_schema(j, "game-v1");
  StochasticGame g;
  g.actions1 = string_list(j, "actions1");
  g.actions2 = string_list(j, "actions2");
  for (const auto& e : j.at("states")) {
    g.state_names.push_back(e.at("name").get<std::string>());
    int owner = e.at("owner").get<int>();
    if (owner != 1 && owner != 2) throw ParseError("game: owner must be 1 or 2");
    g.owner1.push_back(owner == 1);
    g.priorities.push_back(e.at("priority").get<int>());
  }
  g.initial = name_id(g.state_names, j.at("initial").get<std::string>(), "state");
  g.delta.resize(g.num_states());
  for (int s = 0; s < g.num_states(); ++s)
    g.delta[s].resize(g.owner1[s] ? g.actions1.size() : g.actions2.size());
  for (const auto& e : j.at("delta")) {
    int s = name_id(g.state_names, e.at("from").get<std::string>(), "state");
    const auto& names = g.owner1[s] ? g.actions1 : g.actions2;
    int a = name_id(names, e.at("action").get<std::string>(), "action");
    g.delta[s][a] = dist_from_json(e.at("to"), g.state_names);
  }
  return g;
}

ordered_json observed_to_json(const ObservedGame& og) {
  ordered_json j = game_to_json(og.game);
  j["schema"] = "observed-game-v1";
  j["observations"] = og.obs_names;
  ordered_json m = ordered_json::array();
  for (int s = 0; s < og.game.num_states(); ++s) m.push_back(og.obs_names[og.obs[s]]);
  j["obs"] = m;
  return j;
}

ObservedGame observed_from_json(const ordered_json& j) {
  expect_schema(j, "observed-game-v1");
  ordered_json base = j;
  base["schema"] = "game-v1";
  ObservedGame og;
  og.game = game_from_json(base);
  og.obs_names = string_list(j, "observations");
  for (const auto& o : j.at("obs"))
    og.obs.push_back(name_id(og.obs_names, o.get<std::string>(), "observation"));
  if (og.obs.size() != static_cast<size_t>(og.game.num_states()))
    throw ParseError("observed game: obs map not total");
  return og;
}

ordered_json pa_to_json(const ProbabilisticAutomaton& a) {
  ordered_json j;
  j["schema"] = "pa-v1";
  j["alphabet"] = a.alphabet;
  j["states"] = a.states;
  j["initial"] = a.states[a.initial];
  j["priorities"] = a.priorities;
  ordered_json delta = ordered_json::array();
  for (int q = 0; q < a.num_states(); ++q)
    for (size_t x = 0; x < a.alphabet.size(); ++x) {
      ordered_json e;
      e["from"] = a.states[q];
      e["letter"] = a.alphabet[x];
      e["to"] = dist_to_json(a.delta[q][x], a.states);
      delta.push_back(e);
    }
  j["delta"] = delta;
  return j;
}

ProbabilisticAutomaton pa_from_json(const ordered_json& j) {
  expect_schema(j, "pa-v1");
  ProbabilisticAutomaton a;
  a.alphabet = string_list(j, "alphabet");
  a.states = string_list(j, "states");
  a.initial = name_id(a.states, j.at("initial").get<std::string>(), "state");
  for (const auto& p : j.at("priorities")) a.priorities.push_back(p.get<int>());
  a.delta.assign(a.num_states(), std::vector<Distribution>(a.alphabet.size()));
  for (const auto& e : j.at("delta")) {
    int q = name_id(a.states, e.at("from").get<std::string>(), "state");
    int x = name_id(a.alphabet, e.at("letter").get<std::string>(), "letter");
    a.delta[q][x] = dist_from_json(e.at("to"), a.states);
  }
  return a;
}

ordered_json relation_to_json(const ExitControlRelation& r) {
  ordered_json j;
  j["schema"] = "relation-v1";
  ordered_json pairs = ordered_json::array();
  for (const auto& [d, c] : r.pairs) {
    ordered_json e;
    e["direction"] = d;
    e["component"] = c;
    pairs.push_back(e);
  }
  j["pairs"] = pairs;
  return j;
}

ExitControlRelation relation_from_json(const ordered_json& j) {
  expect_schema(j, "relation-v1");
  ExitControlRelation r;
  for (const auto& e : j.at("pairs"))
    r.insert(e.at("direction").get<int>(), e.at("component").get<int>());
  return r;
}

ordered_json index_to_json(const std::vector<IndexFunction>& alpha) {
  ordered_json j;
  j["schema"] = "index-v1";
  j["priorities"] = alpha;
  return j;
}

std::vector<IndexFunction> index_from_json(const ordered_json& j) {
  expect_schema(j, "index-v1");
  std::vector<IndexFunction> alpha;
  for (const auto& row : j.at("priorities")) {
    IndexFunction f;
    for (const auto& p : row) f.push_back(p.get<int>());
    alpha.push_back(std::move(f));
  }
  return alpha;
}

std::string render(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json parse_document(const std::string& text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

Lasso lasso_from_text(const std::string& text, const std::vector<std::string>& alphabet) {
  auto semi = text.find(';');
  if (semi == std::string::npos) throw ParseError("lasso: expected 'prefix ; cycle'");
  auto tokens = [&](const std::string& part) {
    std::vector<int> out;
    std::istringstream ss(part);
    std::string tok;
    while (ss >> tok) out.push_back(name_id(alphabet, tok, "letter"));
    return out;
  };
  Lasso w;
  w.prefix = tokens(text.substr(0, semi));
  w.cycle = tokens(text.substr(semi + 1));
  if (w.cycle.empty()) throw ParseError("lasso: cycle must be non-empty");
  return w;
}

std::string lasso_to_text(const Lasso& w, const std::vector<std::string>& alphabet) {
  std::ostringstream ss;
  for (size_t i = 0; i < w.prefix.size(); ++i) ss << (i ? " " : "") << alphabet[w.prefix[i]];
  ss << " ;";
  for (int x : w.cycle) ss << " " << alphabet[x];
  return ss.str();
}

namespace {
std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}
}  // namespace

std::string dot_composed(const ComposedTransducer& t, const IndexFunction* alpha) {
  std::ostringstream ss;
  ss << "digraph composition {\n  rankdir=LR;\n";
  for (int s = 0; s < t.num_states(); ++s) {
    ss << "  n" << s << " [label=\"" << dot_escape(t.state_names[s]) << "\\nout="
       << dot_escape(t.output_letters[t.labels[s]]);
    if (alpha) ss << " p=" << (*alpha)[s];
    ss << "\"";
    if (s == t.initial) ss << ", penwidth=2";
    ss << "];\n";
  }
  for (int s = 0; s < t.num_states(); ++s)
    for (size_t a = 0; a < t.delta[s].size(); ++a)
      for (const auto& [u, p] : t.delta[s][a].support)
        ss << "  n" << s << " -> n" << u << " [label=\"" << dot_escape(t.input_letters[a])
           << ":" << p.str() << "\"];\n";
  ss << "}\n";
  return ss.str();
}

std::string dot_game(const StochasticGame& g) {
  std::ostringstream ss;
  ss << "digraph game {\n  rankdir=LR;\n";
  for (int s = 0; s < g.num_states(); ++s) {
    ss << "  n" << s << " [shape=" << (g.owner1[s] ? "box" : "ellipse") << ", label=\""
       << dot_escape(g.state_names[s]) << "\\n" << g.priorities[s] << "\"";
    if (s == g.initial) ss << ", penwidth=2";
    ss << "];\n";
  }
  for (int s = 0; s < g.num_states(); ++s) {
    const auto& names = g.owner1[s] ? g.actions1 : g.actions2;
    for (size_t a = 0; a < g.delta[s].size(); ++a)
      for (const auto& [u, p] : g.delta[s][a].support)
        ss << "  n" << s << " -> n" << u << " [label=\"" << dot_escape(names[a]) << ":"
           << p.str() << "\"];\n";
  }
  ss << "}\n";
  return ss.str();
}

std::string dot_observed(const ObservedGame& og) {
  static const char* palette[] = {"lightblue", "lightyellow", "lightpink",  "lightgreen",
                                  "orange",    "violet",      "lightcyan",  "wheat",
                                  "salmon",    "palegreen",   "lightgray", "gold"};
  const StochasticGame& g = og.game;
  std::ostringstream ss;
  ss << "digraph observed {\n  rankdir=LR;\n";
  for (int s = 0; s < g.num_states(); ++s) {
    ss << "  n" << s << " [shape=" << (g.owner1[s] ? "box" : "ellipse")
       << ", style=filled, fillcolor=" << palette[og.obs[s] % 12] << ", label=\""
       << dot_escape(g.state_names[s]) << "\\n" << g.priorities[s] << " | "
       << dot_escape(og.obs_names[og.obs[s]]) << "\"";
    if (s == g.initial) ss << ", penwidth=2";
    ss << "];\n";
  }
  for (int s = 0; s < g.num_states(); ++s) {
    const auto& names = g.owner1[s] ? g.actions1 : g.actions2;
    for (size_t a = 0; a < g.delta[s].size(); ++a)
      for (const auto& [u, p] : g.delta[s][a].support)
        ss << "  n" << s << " -> n" << u << " [label=\"" << dot_escape(names[a]) << ":"
           << p.str() << "\"];\n";
  }
  ss << "}\n";
  return ss.str();
}

}  // namespace composynth
