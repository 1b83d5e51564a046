#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "composynth/rational.hpp"

namespace composynth {

// Identifiers are indices into name vectors; names are kept once and all
// internal references use the stable integer id. Iteration over ids is
// always in increasing order, which keeps every output reproducible.

/// Probability distribution over state ids. Zero-probability entries are
/// never stored.
struct Distribution {
  std::map<int, Rational> support;

  void add(int target, const Rational& p);
  const Rational& prob(int target) const;  // 0 if absent
  bool is_point_mass() const { return support.size() == 1 && support.begin()->second.is_one(); }
  Rational total() const;
  bool is_stochastic() const;  // all in (0,1], sum exactly 1
  bool empty() const { return support.empty(); }

  static Distribution point(int target);

  bool operator==(const Distribution& o) const { return support == o.support; }
};

/// Priority assignment, indexed by state id of whatever structure it
/// belongs to. Min-parity convention throughout: a run is accepted iff the
/// minimum priority visited infinitely often is even.
using IndexFunction = std::vector<int>;

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  void note(const std::string& p) { problems.push_back(p); }
};

/// Probabilistic transducer with exit states. delta[q][a] is empty for
/// exit states (no transitions out of an exit) and must be stochastic
/// everywhere else. exits[d] names the exit state for direction d.
struct Component {
  std::string name;
  std::vector<std::string> input_letters;   // shared across a library
  std::vector<std::string> output_letters;  // shared across a library
  std::vector<std::string> states;
  int initial = 0;
  std::vector<std::vector<Distribution>> delta;  // [state][letter]
  std::vector<int> exits;                        // direction -> exit state
  std::vector<int> labels;                       // state -> output letter

  int num_states() const { return static_cast<int>(states.size()); }
  bool is_exit(int q) const;
  std::optional<int> exit_direction(int q) const;
};

struct Library {
  std::vector<Component> components;
  std::vector<std::string> directions;

  int width() const { return static_cast<int>(directions.size()); }
  int size() const { return static_cast<int>(components.size()); }  // k+1
};

/// Allowed (direction, next component) pairs. Non-blocking means every
/// direction has at least one allowed successor component.
struct ExitControlRelation {
  std::vector<std::pair<int, int>> pairs;  // sorted, unique

  void insert(int direction, int component);
  bool contains(int direction, int component) const;
  bool non_blocking(int width) const;
  static ExitControlRelation unrestricted(int width, int num_components);

  bool operator==(const ExitControlRelation& o) const { return pairs == o.pairs; }
};

/// Deterministic control-transfer transducer: states name component
/// instances, transfer moves control from an exit direction to the next
/// instance.
struct Composer {
  std::vector<std::string> state_names;
  int initial = 0;
  std::vector<std::vector<int>> transfer;  // [state][direction] -> state
  std::vector<int> type_of;                // [state] -> component index

  int num_states() const { return static_cast<int>(state_names.size()); }
};

/// Deterministic parity word automaton. delta is total.
struct Dpw {
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  int initial = 0;
  std::vector<std::vector<int>> delta;  // [state][letter]
  IndexFunction priorities;

  int num_states() const { return static_cast<int>(states.size()); }
  int letter_id(const std::string& name) const;  // -1 if absent
};

/// Ultimately periodic word w1 (w2)^omega; letters are ids into whatever
/// alphabet the consumer expects.
struct Lasso {
  std::vector<int> prefix;
  std::vector<int> cycle;  // non-empty
};

struct WidthExceeded : std::runtime_error {
  explicit WidthExceeded(const std::string& m) : std::runtime_error(m) {}
};
struct AlphabetMismatch : std::runtime_error {
  explicit AlphabetMismatch(const std::string& m) : std::runtime_error(m) {}
};
struct TypeMismatch : std::runtime_error {
  explicit TypeMismatch(const std::string& m) : std::runtime_error(m) {}
};

ValidationReport validate_component(const Component& c);
ValidationReport validate_library(const Library& lib);
ValidationReport validate_composer(const Composer& c, const Library& lib);

/// Pads every component with unreachable dummy exits until it has exactly
/// |directions| of them. Dummy exits emit a reserved output letter that is
/// appended to the shared output alphabet when needed. An index function
/// over the library, when supplied, is extended with the maximum odd
/// priority on the new states.
Library normalize_width(const Library& lib, const std::vector<std::string>& directions,
                        std::vector<IndexFunction>* alpha = nullptr);

/// Runs the DPW on w1 (w2)^omega by cycle detection over (state, position)
/// pairs and checks that the minimal priority on the cycle is even.
bool dpw_lasso_accepts(const Dpw& a, const Lasso& w);

/// True iff every transfer edge of the composer is allowed by R.
bool check_compatibility(const Composer& c, const ExitControlRelation& r);

}  // namespace composynth
