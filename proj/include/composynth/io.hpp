#pragma once

#include <string>

#include "composynth/composition.hpp"
#include "composynth/core.hpp"
#include "composynth/dpwsynth.hpp"
#include "composynth/embedded.hpp"
#include "composynth/pagadget.hpp"
#include "composynth/posgames.hpp"

#include "json.hpp"

namespace composynth {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

// Every artifact is one JSON document with a mandatory schema tag;
// rationals are "num/den" strings. Printing is canonical, so parsing a
// printed document and printing again is the identity byte for byte.

nlohmann::ordered_json library_to_json(const Library& lib);
Library library_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json composer_to_json(const Composer& c, const Library& lib);
Composer composer_from_json(const nlohmann::ordered_json& j, const Library& lib);

nlohmann::ordered_json dpw_to_json(const Dpw& d);
Dpw dpw_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json game_to_json(const StochasticGame& g);
StochasticGame game_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json observed_to_json(const ObservedGame& og);
ObservedGame observed_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json pa_to_json(const ProbabilisticAutomaton& a);
ProbabilisticAutomaton pa_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json relation_to_json(const ExitControlRelation& r);
ExitControlRelation relation_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json index_to_json(const std::vector<IndexFunction>& alpha);
std::vector<IndexFunction> index_from_json(const nlohmann::ordered_json& j);

std::string render(const nlohmann::ordered_json& j);  // canonical text form
nlohmann::ordered_json parse_document(const std::string& text, const std::string& what);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Lasso text form: letters separated by spaces, prefix and cycle split by
/// ';' (e.g. "0 1 ; 1"). Letters are resolved against the given alphabet.
Lasso lasso_from_text(const std::string& text, const std::vector<std::string>& alphabet);
std::string lasso_to_text(const Lasso& w, const std::vector<std::string>& alphabet);

std::string dot_composed(const ComposedTransducer& t, const IndexFunction* alpha);
std::string dot_game(const StochasticGame& g);
std::string dot_observed(const ObservedGame& og);

}  // namespace composynth
