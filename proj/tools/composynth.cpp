#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "composynth/gen.hpp"
#include "composynth/io.hpp"
#include "composynth/solve.hpp"

using namespace composynth;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;
constexpr int kExitInputError = 2;

Library load_library(const std::string& path) {
  return library_from_json(parse_document(read_file(path), path));
}

std::vector<IndexFunction> load_index(const std::string& path) {
  return index_from_json(parse_document(read_file(path), path));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

ordered_json report_json(const SynthReport& r, const Library& lib) {
  ordered_json j;
  j["schema"] = "report-v1";
  j["realizable"] = r.realizable;
  j["method"] = r.method;
  j["value"] = r.value.str();
  if (r.composer) {
    j["certified_value"] = r.certified.str();
    j["composer"] = composer_to_json(*r.composer, lib);
    ordered_json cert;
    cert["check"] = "value of the composed transducer, exact";
    cert["composition_value"] = r.certified.str();
    j["certificate"] = cert;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composer synthesis from libraries of probabilistic components"};
  app.require_subcommand(1);

  std::string lib_path, index_path, relation_path, dpw_path, game_path, in_path, out_path;
  std::string out_lib, out_dpw, out_index, out_relation, composer_path, lasso_text, report_path;
  std::string kind;
  bool quantitative = false;
  std::string eta_text = "1/2";
  int mem_bound = 2;
  unsigned long long seed = 1;
  int opt_states = 4, opt_comps = 2, opt_width = 1, opt_inputs = 2, opt_letters = 2,
      opt_prio = 3, opt_obs = 3, opt_a1 = 2, opt_a2 = 2;

  auto* synth = app.add_subcommand("synth", "synthesize a composer");
  auto* se = synth->add_subcommand("embedded", "embedded parity specification");
  se->add_option("--library", lib_path)->required();
  se->add_option("--index", index_path)->required();
  se->add_option("--relation", relation_path);
  se->add_flag("--quantitative", quantitative);
  se->add_option("--eta", eta_text);
  se->add_option("--out", out_path);
  se->add_option("--report", report_path);

  auto* su = synth->add_subcommand("unrestricted", "embedded parity, unrestricted exit control");
  su->add_option("--library", lib_path)->required();
  su->add_option("--index", index_path)->required();
  su->add_flag("--quantitative", quantitative);
  su->add_option("--eta", eta_text);
  su->add_option("--out", out_path);
  su->add_option("--report", report_path);

  auto* sd = synth->add_subcommand("dpw", "deterministic parity automaton specification");
  sd->add_option("--library", lib_path)->required();
  sd->add_option("--dpw", dpw_path)->required();
  sd->add_option("--mem-bound", mem_bound);
  sd->add_option("--out", out_path);
  sd->add_option("--report", report_path);

  auto* red = app.add_subcommand("reduce", "game reductions");
  auto* rc = red->add_subcommand("collapsed", "collapsed-stutter-invariant to observation-based");
  rc->add_option("--in", in_path)->required();
  rc->add_option("--out", out_path);
  auto* rs = red->add_subcommand("stutter", "stutter-invariant to observation-based");
  rs->add_option("--in", in_path)->required();
  rs->add_option("--out", out_path);
  auto* rl = red->add_subcommand("lowerbound", "insert distinct-observation relays");
  rl->add_option("--in", in_path)->required();
  rl->add_option("--out", out_path);
  auto* rp = red->add_subcommand("product", "library x monitor observation game");
  rp->add_option("--library", lib_path)->required();
  rp->add_option("--dpw", dpw_path)->required();
  rp->add_option("--out", out_path);
  auto* rg = red->add_subcommand("game", "library to perfect-information game");
  rg->add_option("--library", lib_path)->required();
  rg->add_option("--index", index_path)->required();
  rg->add_option("--relation", relation_path);
  rg->add_option("--out", out_path);

  auto* gad = app.add_subcommand("gadget", "hardness and undecidability constructions");
  auto* gp = gad->add_subcommand("parity", "parity game to library");
  gp->add_option("--game", game_path)->required();
  gp->add_option("--out-lib", out_lib);
  gp->add_option("--out-index", out_index);
  gp->add_option("--out-relation", out_relation);
  auto* ga = gad->add_subcommand("pa", "probabilistic automaton to library + monitor");
  ga->add_option("--in", in_path)->required();
  ga->add_option("--out-lib", out_lib);
  ga->add_option("--out-dpw", out_dpw);

  auto* ver = app.add_subcommand("verify", "re-check an artifact");
  auto* vc = ver->add_subcommand("composer", "certify a composer against a specification");
  vc->add_option("--library", lib_path)->required();
  vc->add_option("--composer", composer_path)->required();
  vc->add_option("--index", index_path);
  vc->add_option("--dpw", dpw_path);
  vc->add_flag("--quantitative", quantitative);
  vc->add_option("--eta", eta_text);

  auto* ora = app.add_subcommand("oracle", "exact reference computations");
  auto* op = ora->add_subcommand("pa-lasso", "acceptance probability of a lasso word");
  op->add_option("--automaton", in_path)->required();
  op->add_option("--lasso", lasso_text)->required();

  auto* exp = app.add_subcommand("export", "export artifacts");
  auto* ed = exp->add_subcommand("dot", "graphviz rendering");
  ed->add_option("--game", game_path);
  ed->add_option("--observed", in_path);
  ed->add_option("--library", lib_path);
  ed->add_option("--composer", composer_path);
  ed->add_option("--index", index_path);
  ed->add_option("--out", out_path);

  auto* gen = app.add_subcommand("gen", "seeded instance generators");
  gen->add_option("kind", kind, "library|index|composer|relation|game|alternating|observed|pa|dpw")
      ->required();
  gen->add_option("--seed", seed);
  gen->add_option("--states", opt_states);
  gen->add_option("--components", opt_comps);
  gen->add_option("--width", opt_width);
  gen->add_option("--inputs", opt_inputs);
  gen->add_option("--letters", opt_letters);
  gen->add_option("--max-priority", opt_prio);
  gen->add_option("--observations", opt_obs);
  gen->add_option("--actions1", opt_a1);
  gen->add_option("--actions2", opt_a2);
  gen->add_option("--library", lib_path);
  gen->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (se->parsed() || su->parsed()) {
      Library lib = load_library(lib_path);
      auto alpha = load_index(index_path);
      SynthMode mode = quantitative ? SynthMode::Quantitative : SynthMode::Qualitative;
      Rational eta = Rational::parse(eta_text);
      SynthReport rep;
      if (se->parsed()) {
        EmbeddedProblem p;
        p.library = lib;
        p.alpha = alpha;
        p.mode = mode;
        p.eta = eta;
        p.relation = relation_path.empty()
                         ? ExitControlRelation::unrestricted(lib.width(), lib.size())
                         : relation_from_json(parse_document(read_file(relation_path),
                                                             relation_path));
        rep = synth_embedded(p);
      } else {
        rep = synth_unrestricted(lib, alpha, mode, eta);
      }
      ordered_json j = report_json(rep, lib);
      if (!report_path.empty()) emit(report_path, render(j));
      if (rep.composer && !out_path.empty())
        emit(out_path, render(composer_to_json(*rep.composer, lib)));
      std::cout << (rep.realizable ? "realizable" : "not realizable") << " value=" << rep.value
                << "\n";
      return rep.realizable ? kExitOk : kExitNo;
    }
    if (sd->parsed()) {
      DpwProblem p;
      p.library = load_library(lib_path);
      p.monitor = dpw_from_json(parse_document(read_file(dpw_path), dpw_path));
      p.mem_bound = mem_bound;
      DpwSynthReport rep = synth_dpw_qualitative(p);
      ordered_json j;
      j["schema"] = "report-v1";
      j["realizable"] = rep.realizable;
      j["mem_bound"] = rep.mem_bound;
      j["note"] = rep.note;
      j["explored"] = rep.explored;
      if (rep.composer) {
        j["composer"] = composer_to_json(*rep.composer, p.library);
        ordered_json cert;
        cert["check"] = "value_dpw of the composition equals 1, exact";
        j["certificate"] = cert;
        if (!out_path.empty()) emit(out_path, render(composer_to_json(*rep.composer, p.library)));
      }
      if (!report_path.empty()) emit(report_path, render(j));
      std::cout << rep.note << "\n";
      return rep.realizable ? kExitOk : kExitNo;
    }
    if (rc->parsed() || rs->parsed() || rl->parsed()) {
      ObservedGame og = observed_from_json(parse_document(read_file(in_path), in_path));
      ObservedGame out = rc->parsed()   ? reduce_collapsed(og).og
                         : rs->parsed() ? reduce_stutter(og).og
                                        : lower_bound_gadget(og);
      emit(out_path, render(observed_to_json(out)));
      return kExitOk;
    }
    if (rp->parsed()) {
      DpwProblem p;
      p.library = load_library(lib_path);
      p.monitor = dpw_from_json(parse_document(read_file(dpw_path), dpw_path));
      emit(out_path, render(observed_to_json(build_product_game(p))));
      return kExitOk;
    }
    if (rg->parsed()) {
      EmbeddedProblem p;
      p.library = load_library(lib_path);
      p.alpha = load_index(index_path);
      p.relation = relation_path.empty()
                       ? ExitControlRelation::unrestricted(p.library.width(), p.library.size())
                       : relation_from_json(parse_document(read_file(relation_path),
                                                           relation_path));
      emit(out_path, render(game_to_json(build_game(p))));
      return kExitOk;
    }
    if (gp->parsed()) {
      StochasticGame g = game_from_json(parse_document(read_file(game_path), game_path));
      StochasticGame alt = is_alternating(g) && g.deterministic() ? g : make_alternating(g);
      EmbeddedProblem p = parity_game_to_library(alt, SynthMode::Qualitative);
      if (!out_lib.empty()) emit(out_lib, render(library_to_json(p.library)));
      if (!out_index.empty()) emit(out_index, render(index_to_json(p.alpha)));
      if (!out_relation.empty()) emit(out_relation, render(relation_to_json(p.relation)));
      if (out_lib.empty() && out_index.empty() && out_relation.empty())
        std::cout << render(library_to_json(p.library));
      return kExitOk;
    }
    if (ga->parsed()) {
      ProbabilisticAutomaton a = pa_from_json(parse_document(read_file(in_path), in_path));
      if (!out_lib.empty()) emit(out_lib, render(library_to_json(pa_to_library(a))));
      if (!out_dpw.empty()) emit(out_dpw, render(dpw_to_json(pa_to_dpw(a))));
      if (out_lib.empty() && out_dpw.empty())
        std::cout << render(library_to_json(pa_to_library(a)));
      return kExitOk;
    }
    if (vc->parsed()) {
      Library lib = load_library(lib_path);
      Composer c = composer_from_json(parse_document(read_file(composer_path), composer_path),
                                      lib);
      auto rep = validate_composer(c, lib);
      if (!rep.ok()) {
        std::cerr << "invalid composer: " << rep.problems.front() << "\n";
        return kExitInputError;
      }
      ComposedTransducer t = compose(c, lib);
      Rational value;
      if (!dpw_path.empty()) {
        Dpw mon = dpw_from_json(parse_document(read_file(dpw_path), dpw_path));
        value = value_dpw(t, mon);
      } else if (!index_path.empty()) {
        auto alpha = load_index(index_path);
        value = value_embedded(t, lift_index(alpha, c, t));
      } else {
        std::cerr << "verify composer needs --index or --dpw\n";
        return kExitInputError;
      }
      Rational bar = quantitative ? Rational::parse(eta_text) : Rational(1);
      std::cout << "value=" << value << (value >= bar ? " (certified)" : " (below threshold)")
                << "\n";
      return value >= bar ? kExitOk : kExitNo;
    }
    if (op->parsed()) {
      ProbabilisticAutomaton a = pa_from_json(parse_document(read_file(in_path), in_path));
      Lasso w = lasso_from_text(lasso_text, a.alphabet);
      std::cout << pa_lasso_value(a, w) << "\n";
      return kExitOk;
    }
    if (ed->parsed()) {
      std::string dot;
      if (!game_path.empty()) {
        dot = dot_game(game_from_json(parse_document(read_file(game_path), game_path)));
      } else if (!in_path.empty()) {
        dot = dot_observed(observed_from_json(parse_document(read_file(in_path), in_path)));
      } else if (!lib_path.empty() && !composer_path.empty()) {
        Library lib = load_library(lib_path);
        Composer c = composer_from_json(parse_document(read_file(composer_path), composer_path),
                                        lib);
        ComposedTransducer t = compose(c, lib);
        if (!index_path.empty()) {
          IndexFunction alpha = lift_index(load_index(index_path), c, t);
          dot = dot_composed(t, &alpha);
        } else {
          dot = dot_composed(t, nullptr);
        }
      } else {
        std::cerr << "export dot needs --game, --observed, or --library with --composer\n";
        return kExitInputError;
      }
      emit(out_path, dot);
      return kExitOk;
    }
    if (gen->parsed()) {
      Rng rng(seed);
      std::string text;
      if (kind == "library") {
        text = render(library_to_json(gen_library(rng, opt_comps, opt_states, opt_width,
                                                  opt_inputs)));
      } else if (kind == "index") {
        Library lib = load_library(lib_path);
        text = render(index_to_json(gen_library_index(rng, lib, opt_prio)));
      } else if (kind == "composer") {
        Library lib = load_library(lib_path);
        text = render(composer_to_json(gen_composer(rng, lib, opt_states), lib));
      } else if (kind == "relation") {
        Library lib = load_library(lib_path);
        text = render(relation_to_json(gen_relation(rng, lib.width(), lib.size())));
      } else if (kind == "game") {
        text = render(game_to_json(gen_game(rng, opt_states, opt_a1, opt_a2, opt_prio, false)));
      } else if (kind == "alternating") {
        text = render(game_to_json(
            gen_alternating_game(rng, std::max(1, opt_states / 2), std::max(1, opt_states / 2),
                                 opt_a1, opt_a2, opt_prio)));
      } else if (kind == "observed") {
        text = render(observed_to_json(
            gen_observed_game(rng, opt_states, opt_a1, opt_a2, opt_prio, opt_obs)));
      } else if (kind == "pa") {
        text = render(pa_to_json(gen_pa(rng, opt_states, opt_letters, opt_prio)));
      } else if (kind == "dpw") {
        std::vector<std::string> alphabet;
        for (int i = 0; i < opt_letters; ++i) alphabet.push_back("l" + std::to_string(i));
        text = render(dpw_to_json(gen_dpw(rng, alphabet, opt_states, opt_prio)));
      } else {
        std::cerr << "unknown kind '" << kind << "'\n";
        return kExitInputError;
      }
      emit(out_path, text);
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
